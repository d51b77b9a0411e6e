"""Sparse Pauli-string algebra and the LABS problem Hamiltonian.

Words are tuples of (qubit, axis) with 1-based qubit indices sorted
ascending and axis in {'X','Y','Z'}; the empty tuple is the identity.
Coefficients are complex; exact term merging with pruning below 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import max_energy_bound

PRUNE_TOL = 1e-12

# single-site products: (axis_a, axis_b) -> (phase, axis or None for identity)
_MUL = {
    ("X", "X"): (1, None),
    ("Y", "Y"): (1, None),
    ("Z", "Z"): (1, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_DENSE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def word_mul(w1, w2):
    """Product of two Pauli words: (phase, word)."""
    phase = 1 + 0j
    merged = dict(w1)
    for q, ax in w2:
        if q in merged:
            ph, res = _MUL[(merged[q], ax)]
            phase *= ph
            if res is None:
                del merged[q]
            else:
                merged[q] = res
        else:
            merged[q] = ax
    return phase, tuple(sorted(merged.items()))


class PauliOperator:
    """Immutable-by-convention sparse sum of Pauli words."""

    __slots__ = ("terms", "n_qubits")

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = n_qubits
        self.terms = {}
        if terms:
            for word, coeff in terms.items() if isinstance(terms, dict) else terms:
                self._add_term(word, coeff)
        self._prune()

    def _add_term(self, word, coeff):
        for q, ax in word:
            if not 1 <= q <= self.n_qubits:
                raise ValueError(f"qubit index {q} outside [1, {self.n_qubits}]")
        self.terms[word] = self.terms.get(word, 0j) + complex(coeff)

    def _prune(self):
        self.terms = {w: c for w, c in self.terms.items() if abs(c) > PRUNE_TOL}

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0j) + c
        return PauliOperator(self.n_qubits, out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        return PauliOperator(self.n_qubits, {w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def compose(self, other):
        """Operator product self @ other."""
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                ph, w = word_mul(w1, w2)
                out[w] = out.get(w, 0j) + c1 * c2 * ph
        return PauliOperator(self.n_qubits, out)

    def to_dense(self):
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        for word, coeff in self.terms.items():
            axes = dict(word)
            factors = [_DENSE[axes.get(q, "I")] for q in range(1, self.n_qubits + 1)]
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            mat += coeff * term
        return mat


def commutator(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    if a.n_qubits != b.n_qubits:
        raise ValueError("operator sizes differ")
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            ph12, w12 = word_mul(w1, w2)
            ph21, w21 = word_mul(w2, w1)
            # words either commute (same product word, equal phases) or anticommute
            if w12 == w21 and ph12 == ph21:
                continue
            out[w12] = out.get(w12, 0j) + c1 * c2 * (ph12 - ph21)
    return PauliOperator(a.n_qubits, out)


def hs_inner(a: PauliOperator, b: PauliOperator) -> complex:
    """tr(A^dagger B) / 2^N, exact on the word basis."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("operator sizes differ")
    small, big = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
    acc = 0j
    if small is a.terms:
        for w, c in small.items():
            if w in big:
                acc += np.conj(c) * big[w]
    else:
        for w, c in small.items():
            if w in big:
                acc += np.conj(big[w]) * c
    return acc


@dataclass(frozen=True)
class InteractionSets:
    pairs: list
    quads: list


def build_interaction_sets(n: int) -> InteractionSets:
    """Index sets of the two- and four-body couplings of the objective.

    The two-body sum pairs sigma_i with sigma_{i+2k}: expanding the
    squared autocorrelations, the cross terms with coinciding middle
    index are s_i s_{i+2k}, which the basis-state identity test pins down.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    pairs = []
    for i in range(1, n - 1):
        for k in range(1, (n - i) // 2 + 1):
            pairs.append((i, i + 2 * k))
    quads = []
    for i in range(1, n - 2):
        for t in range(1, (n - i - 1) // 2 + 1):
            for k in range(t + 1, n - i - t + 1):
                quads.append((i, i + t, i + k, i + k + t))
    if len(set(pairs)) != len(pairs) or len(set(quads)) != len(quads):
        raise AssertionError("duplicate interaction tuples")
    return InteractionSets(pairs=pairs, quads=quads)


def term_counts(n: int):
    """Closed-form (n_two, n_four) for the interaction sets."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n % 2 == 0:
        n_two = (n // 2) * (n // 2 - 1)
        n_four = n * (n // 2 - 1) * (2 * n - 5) // 12
    else:
        n_two = ((n - 1) // 2) ** 2
        n_four = (n - 3) * (n - 1) * (2 * n - 1) // 24
    return n_two, n_four


@dataclass(frozen=True)
class LabsHamiltonian:
    operator: PauliOperator
    offset: int  # n(n-1)/2; diagonal expectation plus offset equals E(s)
    n: int
    sets: InteractionSets


def build_hamiltonian(n: int) -> LabsHamiltonian:
    sets = build_interaction_sets(n)
    terms = {}
    for (i, j) in sets.pairs:
        terms[((i, "Z"), (j, "Z"))] = 2.0
    for (a, b, c, d) in sets.quads:
        terms[((a, "Z"), (b, "Z"), (c, "Z"), (d, "Z"))] = 4.0
    op = PauliOperator(n, terms)
    return LabsHamiltonian(operator=op, offset=n * (n - 1) // 2, n=n, sets=sets)


def diagonal_expectations(ham: LabsHamiltonian) -> np.ndarray:
    """<s|H_f|s> for every basis state, via the parity trick; no offset."""
    n = ham.n
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    out = np.zeros(size, dtype=np.float64)
    for word, coeff in ham.operator.terms.items():
        mask = 0
        for q, _ in word:
            mask |= 1 << (n - q)  # qubit q sits at bit n-q (qubit 1 = MSB)
        x = idx & mask
        par = (
            kernels.PARITY16[x & 0xFFFF]
            ^ kernels.PARITY16[(x >> 16) & 0xFFFF]
            ^ kernels.PARITY16[(x >> 32) & 0xFFFF]
        )
        out += coeff.real * (1.0 - 2.0 * par)
    return out


def spectrum_stats(n: int, cap: int = 20) -> dict:
    """Exhaustive spectrum diagnostics for small n."""
    if n > cap:
        raise ValueError(f"spectrum_stats refused for n={n} > cap {cap}")
    energies = kernels.all_energies(n)
    levels = np.unique(energies)
    residues = set(int(e) % 4 for e in levels)
    if len(residues) != 1:
        raise AssertionError(f"energies span several mod-4 residues: {residues}")
    stats = {
        "n": n,
        "distinct_levels": int(levels.shape[0]),
        "min_energy": int(levels[0]),
        "max_energy": int(levels[-1]),
        "mod4_residue": residues.pop(),
        "bound": max_energy_bound(n),
    }
    return stats
