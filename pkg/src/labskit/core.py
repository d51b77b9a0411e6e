"""LABS objective: exact energies, flip deltas, symmetries, brute force.

A sequence is stored as an int8 array of +1/-1 spins. Text forms accepted
everywhere: '+'/'-' characters, or 0/1 bitstrings with 0 -> +1 and
1 -> -1 (the convention used when decoding measured bitstrings).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class SpinSequence:
    spins: np.ndarray

    def __post_init__(self):
        arr = np.array(self.spins, dtype=np.int8)  # private copy; frozen below
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise ValueError("a spin sequence needs at least 2 entries")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("spins must be +1 or -1")
        object.__setattr__(self, "spins", arr)
        self.spins.setflags(write=False)

    @property
    def n(self) -> int:
        return self.spins.shape[0]

    @classmethod
    def from_text(cls, text: str) -> "SpinSequence":
        """Parse '+-' signs or a 0/1 bitstring (0 -> +1, 1 -> -1)."""
        text = text.strip()
        if set(text) <= {"+", "-"}:
            vals = [1 if ch == "+" else -1 for ch in text]
        elif set(text) <= {"0", "1"}:
            vals = [1 if ch == "0" else -1 for ch in text]
        else:
            raise ValueError(f"unrecognized sequence text: {text!r}")
        return cls(np.array(vals, dtype=np.int8))

    def to_signs(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.spins)

    def to_bits(self) -> str:
        return "".join("0" if s > 0 else "1" for s in self.spins)


@dataclass(frozen=True)
class AutocorrelationProfile:
    c: np.ndarray
    energy: int

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=np.int64))


@dataclass(frozen=True)
class BruteForceResult:
    optimal_energy: int
    one_optimum: SpinSequence
    optimum_count: int
    states_visited: int


def energy(seq: SpinSequence) -> int:
    return int(kernels.energy_from_c(kernels.autocorr(seq.spins)))


def autocorrelations(seq: SpinSequence) -> AutocorrelationProfile:
    c = kernels.autocorr(seq.spins)
    return AutocorrelationProfile(c=c, energy=int(kernels.energy_from_c(c)))


def flip_delta(seq: SpinSequence, profile: AutocorrelationProfile, i: int):
    """Energy delta and updated profile for flipping spin i (1-based).

    O(n); does not mutate its inputs.
    """
    n = seq.n
    if not 1 <= i <= n:
        raise IndexError(f"flip index {i} outside [1, {n}]")
    spins = seq.spins.copy()
    c = profile.c.copy()
    delta = int(kernels.flip_delta_peek(spins, c, i - 1))
    kernels.apply_flip(spins, c, i - 1)
    flipped = SpinSequence(spins)
    return delta, flipped, AutocorrelationProfile(c=c, energy=profile.energy + delta)


def _orbit(seq: SpinSequence):
    s = seq.spins
    return [s, -s, s[::-1], -s[::-1]]


def canonical_form(seq: SpinSequence) -> SpinSequence:
    """Lexicographically smallest of {s, -s, reverse(s), -reverse(s)}."""
    best = min(tuple(int(v) for v in img) for img in _orbit(seq))
    return SpinSequence(np.array(best, dtype=np.int8))


def state_to_sequence(index: int, n: int) -> SpinSequence:
    """Basis-state integer to sequence; qubit 1 is the most significant bit."""
    vals = [1 - 2 * ((index >> (n - 1 - j)) & 1) for j in range(n)]
    return SpinSequence(np.array(vals, dtype=np.int8))


def sequence_to_state(seq: SpinSequence) -> int:
    index = 0
    for j, s in enumerate(seq.spins):
        if s < 0:
            index |= 1 << (seq.n - 1 - j)
    return index


def brute_force_optimum(n: int, cap: int = BRUTE_FORCE_CAP) -> BruteForceResult:
    """Exact optimum by Gray-code enumeration of all 2^n states."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > cap:
        raise ValueError(
            f"brute force refused for n={n} > cap {cap}; raise the cap explicitly if intended"
        )
    best_e, best_state, count = kernels.brute_force_scan(n)
    return BruteForceResult(
        optimal_energy=int(best_e),
        one_optimum=state_to_sequence(int(best_state), n),
        optimum_count=int(count),
        states_visited=1 << n,
    )


def uniform_mean_energy(n: int) -> int:
    """Expected energy of a uniform random sequence: n(n-1)/2, exactly."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return n * (n - 1) // 2


def max_energy_bound(n: int) -> int:
    """Upper bound n(n-1)(2n-1)/6, attained by the all-ones sequence."""
    return n * (n - 1) * (2 * n - 1) // 6
