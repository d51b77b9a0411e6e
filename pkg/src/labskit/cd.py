"""First-order counterdiabatic coefficient for the LABS annealing path.

The adiabatic path is H(lam) = (1-lam) H_i + lam H_f with transverse-field
H_i = sum_j h_j^x X_j. The first nested-commutator term is
O1 = [H_ad, H_f - H_i] = [H_i, H_f], independent of lam. We work with the
Hermitian operator G = -i O1 throughout (real coefficients); the factor i
reappears in the rotation-angle convention of the circuit builder.

The coefficient is alpha1(lam) = -Gamma1 / Gamma2(lam) with
Gamma_k = tr[O_k^dag O_k] / 2^N. Since [H_i, G] and [H_f, G] have
orthogonal word supports, Gamma2 is exactly
(1-lam)^2 * g_ii + lam^2 * g_ff, where g_ii has a closed form derived from
the Pauli algebra and g_ff is computed once per (n, fields) by a sparse
commutator. Both are validated against the dense trace oracle in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .pauli import (
    PauliOperator,
    build_hamiltonian,
    build_interaction_sets,
    commutator,
    hs_inner,
)


@dataclass(frozen=True)
class Schedule:
    kind: str = "sin_squared"
    total_time: float = 1.0

    def __post_init__(self):
        if self.kind != "sin_squared":
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")


def schedule_eval(schedule: Schedule, t: float):
    """(lambda, lambda_dot) at time t in [0, T]."""
    T = schedule.total_time
    if not 0 <= t <= T:
        raise ValueError(f"t={t} outside [0, {T}]")
    lam = math.sin(math.pi * t / (2 * T)) ** 2
    lam_dot = (math.pi / (2 * T)) * math.sin(math.pi * t / T)
    return lam, lam_dot


@dataclass(frozen=True)
class FieldConfig:
    n: int
    h_x: tuple = None
    h_b: tuple = None

    def __post_init__(self):
        hx = self.h_x if self.h_x is not None else tuple([-1.0] * self.n)
        hb = self.h_b if self.h_b is not None else tuple([0.0] * self.n)
        if len(hx) != self.n or len(hb) != self.n:
            raise ValueError("field arrays must have length n")
        object.__setattr__(self, "h_x", tuple(float(v) for v in hx))
        object.__setattr__(self, "h_b", tuple(float(v) for v in hb))

    def hx(self, q: int) -> float:
        """Transverse field on qubit q (1-based)."""
        return self.h_x[q - 1]


@dataclass(frozen=True)
class CDCoefficient:
    gamma1: float
    gamma2: float
    alpha1: float
    lam: float


def build_transverse(fields: FieldConfig) -> PauliOperator:
    return PauliOperator(
        fields.n, {((q, "X"),): fields.hx(q) for q in range(1, fields.n + 1)}
    )


def build_adiabatic(n: int, fields: FieldConfig, lam: float) -> PauliOperator:
    return (1 - lam) * build_transverse(fields) + lam * build_hamiltonian(n).operator


def build_O1(n: int, fields: FieldConfig) -> PauliOperator:
    """Closed form of G = -i[H_i, H_f]; one Y per word.

    Pair (a, b): -4 h_a Y_a Z_b - 4 h_b Z_a Y_b. Quad A: -8 h_p with the Y
    on p, for each p in A. With the default h^x = -1 the coefficients are
    +4 and +8.
    """
    if n < 3:
        raise ValueError("n must be >= 3 (no couplings below that)")
    sets = build_interaction_sets(n)
    terms = {}
    for (a, b) in sets.pairs:
        terms[((a, "Y"), (b, "Z"))] = -4.0 * fields.hx(a)
        terms[((a, "Z"), (b, "Y"))] = -4.0 * fields.hx(b)
    for quad in sets.quads:
        for p in quad:
            word = tuple((q, "Y" if q == p else "Z") for q in quad)
            terms[word] = -8.0 * fields.hx(p)
    return PauliOperator(n, terms)


def _sx(fields, tup):
    return sum(fields.hx(p) ** 2 for p in tup)


def _px(fields, tup):
    return sum(
        (fields.hx(tup[i]) * fields.hx(tup[j])) ** 2
        for i in range(len(tup))
        for j in range(i + 1, len(tup))
    )


def gamma1_closed(n: int, fields: FieldConfig) -> float:
    """Gamma1 = 16 sum_{G2} S_x(A) + 64 sum_{G4} S_x(A); lam-independent."""
    sets = build_interaction_sets(n)
    return 16.0 * sum(_sx(fields, p) for p in sets.pairs) + 64.0 * sum(
        _sx(fields, q) for q in sets.quads
    )


def _g_ii_closed(n: int, fields: FieldConfig) -> float:
    """|[H_i, G]|^2 in the normalized trace norm, closed form.

    Per pair: 64 S_x^2 + 256 P_x. Per quad: 256 S_x^2 + 1024 P_x. Exact
    for arbitrary transverse fields; word supports never collide.
    """
    sets = build_interaction_sets(n)
    acc = 0.0
    for p in sets.pairs:
        acc += 64.0 * _sx(fields, p) ** 2 + 256.0 * _px(fields, p)
    for q in sets.quads:
        acc += 256.0 * _sx(fields, q) ** 2 + 1024.0 * _px(fields, q)
    return acc


@lru_cache(maxsize=32)
def _g_ff_cached(n: int, h_x: tuple) -> float:
    """|[H_f, G]|^2: sparse commutator, one-off per (n, fields)."""
    fields = FieldConfig(n, h_x=h_x)
    g = build_O1(n, fields)
    h_f = build_hamiltonian(n).operator
    c_f = commutator(h_f, g)
    return float(hs_inner(c_f, c_f).real)


def gamma2_closed(n: int, fields: FieldConfig, lam: float) -> float:
    """Gamma2(lam) = (1-lam)^2 g_ii + lam^2 g_ff.

    The cross term vanishes: [H_i, G] carries even numbers of Y letters
    while [H_f, G] words carry a single X, so their word sets are
    orthogonal. This replaces the printed closed form, whose
    (1-lam)^2 coefficients disagree with the trace oracle (see tests).
    """
    if not 0 <= lam <= 1:
        raise ValueError("lam must lie in [0, 1]")
    g_ii = _g_ii_closed(n, fields)
    g_ff = _g_ff_cached(n, fields.h_x)
    return (1 - lam) ** 2 * g_ii + lam**2 * g_ff


class SingularCoefficientError(ZeroDivisionError):
    pass


def alpha1(n: int, fields: FieldConfig, lam: float) -> CDCoefficient:
    g1 = gamma1_closed(n, fields)
    g2 = gamma2_closed(n, fields, lam)
    if g2 == 0.0:
        raise SingularCoefficientError(f"Gamma2 vanishes at lambda={lam}")
    a = -g1 / g2
    if not math.isfinite(a):
        raise SingularCoefficientError(f"alpha1 not finite at lambda={lam}")
    return CDCoefficient(gamma1=g1, gamma2=g2, alpha1=a, lam=lam)


# ---- oracles (used by tests and small-n validation) ----


def o1_oracle(n: int, fields: FieldConfig, lam: float = 0.5) -> PauliOperator:
    """-i [H_ad(lam), H_f - H_i], which is lam-independent."""
    h_i = build_transverse(fields)
    h_f = build_hamiltonian(n).operator
    h_ad = (1 - lam) * h_i + lam * h_f
    return -1j * commutator(h_ad, h_f - h_i)


def gamma2_oracle(n: int, fields: FieldConfig, lam: float) -> float:
    """hs_inner(O2, O2) with O2 = [H_ad, O1]; exponential-size, small n only."""
    g = build_O1(n, fields)
    h_ad = build_adiabatic(n, fields, lam)
    o2 = commutator(h_ad, g)  # equals -i [H_ad, O1]; the norm is unaffected
    return float(hs_inner(o2, o2).real)
