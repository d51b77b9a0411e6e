import math

import numpy as np
import pytest

from labskit.cd import (
    FieldConfig,
    Schedule,
    SingularCoefficientError,
    alpha1,
    build_O1,
    build_adiabatic,
    build_transverse,
    gamma1_closed,
    gamma2_closed,
    gamma2_oracle,
    o1_oracle,
    schedule_eval,
)
from labskit.pauli import commutator, hs_inner

from conftest import oracle_dense


class TestSchedule:
    def test_endpoints_and_midpoint(self):
        sch = Schedule(total_time=2.0)
        lam0, dot0 = schedule_eval(sch, 0.0)
        lam1, dot1 = schedule_eval(sch, 2.0)
        lam_mid, dot_mid = schedule_eval(sch, 1.0)
        assert lam0 == 0.0 and lam1 == pytest.approx(1.0)
        assert dot0 == pytest.approx(0.0) and dot1 == pytest.approx(0.0, abs=1e-12)
        assert lam_mid == pytest.approx(0.5)
        assert dot_mid == pytest.approx(math.pi / 4)

    def test_derivative_consistency(self):
        sch = Schedule(total_time=1.3)
        eps = 1e-7
        for t in (0.2, 0.5, 0.9, 1.1):
            lam_p, _ = schedule_eval(sch, t + eps)
            lam_m, _ = schedule_eval(sch, t - eps)
            _, dot = schedule_eval(sch, t)
            assert dot == pytest.approx((lam_p - lam_m) / (2 * eps), rel=1e-5)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            Schedule(kind="linear")
        with pytest.raises(ValueError):
            Schedule(total_time=0.0)
        with pytest.raises(ValueError):
            schedule_eval(Schedule(), 1.5)


class TestO1:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_matches_commutator_oracle(self, n):
        fields = FieldConfig(n)
        closed = build_O1(n, fields)
        oracle = o1_oracle(n, fields)
        diff = closed - oracle
        assert len(diff) == 0

    def test_lambda_independence(self):
        n, fields = 5, FieldConfig(5)
        a = o1_oracle(n, fields, lam=0.25)
        b = o1_oracle(n, fields, lam=0.75)
        assert len(a - b) == 0

    def test_nonuniform_fields(self, rng):
        n = 5
        fields = FieldConfig(n, h_x=tuple(rng.normal(size=n)))
        assert len(build_O1(n, fields) - o1_oracle(n, fields)) == 0

    def test_dense_cross_check(self):
        n, fields = 4, FieldConfig(4)
        from labskit.pauli import build_hamiltonian

        h_i = oracle_dense(build_transverse(fields))
        h_f = oracle_dense(build_hamiltonian(n).operator)
        want = -1j * (h_i @ h_f - h_f @ h_i)
        got = oracle_dense(build_O1(n, fields))
        assert np.allclose(got, want, atol=1e-10)


class TestGammas:
    def test_spec_examples(self):
        assert gamma1_closed(3, FieldConfig(3)) == 32.0
        assert gamma1_closed(4, FieldConfig(4)) == 320.0

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 9, 10])
    def test_gamma1_equals_trace_norm(self, n):
        fields = FieldConfig(n)
        g = build_O1(n, fields)
        assert gamma1_closed(n, fields) == pytest.approx(
            float(hs_inner(g, g).real), rel=1e-12
        )

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_gamma2_matches_oracle(self, n, lam):
        fields = FieldConfig(n)
        assert gamma2_closed(n, fields, lam) == pytest.approx(
            gamma2_oracle(n, fields, lam), rel=1e-9
        )

    def test_gamma2_nonuniform_fields(self, rng):
        n = 5
        fields = FieldConfig(n, h_x=tuple(rng.normal(size=n) + 2.0))
        for lam in (0.0, 0.3, 1.0):
            assert gamma2_closed(n, fields, lam) == pytest.approx(
                gamma2_oracle(n, fields, lam), rel=1e-9
            )

    def test_gamma2_dense_trace(self):
        n, lam = 4, 0.4
        fields = FieldConfig(n)
        g = build_O1(n, fields)
        h_ad = build_adiabatic(n, fields, lam)
        o2 = commutator(h_ad, g)
        dense = oracle_dense(o2)
        tr = np.trace(dense.conj().T @ dense).real / (1 << n)
        assert gamma2_closed(n, fields, lam) == pytest.approx(tr, rel=1e-9)


class TestAlpha1:
    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_negative_everywhere(self, n):
        fields = FieldConfig(n)
        for lam in np.linspace(0, 1, 11):
            coeff = alpha1(n, fields, float(lam))
            assert coeff.alpha1 < 0
            assert coeff.gamma1 > 0 and coeff.gamma2 > 0

    def test_singular_with_zero_fields(self):
        fields = FieldConfig(4, h_x=(0.0, 0.0, 0.0, 0.0))
        with pytest.raises(SingularCoefficientError):
            alpha1(4, fields, 0.0)
