import numpy as np
import pytest

from labskit.core import SpinSequence
from labskit.landscape import (
    labs_density,
    landscape_report,
    local_minima_density,
    make_sk_instance,
    sk_density,
    sk_energy,
)

from conftest import oracle_energy


class TestSKInstance:
    def test_couplings_symmetric_zero_diagonal(self, rng):
        inst = make_sk_instance(8, rng)
        assert np.allclose(inst.couplings, inst.couplings.T)
        assert np.all(np.diag(inst.couplings) == 0)

    def test_energy_formula(self, rng):
        inst = make_sk_instance(6, rng)
        seq = SpinSequence.from_text("+-+-+-")
        s = seq.spins.astype(float)
        want = sum(
            inst.couplings[i, j] * s[i] * s[j] for i in range(6) for j in range(i + 1, 6)
        )
        assert sk_energy(inst, seq) == pytest.approx(want, rel=1e-12)

    def test_length_mismatch(self, rng):
        inst = make_sk_instance(6, rng)
        with pytest.raises(ValueError):
            sk_energy(inst, SpinSequence.from_text("+-+"))


class TestDensities:
    def test_labs_exact_small_values(self):
        assert labs_density(2).f_lo == 1.0
        assert labs_density(3).f_lo == 0.5

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_labs_matches_generic_scan(self, n):
        generic = local_minima_density(
            lambda seq: oracle_energy(seq.spins), n
        )
        assert labs_density(n).minima_count == generic.minima_count

    def test_sk_matches_generic_scan(self, rng):
        for n in (3, 5, 7):
            inst = make_sk_instance(n, rng)
            generic = local_minima_density(lambda seq: sk_energy(inst, seq), n)
            assert sk_density(inst).minima_count == generic.minima_count

    def test_sk_minima_even_count(self, rng):
        # global spin flip maps minima to minima
        for _ in range(5):
            inst = make_sk_instance(8, rng)
            assert sk_density(inst).minima_count % 2 == 0

    def test_cap_refusal(self):
        with pytest.raises(ValueError):
            labs_density(23)
        with pytest.raises(ValueError):
            local_minima_density(lambda s: 0, 23)


class TestReport:
    def test_rows_and_determinism(self):
        a = landscape_report([4, 6], np.random.default_rng(3), sk_instances=3)
        b = landscape_report([4, 6], np.random.default_rng(3), sk_instances=3)
        assert len(a) == 2 * (1 + 3)
        assert [(s.n, s.model, s.f_lo) for s in a] == [(s.n, s.model, s.f_lo) for s in b]

    def test_labs_ruggedness_exceeds_sk(self):
        stats = landscape_report([10], np.random.default_rng(0), sk_instances=10)
        labs = [s for s in stats if s.model == "labs"][0]
        sk_med = np.median([s.f_lo for s in stats if s.model == "sk"])
        assert labs.f_lo > sk_med
