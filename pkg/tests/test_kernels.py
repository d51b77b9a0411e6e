"""Cross-path agreement: the compiled kernels and the numpy fallback must
be interchangeable bit for bit."""

import numpy as np
import pytest

from labskit import _kernels_numba as knb
from labskit import _kernels_numpy as knp
from labskit._accel import NUMBA_ENABLED
from labskit.kernels import PARITY16

from conftest import oracle_energy, random_spins

pytestmark = pytest.mark.skipif(
    not NUMBA_ENABLED, reason="numba path disabled; nothing to cross-check"
)


def test_autocorr_and_energy_agree(rng):
    for _ in range(50):
        n = int(rng.integers(2, 40))
        spins = random_spins(rng, n)
        c_a = knb.autocorr(spins)
        c_b = knp.autocorr(spins)
        assert np.array_equal(c_a, c_b)
        assert knb.energy_from_c(c_a) == knp.energy_from_c(c_b) == oracle_energy(spins)


def test_flip_kernels_agree(rng):
    for _ in range(50):
        n = int(rng.integers(2, 30))
        spins = random_spins(rng, n)
        i = int(rng.integers(0, n))
        c = knb.autocorr(spins)
        assert knb.flip_delta_peek(spins, c.copy(), i) == knp.flip_delta_peek(
            spins.copy(), c.copy(), i
        )
        sa, ca = spins.copy(), c.copy()
        sb, cb = spins.copy(), c.copy()
        knb.apply_flip(sa, ca, i)
        knp.apply_flip(sb, cb, i)
        assert np.array_equal(sa, sb) and np.array_equal(ca, cb)


@pytest.mark.parametrize("n", [2, 5, 10, 17])
def test_all_energies_agree(n):
    assert np.array_equal(knb.all_energies(n), knp.all_energies(n))


@pytest.mark.parametrize("n", [3, 8, 13, 18])
def test_brute_force_scan_agrees(n):
    assert knb.brute_force_scan(n) == knp.brute_force_scan(n)


def test_tabu_run_bit_identical(rng):
    for trial in range(30):
        n = int(rng.integers(4, 24))
        spins = random_spins(rng, n)
        draws = rng.integers(1, 4, size=int(rng.integers(1, 3 * n))).astype(np.int64)
        c = knb.autocorr(spins)
        e0 = int(knb.energy_from_c(c))
        best_a = np.empty_like(spins)
        best_b = np.empty_like(spins)
        out_a = knb.tabu_search_run(spins.copy(), c.copy(), e0, draws, best_a)
        out_b = knp.tabu_search_run(spins.copy(), c.copy(), e0, draws, best_b)
        assert out_a == out_b
        assert np.array_equal(best_a, best_b)


@pytest.mark.parametrize("n", [2, 3, 6, 10, 14])
def test_labs_minima_count_agrees(n):
    assert knb.labs_minima_count(n) == knp.labs_minima_count(n)


def test_sk_minima_count_agrees(rng):
    for n in (3, 6, 9, 12):
        j = rng.normal(0, 1 / np.sqrt(n), size=(n, n))
        j = np.triu(j, 1)
        j = j + j.T
        assert knb.sk_minima_count(j) == knp.sk_minima_count(j)


def test_rotation_kernel_agrees(rng):
    for _ in range(20):
        n = int(rng.integers(2, 10))
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        y = int(rng.integers(1, n + 1))
        ymask = 1 << (n - y)
        others = [q for q in range(1, n + 1) if q != y]
        zmask = 0
        for q in others:
            if rng.random() < 0.5:
                zmask |= 1 << (n - q)
        x = float(rng.normal())
        a = amps.copy()
        b = amps.copy()
        knb.apply_one_y_rotation(a, ymask, zmask, np.cos(x), np.sin(x), PARITY16)
        knp.apply_one_y_rotation(b, ymask, zmask, np.cos(x), np.sin(x), PARITY16)
        assert np.array_equal(a, b)
