"""Benchmark the numba kernels against the pure-numpy fallback.

The backend is chosen at import time via ``LABSKIT_DISABLE_NUMBA``, so
this script re-executes itself in a subprocess per backend and prints a
comparison table.

Usage: python3 benchmarks/bench_kernels.py
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeats=3):
    fn()  # warmup (JIT compilation on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmarks():
    from labskit import kernels

    rng = np.random.default_rng(0)
    results = {}

    spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=64).astype(np.int64)
    results["autocorr n=64 x1000"] = _time(
        lambda: [kernels.autocorr(spins) for _ in range(1000)]
    )

    results["all_energies n=18"] = _time(lambda: kernels.all_energies(18))
    results["brute_force_scan n=20"] = _time(lambda: kernels.brute_force_scan(20))
    results["labs_minima_count n=18"] = _time(lambda: kernels.labs_minima_count(18))

    def tabu_block():
        s = spins.copy()
        c = kernels.autocorr(s)
        e0 = kernels.energy_from_c(c)
        draws = rng.integers(1, 4, size=5000)
        best = np.empty_like(s)
        kernels.tabu_search_run(s, c, e0, draws, best)

    results["tabu walk n=64 M=5000"] = _time(tabu_block)

    amps = (rng.standard_normal(1 << 20) + 1j * rng.standard_normal(1 << 20))
    amps /= np.linalg.norm(amps)

    def rotations():
        for _ in range(50):
            kernels.apply_one_y_rotation(amps, 0b101, 0b11000, 0.97, 0.2431)

    results["y-rotation n=20 x50"] = _time(rotations)
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--run", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.run:
        from labskit.kernels import NUMBA_ENABLED

        print(json.dumps({"numba": NUMBA_ENABLED, "results": run_benchmarks()}))
        return

    docs = {}
    for label, disable in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, LABSKIT_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--run"],
            env=env, capture_output=True, text=True, check=True,
        )
        docs[label] = json.loads(out.stdout.splitlines()[-1])
    if not docs["numba"]["numba"]:
        print("note: numba unavailable; both columns use the numpy fallback")

    na, np_ = docs["numba"]["results"], docs["numpy"]["results"]
    width = max(len(k) for k in na)
    print(f"{'benchmark':<{width}}  {'numba (s)':>10}  {'numpy (s)':>10}  {'speedup':>8}")
    for key in na:
        ratio = np_[key] / na[key] if na[key] > 0 else float("inf")
        print(f"{key:<{width}}  {na[key]:>10.4f}  {np_[key]:>10.4f}  {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
