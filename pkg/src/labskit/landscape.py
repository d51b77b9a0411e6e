"""Exhaustive single-flip local-minima density for LABS and SK landscapes.

A state counts as a local minimum when no single flip strictly lowers the
energy (the <= comparison: energy-neutral flips do not disqualify).
LABS uses integer comparisons; SK compares float deltas computed from the
cached local fields only, so ties are never produced by mixed formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import SpinSequence

EXHAUSTIVE_CAP = 22


@dataclass(frozen=True)
class SKInstance:
    n: int
    couplings: np.ndarray  # symmetric, zero diagonal, J_ij ~ N(0, 1/n)
    seed: int = None


def make_sk_instance(n: int, rng: np.random.Generator, seed: int = None) -> SKInstance:
    j = rng.normal(0.0, np.sqrt(1.0 / n), size=(n, n))
    j = np.triu(j, 1)
    j = j + j.T
    return SKInstance(n=n, couplings=j, seed=seed)


def sk_energy(instance: SKInstance, seq: SpinSequence) -> float:
    if seq.n != instance.n:
        raise ValueError("sequence length does not match instance size")
    s = seq.spins.astype(np.float64)
    return float(0.5 * s @ instance.couplings @ s)


@dataclass(frozen=True)
class LandscapeStats:
    n: int
    model: str  # labs | sk
    f_lo: float
    minima_count: int
    instance_seed: int = None


def local_minima_density(energy_fn, n: int) -> LandscapeStats:
    """Generic exhaustive scan over all 2^n states; small n only.

    energy_fn maps a SpinSequence to a comparable energy. The specialized
    labs/sk scans below are the fast path; this one backs arbitrary
    objectives and the cross-checks in tests.
    """
    if n > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive scan refused for n={n} > cap {EXHAUSTIVE_CAP}")
    count = 0
    for idx in range(1 << n):
        vals = np.array(
            [1 - 2 * ((idx >> (n - 1 - j)) & 1) for j in range(n)], dtype=np.int8
        )
        e0 = energy_fn(SpinSequence(vals))
        is_min = True
        for i in range(n):
            flipped = vals.copy()
            flipped[i] *= -1
            if energy_fn(SpinSequence(flipped)) < e0:
                is_min = False
                break
        if is_min:
            count += 1
    return LandscapeStats(n=n, model="generic", f_lo=count / (1 << n), minima_count=count)


def labs_density(n: int) -> LandscapeStats:
    if n > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive scan refused for n={n} > cap {EXHAUSTIVE_CAP}")
    count = int(kernels.labs_minima_count(n))
    return LandscapeStats(n=n, model="labs", f_lo=count / (1 << n), minima_count=count)


def sk_density(instance: SKInstance) -> LandscapeStats:
    n = instance.n
    if n > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive scan refused for n={n} > cap {EXHAUSTIVE_CAP}")
    count = int(kernels.sk_minima_count(instance.couplings))
    return LandscapeStats(
        n=n, model="sk", f_lo=count / (1 << n), minima_count=count, instance_seed=instance.seed
    )


def landscape_report(n_values, rng: np.random.Generator, sk_instances: int = 10):
    """One LABS row plus sk_instances SK rows per n."""
    stats = []
    for n in n_values:
        stats.append(labs_density(n))
        for inst_idx in range(sk_instances):
            seed = int(rng.integers(0, 2**31))
            inst = make_sk_instance(n, np.random.default_rng(seed), seed=seed)
            stats.append(sk_density(inst))
    return stats
