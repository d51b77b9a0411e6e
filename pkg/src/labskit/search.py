"""Memetic tabu search and its quantum-seeded variant.

A run is strictly single-threaded and deterministic given (params,
initial population, rng seed). The evaluation counter increments once per
candidate energy determination: K for the initial scoring, then exactly
N*M + 1 per tabu call (one scoring of the start plus N one-flip deltas
per iteration).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import SpinSequence
from .sim import ShotSet


@dataclass(frozen=True)
class SearchParams:
    n: int
    e_target: int
    k: int = 100
    p_comb: float = 0.9
    p_mut: float = None  # defaults to 1/n
    tournament_size: int = 2
    g_max: int = 10**9
    max_evals: int = 10**7

    def __post_init__(self):
        if self.k < 2 or self.tournament_size < 1:
            raise ValueError("need k >= 2 and tournament_size >= 1")
        if not 0 <= self.p_comb <= 1:
            raise ValueError("p_comb outside [0, 1]")
        p_mut = self.p_mut if self.p_mut is not None else 1.0 / self.n
        if not 0 <= p_mut <= 1:
            raise ValueError("p_mut outside [0, 1]")
        object.__setattr__(self, "p_mut", p_mut)


@dataclass
class RunRecord:
    n: int
    method: str
    replicate_id: int
    seed: int
    best_energy: int
    found_optimum: bool
    generations: int
    evaluations: int
    evals_to_solution: int = None  # present iff found_optimum
    wall_clock_classical: float = 0.0
    wall_clock_quantum: float = 0.0
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "method": self.method,
            "replicate": self.replicate_id,
            "seed": self.seed,
            "best_energy": self.best_energy,
            "found_optimum": self.found_optimum,
            "generations": self.generations,
            "evaluations": self.evaluations,
            "evals_to_solution": self.evals_to_solution,
            "wall_clock_classical": self.wall_clock_classical,
            "wall_clock_quantum": self.wall_clock_quantum,
            "metadata": self.metadata,
        }


class EvaluationCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def add(self, k: int):
        self.count += k


def _draw_tabu_randomness(n: int, rng: np.random.Generator):
    """Budget M in [n/2, 3n/2] and one tenure draw per iteration."""
    m_budget = int(rng.integers(0, n + 1)) + n // 2
    theta_min = max(1, m_budget // 50)
    theta_max = max(theta_min, m_budget // 10)
    draws = rng.integers(theta_min, theta_max + 1, size=m_budget).astype(np.int64)
    return draws


def _tabu_improve(spins: np.ndarray, rng: np.random.Generator, counter: EvaluationCounter):
    """Run one tabu walk in place; returns (best_spins, best_energy)."""
    draws = _draw_tabu_randomness(spins.shape[0], rng)
    c = kernels.autocorr(spins)
    e0 = kernels.energy_from_c(c)
    best = np.empty_like(spins)
    best_e, _, evals = kernels.tabu_search_run(spins, c, e0, draws, best)
    counter.add(int(evals))
    return best, int(best_e)


def tabu_search(start: SpinSequence, rng: np.random.Generator, counter: EvaluationCounter = None) -> SpinSequence:
    """Tabu-search local improvement; returns the best sequence seen."""
    counter = counter if counter is not None else EvaluationCounter()
    spins = start.spins.copy()
    best, _ = _tabu_improve(spins, rng, counter)
    return SpinSequence(best)


def combine(p1: SpinSequence, p2: SpinSequence, rng: np.random.Generator) -> SpinSequence:
    if p1.n != p2.n:
        raise ValueError("parent lengths differ")
    cut = int(rng.integers(1, p1.n))  # cut point in {1, ..., n-1}
    return SpinSequence(np.concatenate([p1.spins[:cut], p2.spins[cut:]]))


def mutate(seq: SpinSequence, p_mut: float, rng: np.random.Generator) -> SpinSequence:
    if not 0 <= p_mut <= 1:
        raise ValueError("p_mut outside [0, 1]")
    mask = rng.random(seq.n) < p_mut
    spins = seq.spins.copy()
    spins[mask] *= -1
    return SpinSequence(spins)


def random_population(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """K i.i.d. uniform +-1 sequences, as a (k, n) int8 matrix."""
    return (1 - 2 * rng.integers(0, 2, size=(k, n))).astype(np.int8)


def qemts_seed_population(shots, k: int, variant: str = "single_best_replicated") -> np.ndarray:
    """Initial population from DCQO shots.

    single_best_replicated: the minimum-energy bitstring (first occurrence
    on ties) replicated k times. multi_run_best: one best bitstring per
    ShotSet in a list, cycled to fill k slots.
    """

    def best_of(shotset: ShotSet) -> np.ndarray:
        if not shotset.bitstrings:
            raise ValueError("empty shot set")
        i = int(np.argmin(shotset.energies))
        return SpinSequence.from_text(shotset.bitstrings[i]).spins

    if variant == "single_best_replicated":
        if isinstance(shots, (list, tuple)):
            if len(shots) != 1:
                raise ValueError("single_best_replicated expects one shot set")
            shots = shots[0]
        seed = best_of(shots)
        return np.tile(seed, (k, 1)).astype(np.int8)
    if variant == "multi_run_best":
        shot_list = shots if isinstance(shots, (list, tuple)) else [shots]
        if not shot_list:
            raise ValueError("empty shot-set list")
        seeds = [best_of(s) for s in shot_list]
        return np.array([seeds[i % len(seeds)] for i in range(k)], dtype=np.int8)
    raise ValueError(f"unknown seeding variant {variant!r}")


def _energy_of(spins: np.ndarray) -> int:
    return int(kernels.energy_from_c(kernels.autocorr(spins)))


def mts_run(
    params: SearchParams,
    initial_population: np.ndarray,
    rng: np.random.Generator,
    method: str = "mts",
    replicate_id: int = 0,
    seed: int = 0,
    wall_clock_quantum: float = 0.0,
    metadata: dict = None,
) -> RunRecord:
    """Algorithm: score the population, then per generation crossover or
    copy, mutate, tabu-improve, update the incumbent, and overwrite a
    uniformly random slot with the improved child."""
    t_start = time.perf_counter()
    n, k = params.n, params.k
    pop = np.array(initial_population, dtype=np.int8)
    if pop.shape != (k, n):
        raise ValueError(f"population shape {pop.shape} != ({k}, {n})")
    counter = EvaluationCounter()

    energies = np.empty(k, dtype=np.int64)
    best_e = None
    evals_to_solution = None
    for i in range(k):
        energies[i] = _energy_of(pop[i])
        counter.add(1)
        if best_e is None or energies[i] < best_e:
            best_e = int(energies[i])
            if best_e <= params.e_target and evals_to_solution is None:
                evals_to_solution = counter.count

    gens = 0
    while best_e > params.e_target and gens < params.g_max and counter.count < params.max_evals:
        if rng.random() < params.p_comb:
            p1 = _tournament(pop, energies, params.tournament_size, rng)
            p2 = _tournament(pop, energies, params.tournament_size, rng)
            child = _cross(pop[p1], pop[p2], rng)
        else:
            child = pop[int(rng.integers(0, k))].copy()
        mask = rng.random(n) < params.p_mut
        child[mask] *= -1
        improved, child_e = _tabu_improve(child, rng, counter)
        if child_e < best_e:
            best_e = child_e
            if best_e <= params.e_target and evals_to_solution is None:
                evals_to_solution = counter.count
        slot = int(rng.integers(0, k))
        pop[slot] = improved
        energies[slot] = child_e
        gens += 1

    found = best_e <= params.e_target
    return RunRecord(
        n=n,
        method=method,
        replicate_id=replicate_id,
        seed=seed,
        best_energy=best_e,
        found_optimum=found,
        generations=gens,
        evaluations=counter.count,
        evals_to_solution=evals_to_solution if found else None,
        wall_clock_classical=time.perf_counter() - t_start,
        wall_clock_quantum=wall_clock_quantum,
        metadata=metadata or {},
    )


def _tournament(pop, energies, size, rng):
    contenders = rng.integers(0, pop.shape[0], size=size)
    best = int(contenders[0])
    for idx in contenders[1:]:
        if energies[int(idx)] < energies[best]:
            best = int(idx)
    return best


def _cross(s1, s2, rng):
    cut = int(rng.integers(1, s1.shape[0]))
    child = s1.copy()
    child[cut:] = s2[cut:]
    return child
