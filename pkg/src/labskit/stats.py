"""Scaling statistics: replicate medians, quantile log-linear fits,
two-stage bootstrap, crossover estimation, and run-grid orchestration.

The data model follows the benchmark design: one record per
(n, method, replicate, seed); the per-replicate summary is the median TTS
over seeds, quantiles are taken across replicate medians, and
log Q_p(n) = alpha + beta * n is fitted by ordinary least squares with
kappa = exp(beta).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

_SHOT_TAG = 1_000_000  # spawn-key slot for quantum sampling streams
_METHOD_CODE = {"mts": 0, "qemts": 1, "qemts_multirun": 2}


class InsufficientDataError(ValueError):
    pass


class NoCrossoverError(ValueError):
    pass


@dataclass
class TTSDataset:
    """Successful-run TTS values grouped (method, n, replicate) -> array.

    Censored (unsuccessful) seeds are excluded from medians; a replicate
    with more than censor_threshold censored seeds is dropped entirely and
    flagged in `excluded_replicates`.
    """

    groups: dict
    censored: dict
    excluded_replicates: list


def build_dataset(records, censor_threshold: float = 0.5) -> TTSDataset:
    seen = set()
    raw = {}
    censored = {}
    for rec in records:
        if hasattr(rec, "to_dict"):
            rec = rec.to_dict()
        key = (rec["n"], rec["method"], rec["replicate"], rec["seed"])
        if key in seen:
            raise ValueError(f"duplicate record key {key}")
        seen.add(key)
        gkey = (rec["method"], rec["n"], rec["replicate"])
        raw.setdefault(gkey, [])
        if rec["found_optimum"]:
            raw[gkey].append(float(rec["evals_to_solution"]))
        else:
            censored[gkey] = censored.get(gkey, 0) + 1
    groups = {}
    excluded = []
    for gkey, values in raw.items():
        n_censored = censored.get(gkey, 0)
        total = len(values) + n_censored
        if not values or n_censored > censor_threshold * total:
            excluded.append(gkey)
            continue
        groups[gkey] = np.array(sorted(values))
    return TTSDataset(groups=groups, censored=censored, excluded_replicates=excluded)


def replicate_medians(dataset: TTSDataset) -> dict:
    """(n, method, replicate) -> median TTS over successful seeds."""
    out = {}
    for (method, n, rep), values in dataset.groups.items():
        if values.size == 0:
            raise InsufficientDataError(f"empty group {(method, n, rep)}")
        out[(n, method, rep)] = float(np.median(values))
    return out


def quantile(values, p: float) -> float:
    """Linear-interpolation quantile (h = (n-1)p)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise InsufficientDataError("quantile of empty input")
    if not 0 <= p <= 1:
        raise ValueError("p outside [0, 1]")
    return float(np.quantile(values, p))


@dataclass(frozen=True)
class FitResult:
    alpha: float  # intercept, natural-log scale
    beta: float  # slope per unit n
    kappa: float
    r_squared: float
    n_points: int
    degenerate: bool = False  # constant data: R^2 reported as 0


def loglinear_fit(points) -> FitResult:
    """OLS of ln Q on n over (n, Q) pairs."""
    pts = [(float(n), float(q)) for n, q in points]
    ns = np.array([p[0] for p in pts])
    qs = np.array([p[1] for p in pts])
    if np.any(qs <= 0):
        raise ValueError("nonpositive quantile value in fit input")
    if np.unique(ns).size < 2:
        raise InsufficientDataError("need >= 2 distinct n values")
    y = np.log(qs)
    beta, alpha = _ols(ns, y)
    resid = y - (alpha + beta * ns)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    degenerate = ss_tot == 0.0
    r2 = 0.0 if degenerate else 1.0 - ss_res / ss_tot
    return FitResult(
        alpha=float(alpha),
        beta=float(beta),
        kappa=float(np.exp(beta)),
        r_squared=float(r2),
        n_points=len(pts),
        degenerate=degenerate,
    )


def _ols(x, y):
    xm = x.mean()
    ym = y.mean() if y.ndim == 1 else y.mean(axis=-1, keepdims=True)
    dx = x - xm
    var = np.dot(dx, dx)
    if y.ndim == 1:
        beta = np.dot(dx, y - ym) / var
        return beta, ym - beta * xm
    beta = (y - ym) @ dx / var
    return beta, ym[..., 0] - beta * xm


def point_quantiles(dataset: TTSDataset, method: str, p: float) -> list:
    """(n, Q_p) pairs from the un-resampled replicate medians."""
    medians = replicate_medians(dataset)
    per_n = {}
    for (n, m, rep), med in medians.items():
        if m == method:
            per_n.setdefault(n, []).append(med)
    return sorted((n, quantile(v, p)) for n, v in per_n.items())


@dataclass
class BootstrapResult:
    method: str
    p: float
    b: int
    alphas: np.ndarray
    betas: np.ndarray
    kappas: np.ndarray
    r_squareds: np.ndarray
    point: FitResult
    kappa_ci: tuple
    r2_ci: tuple


def _resampled_medians(dataset: TTSDataset, method: str, b: int, rng) -> dict:
    """n -> (b, R_n) matrix of per-draw resampled replicate medians."""
    per_n = {}
    for (m, n, rep), values in dataset.groups.items():
        if m == method:
            per_n.setdefault(n, []).append(values)
    if not per_n:
        raise InsufficientDataError(f"no data for method {method!r}")
    out = {}
    for n in sorted(per_n):
        reps = per_n[n]
        r_count = len(reps)
        rep_idx = np.asarray(rng.integers(0, r_count, size=(b, r_count)))
        sizes = {v.size for v in reps}
        if len(sizes) == 1:
            s_count = sizes.pop()
            tts = np.stack(reps)  # (R, S)
            seed_idx = np.asarray(rng.integers(0, s_count, size=(b, r_count, s_count)))
            sampled = tts[rep_idx[:, :, None], seed_idx]
            out[n] = np.median(sampled, axis=2)
        else:
            # ragged seed counts: per-draw loop
            med = np.empty((b, r_count))
            for bi in range(b):
                for ri in range(r_count):
                    vals = reps[int(rep_idx[bi, ri])]
                    idx = np.asarray(rng.integers(0, vals.size, size=vals.size))
                    med[bi, ri] = np.median(vals[idx])
            out[n] = med
    return out


def two_stage_bootstrap(dataset: TTSDataset, b: int, ps, rng) -> dict:
    """Per (method, p): per-draw quantile fits with 95% percentile CIs.

    Stage one resamples replicates with replacement within each (n, m);
    stage two resamples seeds within each selected replicate.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    methods = sorted({m for (m, n, rep) in dataset.groups.keys()})
    results = {}
    for method in methods:
        med = _resampled_medians(dataset, method, b, rng)
        ns = np.array(sorted(med.keys()), dtype=float)
        if ns.size < 2:
            raise InsufficientDataError(f"method {method!r} has < 2 n values")
        for p in ps:
            q = np.stack([np.quantile(med[n], p, axis=1) for n in sorted(med)], axis=1)
            y = np.log(q)  # (b, n_count)
            betas, alphas = _ols(ns, y)
            pred = alphas[:, None] + betas[:, None] * ns[None, :]
            resid = y - pred
            ss_res = np.sum(resid**2, axis=1)
            ss_tot = np.sum((y - y.mean(axis=1, keepdims=True)) ** 2, axis=1)
            r2 = np.where(ss_tot == 0.0, 0.0, 1.0 - ss_res / np.where(ss_tot == 0, 1, ss_tot))
            kappas = np.exp(betas)
            point = loglinear_fit(point_quantiles(dataset, method, p))
            results[(method, p)] = BootstrapResult(
                method=method,
                p=p,
                b=b,
                alphas=alphas,
                betas=betas,
                kappas=kappas,
                r_squareds=r2,
                point=point,
                kappa_ci=(float(np.percentile(kappas, 2.5)), float(np.percentile(kappas, 97.5))),
                r2_ci=(float(np.percentile(r2, 2.5)), float(np.percentile(r2, 97.5))),
            )
    return results


def crossover(fit_a: FitResult, fit_b: FitResult) -> float:
    """Crossing length of two fitted lines; a is the upper-quantile fit of
    the quantum-seeded method, b the lower-quantile fit of the baseline."""
    if fit_a.beta == fit_b.beta:
        raise NoCrossoverError("equal slopes: fitted lines never cross")
    return (fit_b.alpha - fit_a.alpha) / (fit_a.beta - fit_b.beta)


@dataclass(frozen=True)
class CrossoverEstimate:
    draws: np.ndarray
    median: float
    ci: tuple
    n_dropped: int  # draws with equal slopes


def crossover_bootstrap(res_a: BootstrapResult, res_b: BootstrapResult) -> CrossoverEstimate:
    denom = res_a.betas - res_b.betas
    mask = denom != 0.0
    draws = (res_b.alphas[mask] - res_a.alphas[mask]) / denom[mask]
    if draws.size == 0:
        raise NoCrossoverError("all bootstrap draws have equal slopes")
    return CrossoverEstimate(
        draws=draws,
        median=float(np.median(draws)),
        ci=(float(np.percentile(draws, 2.5)), float(np.percentile(draws, 97.5))),
        n_dropped=int(np.sum(~mask)),
    )


def log_ratio_gap(dataset: TTSDataset, rng, b: int, method_a="qemts", method_b="mts") -> dict:
    """n -> (b,) array of log10(median-of-medians a) - log10(... b)."""
    med_a = _resampled_medians(dataset, method_a, b, rng)
    med_b = _resampled_medians(dataset, method_b, b, rng)
    common = sorted(set(med_a) & set(med_b))
    if not common:
        raise InsufficientDataError("no common n between methods")
    out = {}
    for n in common:
        qa = np.median(med_a[n], axis=1)
        qb = np.median(med_b[n], axis=1)
        out[n] = np.log10(qa) - np.log10(qb)
    return out


# ---- orchestration ----


@dataclass
class GridConfig:
    out_path: str
    master_seed: int
    n_list: list
    methods: list
    replicates: int
    seeds: int
    targets: dict  # n -> E_target
    replicate_start: int = 0
    seed_start: int = 0
    k: int = 100
    p_comb: float = 0.9
    p_mut: float = None  # defaults to 1/n
    g_max: int = 10**9
    max_evals: int = 10**7
    n_shots: int = 1000
    n_trot: int = 100
    total_time: float = 1.0
    schedule: str = "sin_squared"
    multi_runs: int = 10
    jobs: int = 1
    shots_file: str = None  # pre-drawn shots (JSONL); bypasses simulation
    extra_metadata: dict = field(default_factory=dict)


def run_rng(master_seed: int, n: int, method: str, replicate: int, seed_index: int):
    ss = np.random.SeedSequence(
        master_seed, spawn_key=(n, _METHOD_CODE[method], replicate, seed_index)
    )
    return np.random.default_rng(ss)


_POP_TAG = 2_000_000  # spawn-key slot for the per-replicate population stream


def _population_rng(master_seed: int, n: int, method: str, replicate: int):
    ss = np.random.SeedSequence(
        master_seed, spawn_key=(n, _METHOD_CODE[method], replicate, _POP_TAG)
    )
    return np.random.default_rng(ss)


def _shot_rng(master_seed: int, n: int, method: str, replicate: int, run_index: int = 0):
    ss = np.random.SeedSequence(
        master_seed,
        spawn_key=(n, _METHOD_CODE[method], replicate, _SHOT_TAG + run_index),
    )
    return np.random.default_rng(ss)


def _seed_populations(cfg: GridConfig, n: int, method: str, state):
    """Per-replicate initial populations for the quantum-seeded methods."""
    import time as _time

    from .search import qemts_seed_population
    from .sim import ShotSet, sample

    file_shots = None
    if cfg.shots_file is not None:
        bits, energies = [], []
        with open(cfg.shots_file) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if "bits" in rec:
                    bits.append(rec["bits"])
                    energies.append(rec["energy"])
        file_shots = ShotSet(bitstrings=bits, energies=energies)

    pops = {}
    walltimes = {}
    for rep in range(cfg.replicate_start, cfg.replicate_start + cfg.replicates):
        t0 = _time.perf_counter()
        if file_shots is not None:
            variant = "single_best_replicated" if method == "qemts" else "multi_run_best"
            pops[rep] = qemts_seed_population(file_shots, cfg.k, variant)
        elif method == "qemts":
            shots = sample(state, cfg.n_shots, _shot_rng(cfg.master_seed, n, method, rep))
            pops[rep] = qemts_seed_population(shots, cfg.k, "single_best_replicated")
        else:  # qemts_multirun
            shot_sets = [
                sample(state, cfg.n_shots, _shot_rng(cfg.master_seed, n, method, rep, ri))
                for ri in range(cfg.multi_runs)
            ]
            pops[rep] = qemts_seed_population(shot_sets, cfg.k, "multi_run_best")
        walltimes[rep] = _time.perf_counter() - t0
    return pops, walltimes


def _run_task(args):
    from .search import SearchParams, mts_run, random_population

    (cfg_dict, n, method, rep, seed_index, pop_bytes, wall_q) = args
    cfg = GridConfig(**cfg_dict)
    params = SearchParams(
        n=n,
        e_target=cfg.targets[n],
        k=cfg.k,
        p_comb=cfg.p_comb,
        p_mut=cfg.p_mut,
        g_max=cfg.g_max,
        max_evals=cfg.max_evals,
    )
    rng = run_rng(cfg.master_seed, n, method, rep, seed_index)
    if method == "mts":
        # the replicate defines the population; the seed only varies the search
        pop = random_population(n, cfg.k, _population_rng(cfg.master_seed, n, method, rep))
    else:
        pop = np.frombuffer(pop_bytes, dtype=np.int8).reshape(cfg.k, n).copy()
    record = mts_run(
        params,
        pop,
        rng,
        method=method,
        replicate_id=rep,
        seed=seed_index,
        wall_clock_quantum=wall_q,
        metadata={
            "master_seed": cfg.master_seed,
            "k": cfg.k,
            "p_comb": cfg.p_comb,
            "p_mut": params.p_mut,
            "g_max": cfg.g_max,
            "max_evals": cfg.max_evals,
            "e_target": cfg.targets[n],
            "schedule": cfg.schedule,
            "n_trot": cfg.n_trot,
            "n_shots": cfg.n_shots,
            "total_time": cfg.total_time,
            **cfg.extra_metadata,
        },
    )
    return record.to_dict()


def existing_keys(path: str):
    keys = set()
    if os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if "method" in rec:
                    keys.add((rec["n"], rec["method"], rec["replicate"], rec["seed"]))
    return keys


def orchestrate(cfg: GridConfig, progress=None) -> list:
    """Execute the run grid, appending JSONL records; resume-safe.

    Each run's RNG stream is derived from (master_seed, n, method,
    replicate, seed_index), so results are independent of worker count.
    """
    from .cd import FieldConfig, Schedule
    from .sim import build_circuit, simulate

    done = existing_keys(cfg.out_path)
    quantum_methods = [m for m in cfg.methods if m != "mts"]
    tasks = []
    for n in cfg.n_list:
        state = None
        if quantum_methods and cfg.shots_file is None:
            plan = build_circuit(n, Schedule(total_time=cfg.total_time), cfg.n_trot, FieldConfig(n))
            state = simulate(plan)
        for method in cfg.methods:
            if method not in _METHOD_CODE:
                raise ValueError(f"unknown method {method!r}")
            pops, wallq = ({}, {})
            if method != "mts":
                pops, wallq = _seed_populations(cfg, n, method, state)
            for rep in range(cfg.replicate_start, cfg.replicate_start + cfg.replicates):
                for seed_index in range(cfg.seed_start, cfg.seed_start + cfg.seeds):
                    if (n, method, rep, seed_index) in done:
                        continue
                    pop_bytes = pops[rep].tobytes() if method != "mts" else b""
                    tasks.append(
                        (
                            cfg.__dict__.copy(),
                            n,
                            method,
                            rep,
                            seed_index,
                            pop_bytes,
                            wallq.get(rep, 0.0),
                        )
                    )
    records = []
    with open(cfg.out_path, "a") as fh:
        if cfg.jobs <= 1:
            for task in tasks:
                rec = _run_task(task)
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                records.append(rec)
                if progress:
                    progress(rec)
        else:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                for rec in pool.map(_run_task, tasks, chunksize=4):
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
                    records.append(rec)
                    if progress:
                        progress(rec)
    return records


def load_records(path: str) -> list:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rec = json.loads(line)
                if "method" in rec:
                    records.append(rec)
    return records
