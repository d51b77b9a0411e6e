"""Command-line entry point.

Configuration precedence for every subcommand flag:
CLI flag > config file (--config, flat JSON of flag names) >
environment (LABSKIT_<FLAG>, dashes as underscores) > built-in default.
Every output artifact embeds the fully resolved configuration and the
tool version. Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import secrets
import sys

import numpy as np

from . import __version__

ENV_PREFIX = "LABSKIT_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parse_range(text: str, what: str):
    """'a:b' -> (a, b) half-open, a < b."""
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"{what} must look like a:b") from None
    if a >= b:
        raise UsageError(f"{what}: need a < b in a:b")
    return a, b


def _parse_step_range(text: str, what: str):
    parts = text.split(":")
    if len(parts) == 2:
        a, b, step = int(parts[0]), int(parts[1]), 1
    elif len(parts) == 3:
        a, b, step = (int(x) for x in parts)
    else:
        raise UsageError(f"{what} must look like a:b or a:b:step")
    if step < 1 or a > b:
        raise UsageError(f"{what}: need a <= b and step >= 1")
    return list(range(a, b + 1, step))


def _parse_floats(text: str):
    return [float(x) for x in text.split(",") if x.strip()]


# ---- config resolution ----


class SubSpec:
    """Declares a subcommand's flags so config/env overrides can be typed."""

    def __init__(self, name, help_text):
        self.name = name
        self.help = help_text
        self.options = {}  # dest -> (type_fn, default, required)
        self.arg_defs = []

    def add(self, flag, type_fn=str, default=None, required=False, help=None, choices=None):
        dest = flag.lstrip("-").replace("-", "_")
        self.options[dest] = (type_fn, default, required)
        self.arg_defs.append((flag, dest, type_fn, help, choices))
        return self

    def register(self, subparsers):
        p = subparsers.add_parser(self.name, help=self.help, description=self.help)
        for flag, dest, type_fn, help_text, choices in self.arg_defs:
            kwargs = {"dest": dest, "default": argparse.SUPPRESS, "help": help_text}
            if type_fn is bool:
                kwargs["action"] = "store_true"
            else:
                kwargs["type"] = type_fn
                if choices:
                    kwargs["choices"] = choices
            p.add_argument(flag, **kwargs)
        p.add_argument(
            "--config",
            default=None,
            help="flat JSON file of flag names; overridden by explicit flags",
        )
        return p

    def resolve(self, ns) -> dict:
        cli = {k: v for k, v in vars(ns).items() if k in self.options}
        cfg = {dest: default for dest, (_, default, _) in self.options.items()}
        for dest, (type_fn, _, _) in self.options.items():
            env = os.environ.get(ENV_PREFIX + dest.upper())
            if env is not None:
                cfg[dest] = _coerce(type_fn, env)
        config_path = getattr(ns, "config", None)
        if config_path:
            with open(config_path) as fh:
                file_cfg = json.load(fh)
            for key, value in file_cfg.items():
                dest = key.replace("-", "_")
                if dest not in self.options:
                    raise UsageError(f"unknown config key {key!r} for {self.name}")
                type_fn = self.options[dest][0]
                cfg[dest] = _coerce(type_fn, value) if isinstance(value, str) else value
        cfg.update(cli)
        for dest, (_, _, required) in self.options.items():
            if required and cfg[dest] is None:
                raise UsageError(f"{self.name}: missing required option --{dest.replace('_', '-')}")
        return cfg


def _coerce(type_fn, value):
    if type_fn is bool:
        return str(value).lower() in ("1", "true", "yes", "on")
    return type_fn(value)


def _resolve_seed(cfg: dict) -> int:
    """Require --seed or generate and announce one; no silent nondeterminism."""
    if cfg.get("seed") is None:
        cfg["seed"] = secrets.randbelow(2**31)
        print(f"seed {cfg['seed']} (generated)")
    return cfg["seed"]


def _artifact_header(command: str, cfg: dict) -> dict:
    clean = {k: v for k, v in cfg.items() if not k.startswith("_")}
    return {"tool": "labskit", "version": __version__, "command": command, "config": clean}


# ---- subcommands ----


def cmd_energy(cfg):
    from .core import SpinSequence, autocorrelations, energy

    seq = SpinSequence.from_text(cfg["seq"])
    print(energy(seq))
    if cfg["verbose"]:
        print("autocorrelations", list(map(int, autocorrelations(seq).values)))
    return 0


def cmd_brute(cfg):
    from .core import BRUTE_FORCE_CAP, brute_force_optimum

    result = brute_force_optimum(cfg["n"], cap=cfg["cap"] or BRUTE_FORCE_CAP)
    print("optimal_energy", result.optimal_energy)
    print("one_optimum", "".join("+" if s > 0 else "-" for s in result.one_optimum.spins))
    print("optimum_count", result.optimum_count)
    return 0


def cmd_hamiltonian(cfg):
    from .pauli import build_hamiltonian, term_counts

    ham = build_hamiltonian(cfg["n"])
    n2, n4 = term_counts(cfg["n"])
    terms = [
        {"coeff": float(coeff.real), "word": [[q, axis] for q, axis in word]}
        for word, coeff in sorted(ham.operator.terms.items())
    ]
    doc = {
        **_artifact_header("hamiltonian", cfg),
        "n": cfg["n"],
        "offset": ham.offset,
        "two_body_terms": n2,
        "four_body_terms": n4,
        "terms": terms,
    }
    _emit_json(doc, cfg["out"])
    return 0


def cmd_cd(cfg):
    from .cd import FieldConfig, alpha1

    n = cfg["n"]
    points = cfg["points"]
    if points < 2:
        raise UsageError("--points must be >= 2")
    fields = FieldConfig(n)
    rows = []
    for i in range(points):
        lam = i / (points - 1)
        coeff = alpha1(n, fields, lam)
        rows.append([f"{lam:.10g}", f"{coeff.gamma1:.10g}", f"{coeff.gamma2:.10g}", f"{coeff.alpha1:.10g}"])
    _emit_csv(
        ["lambda", "gamma1", "gamma2", "alpha1"], rows, cfg["out"], _artifact_header("cd", cfg)
    )
    return 0


def cmd_gates(cfg):
    from .sim import resource_count

    method = cfg["method"]
    units = cfg["layers"] if method == "qaoa" else cfg["steps"]
    if units is None:
        raise UsageError("gates: give --layers (qaoa) or --steps (dcqo)")
    counts = resource_count(cfg["n"], method, units)
    print("entangling", counts.entangling)
    if counts.single_qubit:
        print("single_qubit", counts.single_qubit)
    return 0


def cmd_dcqo_sample(cfg):
    from .cd import FieldConfig, Schedule
    from .sim import build_circuit, sample, simulate

    _resolve_seed(cfg)
    n = cfg["n"]
    schedule = Schedule(kind=cfg["schedule"], total_time=cfg["total_time"])
    plan = build_circuit(n, schedule, cfg["trotter"], FieldConfig(n))
    state = simulate(plan)
    rng = np.random.default_rng(np.random.SeedSequence(cfg["seed"]))
    shots = sample(state, cfg["shots"], rng, rng_seed=cfg["seed"])
    out = cfg["out"]
    lines = [json.dumps(_artifact_header("dcqo-sample", cfg), sort_keys=True)]
    lines += [
        json.dumps({"bits": b, "energy": e}, sort_keys=True)
        for b, e in zip(shots.bitstrings, shots.energies)
    ]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(cfg):
    from .optima import resolve_target
    from .stats import GridConfig, orchestrate

    _resolve_seed(cfg)
    n = cfg["n"]
    target = resolve_target(n, cfg["target"], auto=cfg["target_auto"])
    _warn_if_above_known(n, target)
    rep_a, rep_b = _parse_range(cfg["replicates"], "--replicates")
    seed_a, seed_b = _parse_range(cfg["seeds"], "--seeds")
    method = cfg["method"].replace("-", "_")
    grid = GridConfig(
        out_path=cfg["out"],
        master_seed=cfg["seed"],
        n_list=[n],
        methods=[method],
        replicates=rep_b - rep_a,
        seeds=seed_b - seed_a,
        replicate_start=rep_a,
        seed_start=seed_a,
        targets={n: target},
        k=cfg["k"],
        p_comb=cfg["p_comb"],
        p_mut=cfg["p_mut"],
        g_max=cfg["gmax"],
        max_evals=cfg["max_evals"],
        n_shots=cfg["shots"],
        n_trot=cfg["trotter"],
        total_time=cfg["total_time"],
        multi_runs=cfg["multi_runs"],
        jobs=cfg["jobs"] or (os.cpu_count() or 1),
        shots_file=cfg["shots_file"],
        extra_metadata={"tool_version": __version__},
    )
    if not os.path.exists(cfg["out"]) or os.path.getsize(cfg["out"]) == 0:
        with open(cfg["out"], "w") as fh:
            fh.write(json.dumps(_artifact_header("solve", cfg), sort_keys=True) + "\n")
    records = orchestrate(grid)
    solved = sum(1 for r in records if r["found_optimum"])
    print(f"runs {len(records)} solved {solved} target {target}")
    return 0


def _warn_if_above_known(n, target):
    from .optima import UnknownOptimumError, known_optimum_energy

    try:
        known = known_optimum_energy(n)
    except UnknownOptimumError:
        return
    if target > known:
        print(f"warning: target {target} is above known optimum {known} for n={n}")


def cmd_landscape(cfg):
    from .landscape import labs_density, make_sk_instance, sk_density

    _resolve_seed(cfg)
    n_values = _parse_step_range(cfg["n_range"], "--n-range")
    model = cfg["model"]
    rng = np.random.default_rng(np.random.SeedSequence(cfg["seed"]))
    rows = []
    for n in n_values:
        if model in ("labs", "both"):
            stats = labs_density(n)
            rows.append([n, "labs", 0, f"{stats.f_lo:.12g}", stats.minima_count])
        if model in ("sk", "both"):
            for inst_idx in range(cfg["instances"]):
                inst_seed = int(rng.integers(0, 2**31))
                inst = make_sk_instance(n, np.random.default_rng(inst_seed), seed=inst_seed)
                stats = sk_density(inst)
                rows.append([n, "sk", inst_idx, f"{stats.f_lo:.12g}", stats.minima_count])
    _emit_csv(
        ["n", "model", "instance", "f_lo", "minima_count"],
        rows,
        cfg["out"],
        _artifact_header("landscape", cfg),
    )
    return 0


def cmd_analyze(cfg):
    from .stats import (
        build_dataset,
        crossover,
        crossover_bootstrap,
        load_records,
        log_ratio_gap,
        point_quantiles,
        replicate_medians,
        two_stage_bootstrap,
    )

    _resolve_seed(cfg)
    records = load_records(cfg["in_path"])
    if cfg["fit_range"]:
        lo, hi = _parse_range(cfg["fit_range"], "--fit-range")
        records = [r for r in records if lo <= r["n"] < hi]
    if not records:
        raise ValueError("no records after filtering")
    dataset = build_dataset(records, censor_threshold=cfg["censor_threshold"])
    ps = _parse_floats(cfg["quantiles"])
    cross_ps = _parse_floats(cfg["crossover_quantiles"])
    all_ps = sorted(set(ps) | set(cross_ps))
    rng = np.random.default_rng(np.random.SeedSequence(cfg["seed"]))
    boot = two_stage_bootstrap(dataset, cfg["bootstrap"], all_ps, rng)
    methods = sorted({m for (m, p) in boot})

    fits = {}
    for method in methods:
        fits[method] = {}
        for p in ps:
            res = boot[(method, p)]
            fits[method][f"{p:g}"] = {
                "alpha": res.point.alpha,
                "beta": res.point.beta,
                "kappa": res.point.kappa,
                "r_squared": res.point.r_squared,
                "degenerate": res.point.degenerate,
                "kappa_ci": list(res.kappa_ci),
                "r_squared_ci": list(res.r2_ci),
                "n_points": res.point.n_points,
            }

    cross_doc = None
    if len(cross_ps) == 2:
        upper_p, lower_p = max(cross_ps), min(cross_ps)
        quantum = [m for m in methods if m != "mts"]
        if "mts" in methods and quantum:
            res_a = boot[(quantum[0], upper_p)]
            res_b = boot[("mts", lower_p)]
            est = crossover_bootstrap(res_a, res_b)
            cross_doc = {
                "method_pair": [quantum[0], "mts"],
                "quantiles": [upper_p, lower_p],
                "point": crossover(res_a.point, res_b.point),
                "median": est.median,
                "ci": list(est.ci),
                "draws_dropped": est.n_dropped,
            }

    report = {
        **_artifact_header("analyze", cfg),
        "quantile_definition": "linear interpolation",
        "fit_scale": "natural log",
        "fits": fits,
        "crossover": cross_doc,
        "censoring": {
            "counts": {str(k): v for k, v in sorted(dataset.censored.items())},
            "excluded_replicates": [list(k) for k in sorted(dataset.excluded_replicates)],
        },
    }
    _emit_json(report, cfg["out"])

    if cfg["csv_dir"]:
        os.makedirs(cfg["csv_dir"], exist_ok=True)
        header = _artifact_header("analyze", cfg)
        medians = replicate_medians(dataset)
        scatter = [
            [n, m, rep, f"{med:.12g}"]
            for (n, m, rep), med in sorted(medians.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2]))
        ]
        _emit_csv(
            ["n", "method", "replicate", "median_tts"],
            scatter,
            os.path.join(cfg["csv_dir"], "scatter.csv"),
            header,
        )
        fit_rows = []
        all_n = sorted({r["n"] for r in records})
        for method in methods:
            for p in ps:
                fit = boot[(method, p)].point
                point_ns = [n for n, _ in point_quantiles(dataset, method, p)]
                for n in all_n:
                    if n in point_ns:
                        fit_rows.append(
                            [method, f"{p:g}", n, f"{np.exp(fit.alpha + fit.beta * n):.12g}"]
                        )
        _emit_csv(
            ["method", "quantile", "n", "fit_tts"],
            fit_rows,
            os.path.join(cfg["csv_dir"], "fit_lines.csv"),
            header,
        )
        run_rows = [
            [r["n"], r["method"], r["replicate"], r["seed"], r["evals_to_solution"]]
            for r in sorted(records, key=lambda r: (r["method"], r["n"], r["replicate"], r["seed"]))
            if r["found_optimum"]
        ]
        _emit_csv(
            ["n", "method", "replicate", "seed", "evals_to_solution"],
            run_rows,
            os.path.join(cfg["csv_dir"], "runs.csv"),
            header,
        )
        gap_methods = [m for m in methods if m != "mts"]
        if "mts" in methods and gap_methods:
            gap = log_ratio_gap(
                dataset,
                np.random.default_rng(np.random.SeedSequence(cfg["seed"], spawn_key=(1,))),
                cfg["bootstrap"],
                method_a=gap_methods[0],
                method_b="mts",
            )
            gap_rows = [
                [n, d, f"{v:.12g}"] for n in sorted(gap) for d, v in enumerate(gap[n])
            ]
            _emit_csv(
                ["n", "draw", "log10_ratio"],
                gap_rows,
                os.path.join(cfg["csv_dir"], "gap.csv"),
                header,
            )
    return 0


# ---- emit helpers ----


def _emit_json(doc, out):
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(columns, rows, out, header_doc):
    """CSV with a leading '# ' comment line embedding the config JSON."""

    def write(fh):
        fh.write("# " + json.dumps(header_doc, sort_keys=True) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)

    if out:
        with open(out, "w") as fh:
            write(fh)
    else:
        write(sys.stdout)


# ---- wiring ----


def _specs():
    specs = {}

    s = SubSpec("energy", "sidelobe energy of one sequence")
    s.add("--seq", str, required=True, help="sequence as +-/01 text")
    s.add("--verbose", bool, default=False, help="also print the autocorrelation profile")
    specs[s.name] = s

    s = SubSpec("brute", "exhaustive optimum for one length")
    s.add("--n", int, required=True)
    s.add("--cap", int, default=None, help="override the exhaustive-scan cap")
    specs[s.name] = s

    s = SubSpec("hamiltonian", "emit the spin-glass term list as JSON")
    s.add("--n", int, required=True)
    s.add("--out", str, default=None)
    specs[s.name] = s

    s = SubSpec("cd", "tabulate the first-order coefficient over lambda as CSV")
    s.add("--n", int, required=True)
    s.add("--points", int, default=101, help="lambda grid size over [0, 1]")
    s.add("--out", str, default=None)
    specs[s.name] = s

    s = SubSpec("gates", "gate-count model for the quantum circuits")
    s.add("--n", int, required=True)
    s.add("--method", str, default="dcqo", choices=["dcqo", "qaoa"])
    s.add("--layers", int, default=None, help="QAOA layer count")
    s.add("--steps", int, default=None, help="trotter step count")
    specs[s.name] = s

    s = SubSpec("dcqo-sample", "simulate the counterdiabatic circuit and draw shots")
    s.add("--n", int, required=True)
    s.add("--shots", int, default=1000)
    s.add("--trotter", int, default=100)
    s.add("--total-time", float, default=1.0)
    s.add("--schedule", str, default="sin_squared")
    s.add("--seed", int, default=None)
    s.add("--out", str, default=None)
    specs[s.name] = s

    s = SubSpec("solve", "run the memetic tabu solver grid, appending JSONL records")
    s.add("--method", str, default="mts", choices=["mts", "qemts", "qemts-multirun"])
    s.add("--n", int, required=True)
    s.add("--target", int, default=None)
    s.add("--target-auto", bool, default=False, help="brute-force the target when untabulated")
    s.add("--k", int, default=100)
    s.add("--p-comb", float, default=0.9)
    s.add("--p-mut", float, default=None, help="defaults to 1/n")
    s.add("--gmax", int, default=10**9)
    s.add("--max-evals", int, default=10**7)
    s.add("--seeds", str, default="0:10", help="seed index range a:b")
    s.add("--replicates", str, default="0:1", help="replicate range a:b")
    s.add("--shots-file", str, default=None, help="JSONL shots for quantum seeding")
    s.add("--shots", int, default=1000)
    s.add("--trotter", int, default=100)
    s.add("--total-time", float, default=1.0)
    s.add("--multi-runs", int, default=10)
    s.add("--jobs", int, default=None, help="parallel workers; default all cores")
    s.add("--seed", int, default=None, help="master seed")
    s.add("--out", str, required=True)
    specs[s.name] = s

    s = SubSpec("landscape", "exhaustive local-minima densities as CSV")
    s.add("--n-range", str, required=True, help="a:b:step inclusive")
    s.add("--model", str, default="both", choices=["labs", "sk", "both"])
    s.add("--instances", int, default=10, help="disorder instances per n")
    s.add("--seed", int, default=None)
    s.add("--out", str, default=None)
    specs[s.name] = s

    s = SubSpec("analyze", "fit scaling from run records and write a report")
    s.add("--in", str, required=True, help="runs JSONL path")
    s.options["in_path"] = s.options.pop("in")
    s.arg_defs[-1] = ("--in", "in_path", str, "runs JSONL path", None)
    s.add("--quantiles", str, default="0.10,0.50,0.90")
    s.add("--bootstrap", int, default=5000)
    s.add("--fit-range", str, default=None, help="restrict fit to n in a:b")
    s.add("--crossover-quantiles", str, default="0.95,0.05")
    s.add("--censor-threshold", float, default=0.5)
    s.add("--seed", int, default=None)
    s.add("--out", str, default=None, help="report JSON path")
    s.add("--csv-dir", str, default=None)
    specs[s.name] = s

    return specs


_HANDLERS = {
    "energy": cmd_energy,
    "brute": cmd_brute,
    "hamiltonian": cmd_hamiltonian,
    "cd": cmd_cd,
    "gates": cmd_gates,
    "dcqo-sample": cmd_dcqo_sample,
    "solve": cmd_solve,
    "landscape": cmd_landscape,
    "analyze": cmd_analyze,
}


def build_parser():
    parser = _Parser(
        prog="labskit",
        description=(
            "LABS solvers and benchmarks. Flags may also come from a --config "
            f"JSON file or {ENV_PREFIX}<FLAG> environment variables; explicit "
            "flags win, then config file, then environment, then defaults."
        ),
    )
    parser.add_argument("--version", action="version", version=f"labskit {__version__}")
    subparsers = parser.add_subparsers(dest="command")
    specs = _specs()
    for spec in specs.values():
        spec.register(subparsers)
    return parser, specs


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, specs = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_usage()
            return 1
        cfg = specs[ns.command].resolve(ns)
        return _HANDLERS[ns.command](cfg)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help / --version
        return int(exc.code or 0)
    except (KeyboardInterrupt, Exception) as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
