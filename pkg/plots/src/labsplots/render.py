"""Renderers turning a report bundle into the four benchmark figures.

Figures: scaling scatter with quantile fit lines, log-ratio gap
distributions, local-minima landscape comparison, and a single-run TTS
comparison.  Rendering is read-only and deterministic; every number
shown comes from the bundle — nothing is recomputed here.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bundle import ReportBundle, SchemaError, load_bundle, require_columns  # noqa: E402

_PALETTE = ["tab:orange", "tab:cyan", "tab:purple", "tab:green", "tab:red"]


class MissingSection(Exception):
    """The bundle lacks the inputs for one figure; the figure is skipped."""


def _method_colors(methods: list[str]) -> dict[str, str]:
    return {m: _PALETTE[i % len(_PALETTE)] for i, m in enumerate(sorted(methods))}


def _require_table(bundle: ReportBundle, name: str, figure: str):
    table = bundle.table(name)
    if table is None:
        raise MissingSection(f"{figure}: bundle has no {name} table")
    return table


def _save(fig, out_path) -> None:
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_scaling(bundle: ReportBundle, out_path) -> dict:
    """Scatter of per-replicate median TTS vs N with Q0.5 fit lines.

    Returns the kappa annotation per method, sourced from report.json.
    """
    scatter = _require_table(bundle, "scatter", "scaling")
    fit_lines = _require_table(bundle, "fit_lines", "scaling")
    if bundle.report is None:
        raise MissingSection("scaling: bundle has no report.json (kappa source)")
    require_columns(scatter, ["n", "method", "replicate", "median_tts"])
    require_columns(fit_lines, ["method", "quantile", "n", "fit_tts"])
    if not scatter.rows:
        raise SchemaError("scatter.csv: no data rows")

    methods = sorted({r["method"] for r in scatter.rows})
    colors = _method_colors(methods)
    fits = bundle.report.get("fits", {})

    fig, ax = plt.subplots(figsize=(7, 4.5))
    annotations = {}
    for method in methods:
        ns = [int(r["n"]) for r in scatter.rows if r["method"] == method]
        tts = [float(r["median_tts"]) for r in scatter.rows if r["method"] == method]
        ax.scatter(ns, tts, s=14, alpha=0.55, color=colors[method], label=method)
        line = sorted(
            (
                (int(r["n"]), float(r["fit_tts"]))
                for r in fit_lines.rows
                if r["method"] == method and float(r["quantile"]) == 0.5
            )
        )
        try:
            kappa = fits[method]["0.5"]["kappa"]
        except KeyError as exc:
            raise SchemaError(
                f"report.json: no Q0.5 fit for method {method!r}"
            ) from exc
        annotations[method] = kappa
        if line:
            xs, ys = zip(*line)
            ax.plot(xs, ys, "--", color=colors[method])
            ax.annotate(
                f"$\\kappa \\approx {kappa:.3f}$",
                (xs[-1], ys[-1]),
                textcoords="offset points",
                xytext=(6, 0),
                color=colors[method],
                fontsize=9,
            )
    ax.set_yscale("log")
    ax.set_xlabel("sequence length N")
    ax.set_ylabel("median TTS (objective evaluations)")
    ax.set_title("Per-replicate median TTS and log-linear Q$_{0.50}$ fits")
    ax.legend()
    _save(fig, out_path)
    return annotations


def render_gap(bundle: ReportBundle, out_path) -> None:
    """Per-N distributions of the bootstrap log10 TTS ratio, zero line overlaid."""
    gap = _require_table(bundle, "gap", "gap")
    require_columns(gap, ["n", "draw", "log10_ratio"])
    if not gap.rows:
        raise SchemaError("gap.csv: no data rows")

    by_n = defaultdict(list)
    for r in gap.rows:
        by_n[int(r["n"])].append(float(r["log10_ratio"]))
    ns = sorted(by_n)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.violinplot([by_n[n] for n in ns], positions=ns, widths=0.8, showmedians=True)
    ax.axhline(0.0, color="black", linewidth=1, linestyle=":")
    ax.set_xlabel("sequence length N")
    ax.set_ylabel(r"$\log_{10}(\mathrm{TTS_{quantum}}) - \log_{10}(\mathrm{TTS_{MTS}})$")
    ax.set_title("Bootstrap TTS gap distributions (negative favors seeding)")
    _save(fig, out_path)


def render_landscape(bundle: ReportBundle, out_path) -> None:
    """Local-minima density: one LABS series, SK instance spread per N."""
    table = _require_table(bundle, "landscape", "landscape")
    require_columns(table, ["n", "model", "instance", "f_lo", "minima_count"])
    if not table.rows:
        raise SchemaError("landscape.csv: no data rows")

    labs = sorted(
        (int(r["n"]), float(r["f_lo"])) for r in table.rows if r["model"] == "labs"
    )
    sk = defaultdict(list)
    for r in table.rows:
        if r["model"] == "sk":
            sk[int(r["n"])].append(float(r["f_lo"]))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if labs:
        xs, ys = zip(*labs)
        ax.plot(xs, ys, "o-", color="tab:orange", label="LABS")
    for i, n in enumerate(sorted(sk)):
        vals = sorted(sk[n])
        ax.scatter([n] * len(vals), vals, s=12, alpha=0.5, color="tab:cyan",
                   label="SK instances" if i == 0 else None)
        ax.plot([n - 0.25, n + 0.25], [vals[len(vals) // 2]] * 2, color="tab:blue",
                label="SK median" if i == 0 else None)
    ax.set_yscale("log")
    ax.set_xlabel("system size N")
    ax.set_ylabel("fraction of 1-flip local minima $f_{LO}$")
    ax.set_title("Landscape ruggedness: LABS vs SK")
    ax.legend()
    _save(fig, out_path)


def render_single_run(bundle: ReportBundle, out_path) -> None:
    """TTS of the first (replicate 0-like) run per method across N."""
    runs = _require_table(bundle, "runs", "single_run")
    require_columns(runs, ["n", "method", "replicate", "seed", "evals_to_solution"])
    if not runs.rows:
        raise SchemaError("runs.csv: no data rows")

    # one deterministic representative per (method, n): lowest (replicate, seed)
    first = {}
    for r in runs.rows:
        key = (r["method"], int(r["n"]))
        rank = (int(r["replicate"]), int(r["seed"]))
        if key not in first or rank < first[key][0]:
            first[key] = (rank, float(r["evals_to_solution"]))
    methods = sorted({m for m, _ in first})
    colors = _method_colors(methods)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method in methods:
        pts = sorted((n, tts) for (m, n), (_, tts) in first.items() if m == method)
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "o-", color=colors[method], label=method)
    ax.set_yscale("log")
    ax.set_xlabel("sequence length N")
    ax.set_ylabel("single-run TTS (objective evaluations)")
    ax.set_title("Single-run TTS comparison")
    ax.legend()
    _save(fig, out_path)


_FIGURES = {
    "scaling": ("scaling.png", render_scaling),
    "gap": ("gap.png", render_gap),
    "landscape": ("landscape.png", render_landscape),
    "single": ("single_run.png", render_single_run),
}


def render_all(bundle: ReportBundle, out_dir, which: list[str]) -> dict:
    """Render the requested figures; skip any whose inputs are absent.

    Returns the annotation document (written alongside the figures).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    annotations = {}
    for name in which:
        filename, renderer = _FIGURES[name]
        try:
            result = renderer(bundle, out_dir / filename)
        except MissingSection as exc:
            print(f"warning: skipped {name}: {exc}", file=sys.stderr)
            continue
        if result is not None:
            annotations[name] = result
    (out_dir / "annotations.json").write_text(
        json.dumps(annotations, indent=2, sort_keys=True) + "\n"
    )
    return annotations


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render benchmark figures from a labskit report bundle.",
    )
    parser.add_argument("--bundle", required=True, help="bundle directory")
    parser.add_argument("--out", required=True, help="output directory for figures")
    parser.add_argument(
        "--which",
        default=",".join(_FIGURES),
        help=f"comma-separated subset of: {','.join(_FIGURES)}",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    which = [w.strip() for w in args.which.split(",") if w.strip()]
    unknown = [w for w in which if w not in _FIGURES]
    if unknown:
        print(f"error: unknown figure(s) {unknown}", file=sys.stderr)
        return 1
    try:
        bundle = load_bundle(args.bundle)
        render_all(bundle, args.out, which)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
