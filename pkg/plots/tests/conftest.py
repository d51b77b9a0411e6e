import json
import math

import pytest

HEADER = {"tool": "labskit", "version": "0.1.0", "command": "analyze", "config": {}}


def _csv(path, columns, rows, meta=HEADER):
    lines = []
    if meta is not None:
        lines.append("# " + json.dumps(meta))
    lines.append(",".join(columns))
    lines += [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def synthetic_bundle(tmp_path):
    """A minimal two-method bundle with exactly known fit numbers."""
    root = tmp_path / "bundle"
    root.mkdir()
    ns = [10, 12, 14, 16]
    kappas = {"mts": 1.37, "qemts": 1.24}
    scatter, fit_lines, runs = [], [], []
    for method, kappa in kappas.items():
        for n in ns:
            q = 100.0 * kappa**n
            for rep in range(3):
                scatter.append([n, method, rep, q * (1.0 + 0.01 * rep)])
                runs.append([n, method, rep, 0, int(q)])
            fit_lines.append([method, "0.5", n, q])
    _csv(root / "scatter.csv", ["n", "method", "replicate", "median_tts"], scatter)
    _csv(root / "fit_lines.csv", ["method", "quantile", "n", "fit_tts"], fit_lines)
    _csv(root / "runs.csv", ["n", "method", "replicate", "seed", "evals_to_solution"], runs)
    gap = [
        [n, d, -0.1 + 0.05 * math.sin(n + d)] for n in ns for d in range(40)
    ]
    _csv(root / "gap.csv", ["n", "draw", "log10_ratio"], gap)
    land = [[n, "labs", 0, 0.01 * n, 4] for n in ns]
    land += [[n, "sk", i, 0.002 * n * (1 + i / 10), 2] for n in ns for i in range(5)]
    _csv(root / "landscape.csv", ["n", "model", "instance", "f_lo", "minima_count"], land)
    report = {
        **HEADER,
        "fits": {
            m: {"0.5": {"alpha": math.log(100.0), "beta": math.log(k), "kappa": k,
                        "r_squared": 1.0, "degenerate": False}}
            for m, k in kappas.items()
        },
        "crossover": None,
    }
    (root / "report.json").write_text(json.dumps(report, indent=2))
    return root
