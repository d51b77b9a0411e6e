"""Loading and validation of labskit report bundles.

A bundle is a directory holding ``report.json`` plus the exported plot
CSVs (``scatter.csv``, ``fit_lines.csv``, ``gap.csv``, ``runs.csv``,
``landscape.csv``).  Every artifact embeds the producing tool's version;
loading rejects artifacts whose major version differs from the one this
package understands.  Raw per-run JSONL files are deliberately not
consumed here: the CSV/JSON export is the contract.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import SUPPORTED_SCHEMA_MAJOR


class SchemaError(Exception):
    """A bundle artifact is present but malformed or incompatible."""


TABLE_FILES = {
    "scatter": "scatter.csv",
    "fit_lines": "fit_lines.csv",
    "gap": "gap.csv",
    "runs": "runs.csv",
    "landscape": "landscape.csv",
}


@dataclass
class Table:
    """One parsed CSV artifact: embedded metadata, header, and rows."""

    name: str
    meta: dict | None
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    def floats(self, column: str) -> list[float]:
        return [float(r[column]) for r in self.rows]

    def ints(self, column: str) -> list[int]:
        return [int(r[column]) for r in self.rows]

    def strings(self, column: str) -> list[str]:
        return [r[column] for r in self.rows]


@dataclass
class ReportBundle:
    root: Path
    report: dict | None
    tables: dict[str, Table]

    def table(self, name: str) -> Table | None:
        return self.tables.get(name)


def _check_version(meta: dict | None, origin: str) -> None:
    if meta is None:
        return
    version = meta.get("version")
    if not isinstance(version, str) or not version:
        raise SchemaError(f"{origin}: missing tool version field")
    major = version.split(".")[0]
    if major != str(SUPPORTED_SCHEMA_MAJOR):
        raise SchemaError(
            f"{origin}: schema major {major} not supported "
            f"(expected {SUPPORTED_SCHEMA_MAJOR})"
        )


def read_table(path: Path, name: str) -> Table:
    """Parse one CSV artifact; a leading ``# {json}`` line carries metadata."""
    meta = None
    with open(path, newline="") as fh:
        first = fh.readline()
        if first.startswith("#"):
            try:
                meta = json.loads(first.lstrip("#").strip())
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path.name}: unparseable metadata line") from exc
        else:
            fh.seek(0)
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: no header row") from None
        rows = [dict(zip(columns, row)) for row in reader if row]
    _check_version(meta, path.name)
    return Table(name=name, meta=meta, columns=columns, rows=rows)


def load_bundle(root) -> ReportBundle:
    """Load whatever artifacts exist under ``root``.

    Missing files are tolerated here (renderers decide what they need);
    an entirely empty directory is rejected outright.
    """
    root = Path(root)
    if not root.is_dir():
        raise SchemaError(f"bundle directory not found: {root}")
    report = None
    report_path = root / "report.json"
    if report_path.exists():
        try:
            report = json.loads(report_path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError("report.json: invalid JSON") from exc
        _check_version(report, "report.json")
    tables = {}
    for name, filename in TABLE_FILES.items():
        path = root / filename
        if path.exists():
            tables[name] = read_table(path, name)
    if report is None and not tables:
        raise SchemaError(f"no bundle artifacts found in {root}")
    return ReportBundle(root=root, report=report, tables=tables)


def require_columns(table: Table, needed: list[str]) -> None:
    missing = [c for c in needed if c not in table.columns]
    if missing:
        raise SchemaError(
            f"{table.name}: missing required columns {missing} "
            f"(have {table.columns})"
        )
