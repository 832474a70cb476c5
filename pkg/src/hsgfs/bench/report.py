"""Comparison reports: per-run rows, median/IQR aggregates, JSON and CSV output."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

RUN_COLUMNS = ["algorithm", "seed", "run_seed", "accuracy", "n_selected", "fraction_used",
               "evaluations", "source"]
SUMMARY_COLUMNS = ["algorithm", "runs", "median_accuracy", "iqr_accuracy", "median_n_selected",
                   "iqr_n_selected", "median_fraction_used", "iqr_fraction_used"]


class ExternalResultsError(ValueError):
    pass


def percent(x: float) -> str:
    return f"{100.0 * x:.2f}%"


def median_iqr(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    return float(med), float(q3 - q1)


@dataclass
class ComparisonReport:
    """All rows of a comparison plus the settings that produced them.

    ``rows`` are plain dicts so the JSON form is the whole state; aggregates
    are recomputed from rows on demand.
    """

    n_features: int
    rows: list[dict] = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    include_external: bool = False

    def algorithms(self, include_external: Optional[bool] = None) -> list[str]:
        seen: dict[str, None] = {}
        for row in self._rows(include_external):
            seen.setdefault(row["algorithm"], None)
        return list(seen)

    def _rows(self, include_external: Optional[bool]) -> list[dict]:
        include = self.include_external if include_external is None else include_external
        return [r for r in self.rows if include or not r.get("external", False)]

    def aggregates(self, include_external: Optional[bool] = None) -> dict[str, dict]:
        out = {}
        rows = self._rows(include_external)
        for alg in self.algorithms(include_external):
            mine = [r for r in rows if r["algorithm"] == alg]
            acc = median_iqr([r["accuracy"] for r in mine])
            nsel = median_iqr([r["n_selected"] for r in mine])
            frac = median_iqr([r["fraction_used"] for r in mine])
            out[alg] = {
                "runs": len(mine),
                "median_accuracy": acc[0], "iqr_accuracy": acc[1],
                "median_n_selected": nsel[0], "iqr_n_selected": nsel[1],
                "median_fraction_used": frac[0], "iqr_fraction_used": frac[1],
            }
        return out

    def merge_external(self, rows: list[dict]) -> None:
        for row in rows:
            if not 1 <= row["n_selected"] <= self.n_features:
                raise ExternalResultsError(
                    f"external row for {row['algorithm']!r} selects {row['n_selected']} of "
                    f"{self.n_features} features")
            row = dict(row, fraction_used=row["n_selected"] / self.n_features, external=True)
            self.rows.append(row)

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n_features": self.n_features,
            "settings": self.settings,
            "include_external": self.include_external,
            "rows": self.rows,
            "aggregates": self.aggregates(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ComparisonReport":
        return cls(data["n_features"], list(data["rows"]), dict(data.get("settings", {})),
                   bool(data.get("include_external", False)))

    @classmethod
    def load(cls, path) -> "ComparisonReport":
        return cls.from_json(json.loads(Path(path).read_text()))

    def runs_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RUN_COLUMNS)
        for r in self.rows:
            w.writerow([
                r["algorithm"], r["seed"], r.get("run_seed", ""), percent(r["accuracy"]),
                r["n_selected"], f"{r['fraction_used']:.4f}", r.get("evaluations", ""),
                "external" if r.get("external") else "internal",
            ])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for alg, a in self.aggregates().items():
            w.writerow([
                alg, a["runs"], percent(a["median_accuracy"]), percent(a["iqr_accuracy"]),
                f"{a['median_n_selected']:g}", f"{a['iqr_n_selected']:g}",
                f"{a['median_fraction_used']:.4f}", f"{a['iqr_fraction_used']:.4f}",
            ])
        return buf.getvalue()

    def write(self, out_dir, name: str = "report") -> dict[str, Path]:
        """Write ``<name>.json``, ``<name>_runs.csv`` and ``<name>_summary.csv``."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {
            "json": out_dir / f"{name}.json",
            "runs": out_dir / f"{name}_runs.csv",
            "summary": out_dir / f"{name}_summary.csv",
        }
        paths["json"].write_text(json.dumps(self.to_json(), indent=1) + "\n")
        paths["runs"].write_text(self.runs_csv())
        paths["summary"].write_text(self.summary_csv())
        return paths


def _parse_accuracy(cell: str) -> float:
    cell = cell.strip()
    if cell.endswith("%"):
        value = float(cell[:-1]) / 100.0
    else:
        value = float(cell)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"accuracy {cell!r} outside [0, 1] (use a trailing % for percentages)")
    return value


def import_external_results(path) -> list[dict]:
    """Read rows produced by other tools.

    Required columns: ``algorithm, seed, accuracy, n_selected``. Accuracy is
    a fraction in [0, 1], or a percentage when written with a trailing ``%``.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"algorithm", "seed", "accuracy", "n_selected"} - set(reader.fieldnames or ())
        if missing:
            raise ExternalResultsError(f"{path}: missing columns {sorted(missing)}")
        rows = []
        for line_no, rec in enumerate(reader, start=2):
            try:
                if not (rec["algorithm"] or "").strip():
                    raise ValueError("empty algorithm name")
                rows.append({
                    "algorithm": rec["algorithm"].strip(),
                    "seed": int(rec["seed"]),
                    "accuracy": _parse_accuracy(rec["accuracy"] or ""),
                    "n_selected": int(rec["n_selected"]),
                })
            except (TypeError, ValueError) as exc:
                raise ExternalResultsError(f"{path}: line {line_no}: {exc}") from None
    return rows
