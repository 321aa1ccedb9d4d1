"""Check reports and their CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

__all__ = ["Sample", "CheckReport", "report_to_json", "report_to_csv", "emit_series"]


@dataclass(frozen=True)
class Sample:
    """One residual evaluation; ``label`` names the sub-check (curve, field, ...)."""

    t: float
    x: tuple
    residual: tuple
    label: str = ""

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.residual)) if self.residual else 0.0


@dataclass
class CheckReport:
    """Outcome of one named check.  ``passed`` iff ``max_residual <= tolerance``.

    ``runtime`` is wall-clock seconds; it is never written to report files so
    they stay byte-identical across runs.
    """

    name: str
    theorem: str
    samples: list
    tolerance: float
    seed: Optional[int] = None
    details: dict = field(default_factory=dict)
    runtime: float = 0.0
    error: Optional[str] = None

    @property
    def max_residual(self) -> float:
        if self.error is not None:
            return math.inf
        return max((s.norm for s in self.samples), default=0.0)

    @property
    def passed(self) -> bool:
        return self.error is None and self.max_residual <= self.tolerance

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.error is not None:
            return f"[{status}] {self.name} ({self.theorem}): error: {self.error}"
        rel = "<=" if self.passed else ">"
        return f"[{status}] {self.name} ({self.theorem}): max residual {self.max_residual:.3e} {rel} {self.tolerance:.1e}"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def report_to_dict(report: CheckReport) -> dict:
    return _clean(
        {
            "name": report.name,
            "theorem": report.theorem,
            "passed": report.passed,
            "max_residual": report.max_residual,
            "tolerance": report.tolerance,
            "seed": report.seed,
            "error": report.error,
            "details": report.details,
            "samples": [
                {"label": s.label, "t": s.t, "x": list(s.x), "residual": list(s.residual), "norm": s.norm}
                for s in report.samples
            ],
        }
    )


def report_to_json(report: CheckReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"


def report_to_csv(report: CheckReport) -> str:
    width = max((len(s.residual) for s in report.samples), default=0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "t", "x1", "x2", "x3"] + [f"r{k + 1}" for k in range(width)] + ["norm"])
    for s in report.samples:
        x = list(s.x) + [""] * (3 - len(s.x))
        res = list(s.residual) + [""] * (width - len(s.residual))
        writer.writerow([s.label, repr(float(s.t))] + [_fmt(v) for v in x] + [_fmt(v) for v in res] + [repr(s.norm)])
    return buf.getvalue()


def _fmt(v):
    return v if v == "" else repr(float(v))


def emit_series(report: CheckReport, fmt: str, out_dir) -> Path:
    """Write ``<out_dir>/<name>.<fmt>`` and return the path."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}; use csv or json")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.name}.{fmt}"
    text = report_to_csv(report) if fmt == "csv" else report_to_json(report)
    path.write_text(text, encoding="utf-8")
    return path
