"""Machine-readable run reports with a fixed, versioned schema.

Reports serialize to JSON with a pinned field order and round-trip
bit-exactly: floats are written in shortest-repr form, so reading a
report back yields a Report equal field-for-field to the one written.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .randomize import Margins, Mode, RandomizationScheme
from .spaces import PermutationSpaceStats

__all__ = ["Report", "SCHEMA_VERSION", "write_report", "read_report"]

SCHEMA_VERSION = "didperm-report/1"

DECISION_REJECTED = "rejected"
DECISION_NOT_REJECTED = "not_rejected"


@dataclass(frozen=True)
class Report:
    """One complete inference run: inputs, decision, p-values, histogram, space stats."""

    dataset_id: str
    scheme: RandomizationScheme
    iterations: int
    master_seed: int
    observed: float
    lower: float
    upper: float
    alpha: float
    decision: str
    p_raw: float
    p_corrected: float
    histogram: tuple[tuple[float, float, int], ...]
    space_stats: PermutationSpaceStats

    def __post_init__(self):
        if self.decision not in (DECISION_REJECTED, DECISION_NOT_REJECTED):
            raise ValueError(f"decision must be rejected/not_rejected, got {self.decision!r}")
        object.__setattr__(
            self,
            "histogram",
            tuple((float(lo), float(hi), int(c)) for lo, hi, c in self.histogram),
        )


def _to_dict(report: Report) -> dict:
    s = report.space_stats
    return {
        "schema": SCHEMA_VERSION,
        "dataset_id": report.dataset_id,
        "scheme": {"margins": report.scheme.margins.value, "mode": report.scheme.mode.value},
        "iterations": report.iterations,
        "master_seed": report.master_seed,
        "observed": report.observed,
        "lower": report.lower,
        "upper": report.upper,
        "alpha": report.alpha,
        "decision": report.decision,
        "p_raw": report.p_raw,
        "p_corrected": report.p_corrected,
        "histogram": [[lo, hi, c] for lo, hi, c in report.histogram],
        "space_stats": {
            "n": s.n,
            "n_affected": s.n_affected,
            "n_time": s.n_time,
            "p_affected": s.p_affected,
            "p_time": s.p_time,
            "log_size_single": s.log_size_single,
            "log_size_dual": s.log_size_dual,
            "log_gain": s.log_gain,
            "log_size_bernoulli_dual": s.log_size_bernoulli_dual,
            "entropy_affected": s.entropy_affected,
            "entropy_time": s.entropy_time,
        },
    }


def _from_dict(data: dict) -> Report:
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema: {data.get('schema')!r}")
    s = data["space_stats"]
    return Report(
        dataset_id=data["dataset_id"],
        scheme=RandomizationScheme(
            margins=Margins(data["scheme"]["margins"]), mode=Mode(data["scheme"]["mode"])
        ),
        iterations=int(data["iterations"]),
        master_seed=int(data["master_seed"]),
        observed=float(data["observed"]),
        lower=float(data["lower"]),
        upper=float(data["upper"]),
        alpha=float(data["alpha"]),
        decision=data["decision"],
        p_raw=float(data["p_raw"]),
        p_corrected=float(data["p_corrected"]),
        histogram=tuple((lo, hi, c) for lo, hi, c in data["histogram"]),
        space_stats=PermutationSpaceStats(
            n=int(s["n"]),
            n_affected=int(s["n_affected"]),
            n_time=int(s["n_time"]),
            p_affected=float(s["p_affected"]),
            p_time=float(s["p_time"]),
            log_size_single=float(s["log_size_single"]),
            log_size_dual=float(s["log_size_dual"]),
            log_gain=float(s["log_gain"]),
            log_size_bernoulli_dual=float(s["log_size_bernoulli_dual"]),
            entropy_affected=float(s["entropy_affected"]),
            entropy_time=float(s["entropy_time"]),
        ),
    )


def write_report(report: Report, path) -> None:
    """Write a report as schema-versioned JSON with a fixed field order."""
    path = Path(path)
    try:
        text = json.dumps(_to_dict(report), indent=2, allow_nan=False) + "\n"
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_report(path) -> Report:
    """Read back a report written by `write_report`."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc
    return _from_dict(data)
