"""
Text rendering of reports: aligned tables for people, CSV for machines.

CSV numbers carry 17 significant digits, table numbers 10 decimals;
infinities print as ``inf`` in both.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence

from tw_bounds import BoundReport, IdentityCheck
from tw_montecarlo import SimulationEstimate, Verdict

BOUND_HEADER = (
    "quantity", "class_pair", "x", "y", "lower", "exact", "upper",
    "slack_lower", "slack_upper", "tight", "vacuous",
)
ESTIMATE_HEADER = (
    "quantity", "x", "y", "mean", "ci_half_width", "ci_low", "ci_high", "n_paths",
    "n_truncated", "seed", "confidence_level", "interval", "unreliable",
)
COMPARE_HEADER = ESTIMATE_HEADER + ("exact", "verdict")
SUMMARY_HEADER = (
    "state", "class", "E[T_C]", "E[T_exit]", "reach_other", "return_after_other", "G_AuB(x,x)",
)
IDENTITY_HEADER = ("identity", "args", "lhs", "rhs", "relation", "residual", "holds")


@dataclass(frozen=True)
class EstimateRow:
    quantity: str
    x: str
    y: Optional[str]
    estimate: SimulationEstimate
    exact: Optional[float] = None
    verdict: Optional[Verdict] = None


@dataclass(frozen=True)
class SummaryRow:
    state: str
    klass: str
    to_c: float
    exit_time: float
    reach_other: float
    return_after_other: float
    green_diag: float


def cell(v: Any, fmt: str) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g") if fmt == "csv" else f"{v:.10f}"
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def render_rows(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> str:
    cells = [[cell(v, fmt) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(wd) for h, wd in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * wd for wd in widths))
    lines += ["  ".join(c.ljust(wd) for c, wd in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def render_report(reports: Sequence[BoundReport], fmt: str = "table") -> str:
    if not reports:
        raise ValueError("no reports to render")
    rows: List[Sequence[Any]] = [
        (r.quantity, r.class_pair, r.x, r.y, r.lower, r.exact, r.upper,
         r.slack_lower, r.slack_upper, r.tight, r.vacuous)
        for r in reports
    ]
    return render_rows(BOUND_HEADER, rows, fmt)


def render_estimates(rows: Sequence[EstimateRow], fmt: str = "table") -> str:
    if not rows:
        raise ValueError("no estimates to render")
    compared = any(r.verdict is not None for r in rows)
    out = []
    for r in rows:
        e = r.estimate
        line: List[Any] = [
            r.quantity, r.x, r.y, e.mean, e.ci_half_width, e.ci_low, e.ci_high, e.n_paths,
            e.n_truncated, e.seed, e.confidence_level, e.interval, e.unreliable,
        ]
        if compared:
            line += [r.exact, r.verdict]
        out.append(line)
    return render_rows(COMPARE_HEADER if compared else ESTIMATE_HEADER, out, fmt)


def render_summary(rows: Sequence[SummaryRow], fmt: str = "table") -> str:
    return render_rows(SUMMARY_HEADER, [
        (r.state, r.klass, r.to_c, r.exit_time, r.reach_other, r.return_after_other, r.green_diag)
        for r in rows
    ], fmt)


def render_identities(checks: Sequence[IdentityCheck], fmt: str = "table") -> str:
    return render_rows(IDENTITY_HEADER, [
        (c.name, " ".join(c.args), c.lhs, c.rhs, c.relation, c.residual, c.holds) for c in checks
    ], fmt)
