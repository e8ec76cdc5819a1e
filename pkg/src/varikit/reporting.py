"""Deterministic CSV/JSON emission for verification reports and series."""

from __future__ import annotations

import json
import math

from .blowup import BlowupSeries
from .verify import VerificationReport


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def reports_csv(reports) -> str:
    reports = list(reports)
    param_keys = sorted({k for r in reports for k in r.params})
    header = ["name", "lhs", "rhs", "ratio", "pass", "conservative"] + param_keys
    lines = [",".join(header)]
    for r in reports:
        row = [r.name, _fmt(r.lhs), _fmt(r.rhs), _fmt(r.ratio), _fmt(r.passed),
               ";".join(r.conservative)]
        row += [_fmt(r.params.get(k)) for k in param_keys]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "item"):  # numpy scalars
        return _jsonable(value.item())
    return value


def reports_json(reports, extra: dict | None = None) -> str:
    doc = {
        "reports": [
            {
                "name": r.name,
                "lhs": _jsonable(r.lhs),
                "rhs": _jsonable(r.rhs),
                "ratio": _jsonable(r.ratio),
                "pass": bool(r.passed),
                "conservative": list(r.conservative),
                "params": _jsonable(r.params),
            }
            for r in reports
        ]
    }
    if extra:
        doc.update(_jsonable(extra))
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def series_csv(series: BlowupSeries) -> str:
    lines = ["parameter,norm,budget,growthFactor"]
    for i, (param, norm, budget) in enumerate(
            zip(series.parameters, series.norms, series.budgets)):
        growth = "" if i == 0 else _fmt(series.growth_factors[i - 1])
        lines.append(f"{_fmt(param)},{_fmt(norm)},{_fmt(budget)},{growth}")
    return "\n".join(lines) + "\n"


def summary_line(report: VerificationReport) -> str:
    flag = "PASS" if report.passed else "FAIL"
    return (f"{flag} {report.name}: lhs={report.lhs:.6g} rhs={report.rhs:.6g} "
            f"ratio={report.ratio:.6g}")
