"""Experiment orchestration: config jobs to reports, with the exit-code map.

Exit statuses: 0 all reports pass, 1 some report fails, 2 config schema
violation, 3 numeric precondition failure, 4 quadrature resolution failure.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

from .blowup import blowup_series, median_contrast
from .config import SchemaError, build_family, build_function, load_config
from .families import ResolutionError
from .fields import default_dictionary
from .lemmas import check_weak_lp_atomic, weak_lp_bound
from .maximal import MaximalParams, MedianParams
from .reporting import reports_csv, reports_json, series_csv, summary_line
from .verify import (VerificationReport, decomposition_check, verify_ball_iso,
                     verify_isoperimetric, verify_poincare, verify_size_iso,
                     verify_sobolev_avg, verify_sobolev_rect)

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_RESOLUTION = 0, 1, 2, 3, 4


def _center(job, n):
    return np.asarray(job.get("center", np.zeros(n)), dtype=float)


def _weak_embedding_job(job, seed: int) -> VerificationReport:
    p, q = float(job["p"]), float(job["q"])
    weak_lp_bound(1.0, 1.0, p, q)  # surfaces the q >= p domain error up front
    rng = np.random.default_rng(seed)
    instances = int(job.get("instances", 200))
    atoms = int(job.get("atoms", 40))
    worst_lhs = worst_rhs = 0.0
    violations = 0
    for _ in range(instances):
        k = int(rng.integers(1, atoms + 1))
        w = rng.uniform(1e-3, 1.0, k)
        f = rng.uniform(0.0, 5.0, k)
        lhs, rhs = check_weak_lp_atomic(w, f, p, q)
        if lhs > rhs * (1.0 + 1e-9):
            violations += 1
            worst_lhs, worst_rhs = lhs, rhs
        elif violations == 0 and (worst_rhs == 0.0 or lhs * worst_rhs > rhs * worst_lhs):
            worst_lhs, worst_rhs = lhs, rhs
    return VerificationReport(
        job["name"], worst_lhs, worst_rhs,
        params={"p": p, "q": q, "instances": instances, "seed": seed,
                "violations": violations},
    )


def execute_experiment(job: dict, seed: int = 0):
    """Run one config job; returns (reports, named blow-up series or None)."""
    kind, name = job["kind"], job["name"]
    if kind == "blowup":
        p = math.inf if job["p"] in ("inf", "Infinity") else float(job["p"])
        series = blowup_series(job["blowupKind"], p, int(job["steps"]),
                               n=int(job.get("n", 2)),
                               expect_divergence=job.get("expectDivergence"))
        return [], (name, series)
    if kind == "weak-embedding":
        return [_weak_embedding_job(job, seed)], None

    family = build_family(job["family"])
    if kind == "isoperimetric":
        v = family.sample(float(job["h"]))
        params = MaximalParams(
            s_min=float(job["sMin"]), s_max=float(job.get("sMax", 8.0)),
            centers=job.get("centers", "atoms"),
            grid_spacing=job.get("gridSpacing"),
        )
        return [verify_isoperimetric(v, float(job["d"]), params,
                                     delta_source=job.get("deltaSource", "analytic"),
                                     dictionary=default_dictionary(v.n),
                                     name=name)], None
    if kind == "ball-iso":
        return [verify_ball_iso(family, _center(job, family.n), float(job["r"]),
                                h=job.get("h"), name=name)], None
    if kind == "size-iso":
        return verify_size_iso(family, float(job["d"]), name=name), None
    if kind == "sobolev-avg":
        v = family.sample(float(job["h"]))
        f = build_function(job["function"], family.n)
        med = MedianParams(lam=float(job["lambda"]), radius_field=float(job["r"]))
        beta_n = job.get("betaN")
        return [verify_sobolev_avg(v, f, med, float(job["d"]),
                                   beta_n=None if beta_n is None else float(beta_n),
                                   name=name)], None
    if kind == "sobolev-rect":
        f = build_function(job["function"], family.n)
        return [verify_sobolev_rect(family, f, float(job["d"]), float(job["h"]),
                                    name=name)], None
    if kind == "poincare":
        f = build_function(job["function"], family.n)
        return [verify_poincare(family, _center(job, family.n), float(job["r"]),
                                f, h=float(job["h"]), name=name)], None
    if kind == "decomposition":
        f = build_function(job["function"], family.n)
        y_points = int(job.get("yPoints", 16))
        y_grid = np.linspace(0.05, 0.95, y_points)
        # Scales capped at 1.0 so every field support (radius <= 2.5) fits in
        # a moderate sampled window; wider fields would register edge flux.
        dictionary = default_dictionary(family.n, scales=(0.5, 1.0))
        return [decomposition_check(family, f, y_grid, dictionary,
                                    h=float(job["h"]), tol=float(job.get("tol", 1e-3)),
                                    name=name)], None
    raise SchemaError(f"experiments.{name}.kind", f"unknown experiment kind {kind!r}")


def run_config(doc: dict, output_dir=None, log=print) -> int:
    seed = int(doc.get("seed", 0))
    out = Path(output_dir or doc.get("outputDir")
               or os.environ.get("VARIKIT_OUTPUT_DIR", "reports"))
    reports, all_series = [], []
    for job in doc["experiments"]:
        job_reports, series = execute_experiment(job, seed=seed)
        reports += job_reports
        if series is not None:
            all_series.append(series)
    out.mkdir(parents=True, exist_ok=True)
    (out / "reports.csv").write_bytes(reports_csv(reports).encode())
    (out / "reports.json").write_bytes(reports_json(
        reports, extra={"seed": seed,
                        "series": {n: {"parameters": s.parameters, "norms": s.norms,
                                       "budgets": s.budgets}
                                   for n, s in all_series}}).encode())
    for series_name, series in all_series:
        fname = "blowup-" + series_name.replace("/", "-") + ".csv"
        (out / fname).write_bytes(series_csv(series).encode())
    for r in reports:
        log(summary_line(r))
    for series_name, series in all_series:
        log(f"PASS {series_name}: series of {len(series.parameters)} steps, "
            f"max budget {max(series.budgets):.6g}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def run_config_file(path, output_dir=None, log=print) -> int:
    try:
        doc = load_config(path)
        return run_config(doc, output_dir=output_dir, log=log)
    except SchemaError as exc:
        log(f"config error: {exc}")
        return EXIT_SCHEMA
    except ResolutionError as exc:
        log(f"resolution failure: {exc} (refine h or the grid and retry)")
        return EXIT_RESOLUTION
    except (ValueError, ArithmeticError) as exc:
        log(f"precondition failure: {exc}")
        return EXIT_PRECONDITION


__all__ = [
    "EXIT_OK", "EXIT_FAIL", "EXIT_SCHEMA", "EXIT_PRECONDITION",
    "EXIT_RESOLUTION", "execute_experiment", "run_config", "run_config_file",
    "median_contrast",
]
