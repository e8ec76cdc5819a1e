"""Command-line interface: run / verify / blowup / gamma-bound / lemmas / convert."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import SchemaError, load_config, validate_config
from .families import ResolutionError
from .reporting import series_csv, summary_line
from .runner import (EXIT_FAIL, EXIT_OK, EXIT_PRECONDITION, EXIT_RESOLUTION,
                     EXIT_SCHEMA, execute_experiment, run_config,
                     run_config_file)

_BLOWUP_KINDS = {
    "lebesgue-scaling": "lebesgueScaling",
    "plane-bundle": "planeBundle",
    "sobolev-vs-iso": "sobolevVsIso",
}

_THEOREM_DEFAULTS = {
    "isoperimetric": {"d": 1.0, "h": 0.02, "sMin": 0.1},
    "ball-iso": {"r": 1.0},
    "size-iso": {"d": 1.0},
    "sobolev-avg": {"d": 0.1, "lambda": 0.5, "r": 0.5, "h": 0.05},
    "sobolev-rect": {"d": 1.0, "h": 0.05},
    "poincare": {"r": 1.0, "h": 0.03},
}


def _guarded(fn, *args, **kwargs) -> int:
    try:
        return fn(*args, **kwargs)
    except SchemaError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ResolutionError as exc:
        print(f"resolution failure: {exc} (refine h or the grid and retry)",
              file=sys.stderr)
        return EXIT_RESOLUTION
    except (ValueError, ArithmeticError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def _family_spec(args) -> dict:
    tag = args.family
    spec = {"tag": tag}
    if tag in ("circle", "sphere"):
        spec["radius"] = args.radius if args.radius is not None else 1.0
        if args.multiplicity is not None:
            spec["multiplicity"] = args.multiplicity
        if args.n is not None:
            spec["n"] = args.n
    elif tag == "disc":
        m = args.m if args.m is not None else 2
        spec.update({"m": m, "n": args.n if args.n is not None else m + 1,
                     "radius": args.radius if args.radius is not None else 1.0})
        if args.multiplicity is not None:
            spec["multiplicity"] = args.multiplicity
    elif tag == "bundle":
        spec["k"] = args.k if args.k is not None else 4
        spec["weight"] = args.weight if args.weight is not None else 0.3
        if args.n is not None:
            spec["n"] = args.n
    elif tag == "slab":
        n = args.n if args.n is not None else 2
        spec.update({"axes": list(range(1)), "n": n,
                     "lo": [-1.0] * n, "hi": [1.0] * n,
                     "unbounded": bool(args.unbounded)})
    return spec


def _function_spec(args) -> dict:
    tag = args.function
    if tag == "radialBump":
        return {"tag": tag, "radius": args.f_radius}
    if tag == "radialCap":
        return {"tag": tag, "inner": args.f_radius * 0.5, "outer": args.f_radius}
    if tag == "coordinateProfile":
        return {"tag": tag, "axis": 1, "scale": args.f_radius}
    return {"tag": "zero"}


def _cmd_verify(args) -> int:
    job = {"name": f"cli/{args.theorem}", "kind": args.theorem}
    if args.config:
        doc = load_config(args.config)
        if doc["experiments"]:
            job = dict(doc["experiments"][0])
    job.setdefault("kind", args.theorem)
    for key, value in _THEOREM_DEFAULTS.get(args.theorem, {}).items():
        job.setdefault(key, value)
    if args.family is not None or "family" not in job:
        if args.family is None:
            args.family = "circle"
        job["family"] = _family_spec(args)
    if args.theorem in ("sobolev-avg", "sobolev-rect", "poincare", "decomposition"):
        job.setdefault("function", _function_spec(args))
    for flag, key in (("d", "d"), ("h", "h"), ("s_min", "sMin"), ("lam", "lambda"),
                      ("r", "r"), ("beta_n", "betaN")):
        value = getattr(args, flag)
        if value is not None:
            job[key] = value
    validate_config({"experiments": [job]})
    reports, _ = execute_experiment(job, seed=args.seed)
    for report in reports:
        print(summary_line(report))
        if "impliedGammaLowerBound" in report.params:
            print(f"impliedGammaLowerBound = {report.params['impliedGammaLowerBound']!r}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_blowup(args) -> int:
    from .blowup import blowup_series

    p = math.inf if args.p in ("inf", "Infinity") else float(args.p)
    series = blowup_series(_BLOWUP_KINDS[args.kind], p, args.steps, n=args.n or 2,
                           expect_divergence=False if args.control else None)
    text = series_csv(series)
    if args.out:
        Path(args.out).write_bytes(text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_gamma_bound(args) -> int:
    from .suite import gamma_suite
    from .verify import gamma_lower_bound

    reports = gamma_suite()
    bounds = gamma_lower_bound(reports)
    for m in sorted(bounds):
        print(f"m={m}: empirical lower bound {bounds[m]!r}")
    return EXIT_OK


def _cmd_lemmas(args) -> int:
    from .randomsuite import run_lemma_suites

    results = run_lemma_suites(args.instances, args.seed)
    ok = True
    for res in results:
        flag = "PASS" if res.passed else "FAIL"
        print(f"{flag} {res.name}: {res.checked} instances, "
              f"{res.violations} violations")
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_convert(args) -> int:
    from .varifold import load_csv, save_csv

    save_csv(load_csv(args.input), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varikit",
        description="Numerical verification toolkit for varifold inequalities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config file of experiments")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", default=None)

    p_ver = sub.add_parser("verify", help="run one theorem verification")
    p_ver.add_argument("--theorem", required=True,
                       choices=["isoperimetric", "ball-iso", "size-iso",
                                "sobolev-avg", "sobolev-rect", "poincare",
                                "decomposition"])
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--family",
                       choices=["circle", "sphere", "disc", "bundle", "slab"])
    p_ver.add_argument("--m", type=int)
    p_ver.add_argument("--n", type=int)
    p_ver.add_argument("--k", type=int)
    p_ver.add_argument("--radius", type=float)
    p_ver.add_argument("--multiplicity", type=float)
    p_ver.add_argument("--weight", type=float)
    p_ver.add_argument("--unbounded", action="store_true")
    p_ver.add_argument("--function", default="radialBump",
                       choices=["radialBump", "radialCap", "coordinateProfile", "zero"])
    p_ver.add_argument("--f-radius", type=float, default=0.5)
    p_ver.add_argument("--d", type=float)
    p_ver.add_argument("--h", type=float)
    p_ver.add_argument("--s-min", type=float)
    p_ver.add_argument("--lam", type=float)
    p_ver.add_argument("--r", type=float)
    p_ver.add_argument("--beta-n", type=float)
    p_ver.add_argument("--seed", type=int, default=0)

    p_blow = sub.add_parser("blowup", help="run a blow-up series")
    p_blow.add_argument("--kind", required=True, choices=sorted(_BLOWUP_KINDS))
    p_blow.add_argument("--p", required=True)
    p_blow.add_argument("--steps", type=int, default=4)
    p_blow.add_argument("--n", type=int)
    p_blow.add_argument("--control", action="store_true",
                        help="bounded control series (no divergence assertion)")
    p_blow.add_argument("--out", default=None)

    p_gamma = sub.add_parser("gamma-bound",
                             help="aggregate empirical isoperimetric-constant bounds")
    p_gamma.set_defaults()

    p_lem = sub.add_parser("lemmas", help="run the randomized lemma suites")
    p_lem.add_argument("--instances", type=int, default=1000)
    p_lem.add_argument("--seed", type=int, default=0)

    p_conv = sub.add_parser("convert", help="round-trip a varifold CSV file")
    p_conv.add_argument("input")
    p_conv.add_argument("output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_config_file(args.config, output_dir=args.output_dir)
    handler = {
        "verify": _cmd_verify,
        "blowup": _cmd_blowup,
        "gamma-bound": _cmd_gamma_bound,
        "lemmas": _cmd_lemmas,
        "convert": _cmd_convert,
    }[args.command]
    return _guarded(handler, args)


if __name__ == "__main__":
    sys.exit(main())
