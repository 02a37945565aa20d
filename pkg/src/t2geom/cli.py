"""Command line front end: run scenarios, list them, check serialized objects.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
parse error.  T2GEOM_TOL sets the default tolerance for run and check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import expr as ex
from .connections import validate_connection
from .errors import T2GeomError
from .finsler import FinslerianForm, validate_finslerian
from .linear import LinearConnection
from .report import VerificationReport
from .sampling import SampleSpec, sample_points
from .scenarios import (BUILTIN_SCENARIOS, connection_from_dict,
                        list_scenarios, load_definition, run_scenario)


def _default_tol(fallback: float = 1e-8) -> float:
    raw = os.environ.get("T2GEOM_TOL")
    if raw is None:
        return fallback
    try:
        tol = float(raw)
    except ValueError:
        raise SystemExit(f"t2geom: T2GEOM_TOL is not a number: {raw!r}")
    if tol <= 0:
        raise SystemExit("t2geom: T2GEOM_TOL must be positive")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="t2geom",
                                     description="verification scenarios for "
                                                 "second-order tangent bundle calculus")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and print its report")
    run.add_argument("--scenario", required=True,
                     help="built-in scenario name or path to a JSON definition")
    run.add_argument("--points", type=int, default=None, metavar="K",
                     help="override the number of sample points")
    run.add_argument("--seed", type=int, default=None, metavar="S",
                     help="override the sampling seed")
    run.add_argument("--tol", type=float, default=None, metavar="T",
                     help="override the tolerance for all checks")
    run.add_argument("--format", choices=("json", "text"), default="json")
    run.add_argument("--suite", action="append", default=None,
                     choices=("eq1-8", "sec2", "sec3", "sec4", "all"),
                     help="restrict to specific suites (repeatable)")

    sub.add_parser("list", help="list built-in scenarios")

    check = sub.add_parser("check", help="validate a serialized object")
    check.add_argument("--input", required=True, help="path to a JSON object file")
    check.add_argument("--kind", required=True,
                       choices=("connection", "linear", "finsler"))
    check.add_argument("--points", type=int, default=25, metavar="K")
    check.add_argument("--seed", type=int, default=0, metavar="S")
    check.add_argument("--tol", type=float, default=None, metavar="T")
    check.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _emit(report: VerificationReport, fmt: str) -> int:
    if fmt == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def _cmd_run(args) -> int:
    if args.scenario in BUILTIN_SCENARIOS:
        scenario = BUILTIN_SCENARIOS[args.scenario]
    elif os.path.exists(args.scenario):
        scenario = load_definition(args.scenario)
    else:
        print(f"t2geom: unknown scenario {args.scenario!r}; "
              f"built-ins: {', '.join(list_scenarios())}", file=sys.stderr)
        return 2
    suites = None
    if args.suite is not None:
        suites = scenario.suites if "all" in args.suite else tuple(args.suite)
    tol = args.tol if args.tol is not None else (
        float(os.environ["T2GEOM_TOL"]) if "T2GEOM_TOL" in os.environ else None)
    report = run_scenario(scenario, suites=suites, count=args.points,
                          seed=args.seed, tol=tol)
    return _emit(report, args.format)


def _cmd_list() -> int:
    for name in list_scenarios():
        s = BUILTIN_SCENARIOS[name]
        print(f"{name}\tn={s.n}\tsuites={','.join(s.suites)}")
    return 0


def _cmd_check(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol(1e-9)
    try:
        with open(args.input) as f:
            data = json.load(f)
    except OSError as e:
        print(f"t2geom: cannot read {args.input}: {e}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print(f"t2geom: invalid JSON in {args.input}: {e}", file=sys.stderr)
        return 2
    if args.kind == "connection":
        conn = connection_from_dict(data)
        points = sample_points(conn.n, SampleSpec(count=args.points, seed=args.seed))
        report = validate_connection(conn.form, conn.conn_type, points, tol)
    elif args.kind == "linear":
        D = LinearConnection.from_dict(data)
        points = sample_points(D.n, SampleSpec(count=args.points, seed=args.seed))
        # any coefficient array is a linear connection, so the checkable
        # content is: the coefficients evaluate and are finite on samples
        report = VerificationReport(scenario="check-linear", config={
            "n": D.n, "count": args.points, "seed": args.seed, "tol": tol})
        finite = all(np.isfinite(ex.evaluate(c, p))
                     for p in points for plane in D.coef
                     for row in plane for c in row)
        report.add("linear.evaluates", "section 3, linear connections",
                   0.0 if finite else float("inf"), tol, len(points))
    else:
        F = FinslerianForm.from_dict(data)
        points = sample_points(F.omega.n, SampleSpec(count=args.points, seed=args.seed))
        report = validate_finslerian(F, points, tol)
    return _emit(report, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors already
        return int(e.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list":
            return _cmd_list()
        return _cmd_check(args)
    except T2GeomError as e:
        print(f"t2geom: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
