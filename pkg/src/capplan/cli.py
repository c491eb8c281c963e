"""Command-line interface.

Subcommands: ``solve`` (build + solve one formulation), ``size`` (model
dimensions without solving), ``compare`` (solve several formulations and
tabulate gaps) and ``emit`` (write the LP file only).  Every run prints a
machine-greppable ``STATUS: ...`` line first; exit codes are 0 on
success, 2 on an infeasible solve and 1 on any error.

The environment variable ``PLAN_SEED`` is reserved for future use and is
ignored: the whole pipeline is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import compare_methods, size_report
from .errors import PlanError
from .formulations import METHODS, POLICY_OPERATIONAL, normalize_policy
from .formulations.compact import build_compact
from .formulations.simple import build_simple
from .formulations.vintage import build_vintage
from .loader import load_scenario
from .lp.lpfile import emit_lp
from .lp.model import STATUS_INFEASIBLE, STATUS_OPTIMAL
from .lp.solver import MODE_CONTINUOUS, MODE_INTEGER, SolveOptions, solve

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan",
        description="Build, solve and compare multi-year capacity-expansion formulations.",
        epilog="PLAN_SEED is reserved and currently a no-op; runs are deterministic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, methods, method_default=None):
        p.add_argument("--scenario", required=True, help="scenario directory (CSV files)")
        p.add_argument("--method", choices=methods, default=method_default,
                       required=method_default is None)
        p.add_argument("--policy", default=None,
                       help="profile collapse policy (compact only): "
                            "operational-year-profile|min|mean|max|capacity-weighted")

    p_solve = sub.add_parser("solve", help="build and solve one formulation")
    add_common(p_solve, list(METHODS))
    p_solve.add_argument("--mode", choices=[MODE_CONTINUOUS, MODE_INTEGER],
                         default=MODE_CONTINUOUS)
    p_solve.add_argument("--out", default="./out", help="output directory")
    p_solve.add_argument("--emit-lp", default=None, metavar="PATH",
                         help="also write the model as an LP file")

    p_size = sub.add_parser("size", help="report model dimensions, no solve")
    add_common(p_size, list(METHODS) + ["all"], method_default="all")
    p_size.add_argument("--format", choices=["json", "text"], default="text")

    p_compare = sub.add_parser("compare", help="solve several formulations and report gaps")
    p_compare.add_argument("--scenario", required=True)
    p_compare.add_argument("--methods", default=",".join(METHODS),
                           help="comma-separated list, default all three")
    p_compare.add_argument("--policy", default=None)
    p_compare.add_argument("--mode", choices=[MODE_CONTINUOUS, MODE_INTEGER],
                           default=MODE_CONTINUOUS)
    p_compare.add_argument("--out", default="./out")
    p_compare.add_argument("--format", choices=["json", "text"], default="text")

    p_emit = sub.add_parser("emit", help="write the LP file without solving")
    add_common(p_emit, list(METHODS))
    p_emit.add_argument("--out", default=None, metavar="PATH",
                        help="LP file path (default ./out/<method>.lp)")
    return parser


def _status(line: str):
    print(f"STATUS: {line}")


def _fail(message: str) -> int:
    _status("error")
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _resolve_policy(args, methods) -> str | None:
    """Reject --policy unless a compact build is part of the run."""
    if args.policy is None:
        return POLICY_OPERATIONAL
    if "compact" not in methods:
        raise PlanError("--policy is only meaningful with the compact method")
    return normalize_policy(args.policy)


def _build(scenario, method: str, policy: str):
    if method == "simple":
        return build_simple(scenario)
    if method == "vintage":
        return build_vintage(scenario)
    return build_compact(scenario, policy)


def _variables_by_group(model, values) -> dict:
    groups: dict[str, dict[str, float]] = {}
    for var in model.variables:
        key = ",".join(str(part) for part in var.index)
        groups.setdefault(var.group, {})[key] = values.get(var, 0.0)
    return groups


def cmd_solve(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        policy = _resolve_policy(args, {args.method})
        built = _build(scenario, args.method, policy)
        if args.emit_lp:
            path = Path(args.emit_lp)
            if path.parent != Path("."):
                path.parent.mkdir(parents=True, exist_ok=True)
            emit_lp(built.model, path)
        solution = solve(built.model, SolveOptions(mode=args.mode))
    except (PlanError, OSError) as exc:
        return _fail(str(exc))

    payload = {
        "schema": SCHEMA_VERSION,
        "scenario": scenario.name,
        "method": args.method,
        "mode": args.mode,
        "policy": policy if args.method == "compact" else None,
        "status": solution.status,
        "objective": solution.objective,
        "breakdown": solution.breakdown,
        "variables": _variables_by_group(built.model, solution.values),
    }
    try:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "solution.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        return _fail(str(exc))

    if solution.status == STATUS_OPTIMAL:
        _status("optimal")
        print(f"scenario {scenario.name}, method {args.method}, mode {args.mode}")
        print(f"objective: {solution.objective:.6f}")
        for group, value in solution.breakdown.items():
            print(f"  {group:<12}{value:.6f}")
        print(f"solution written to {out_dir / 'solution.json'}")
        return EXIT_OK
    if solution.status == STATUS_INFEASIBLE:
        _status("infeasible")
        print(f"scenario {scenario.name} is infeasible under the {args.method} method")
        return EXIT_INFEASIBLE
    return _fail(f"solver stopped with status {solution.status}")


def cmd_size(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        methods = list(METHODS) if args.method == "all" else [args.method]
        policy = _resolve_policy(args, set(methods))
        reports = {method: size_report(scenario, method, policy) for method in methods}
    except (PlanError, OSError) as exc:
        return _fail(str(exc))

    _status("ok")
    if args.format == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "scenario": scenario.name,
            "reports": {method: report.to_dict() for method, report in reports.items()},
        }
        print(json.dumps(payload, indent=2))
    else:
        for report in reports.values():
            print(report.to_text())
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        for method in methods:
            if method not in METHODS:
                raise PlanError(f"unknown method {method!r}")
        scenario = load_scenario(args.scenario)
        policy = _resolve_policy(args, set(methods))
        report = compare_methods(scenario, methods, policy=policy, mode=args.mode)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {"schema": SCHEMA_VERSION, **report.to_dict()}
        (out_dir / "comparison.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    except (PlanError, OSError) as exc:
        return _fail(str(exc))

    _status("ok")
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(report.to_text())
    print(f"comparison written to {out_dir / 'comparison.json'}")
    return EXIT_OK


def cmd_emit(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        policy = _resolve_policy(args, {args.method})
        built = _build(scenario, args.method, policy)
        path = Path(args.out) if args.out else Path("./out") / f"{args.method}.lp"
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        emit_lp(built.model, path)
    except (PlanError, OSError) as exc:
        return _fail(str(exc))
    _status("ok")
    print(f"LP file written to {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; fold into the error code
        return EXIT_ERROR if exc.code else EXIT_OK
    handlers = {
        "solve": cmd_solve,
        "size": cmd_size,
        "compare": cmd_compare,
        "emit": cmd_emit,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
