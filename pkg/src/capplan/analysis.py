"""Model-size reporting and cross-method comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptySelection, PlanError
from .formulations import (
    POLICY_OPERATIONAL,
    build_compact,
    build_simple,
    build_vintage,
)
from .lp.solver import MODE_CONTINUOUS, SolveOptions, solve
from .scenario import Scenario

EQUIVALENCE_REL_TOL = 1e-7

DECOM_CONVENTIONS = {
    "simple": "one decision per milestone year",
    "vintage": "one decision per active (year, vintage) pair, commissioning year included",
    "compact": "one decision per active (year, vintage) pair, strictly after commissioning",
}


def _build(scenario: Scenario, method: str, policy: str = POLICY_OPERATIONAL):
    if method == "simple":
        return build_simple(scenario)
    if method == "vintage":
        return build_vintage(scenario)
    if method == "compact":
        return build_compact(scenario, policy)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class SizeReport:
    """Model-size counts for one formulation on one scenario.

    Group counts ignore time indices (one entry per year or per
    year-vintage pair); scalar counts are the true model dimensions
    after time expansion.
    """

    scenario: str
    method: str
    variable_groups: dict[str, int]
    scalar_variables: dict[str, int]
    constraint_groups: dict[str, int]
    scalar_constraints: dict[str, int]
    decom_convention: str

    @property
    def total_variable_groups(self) -> int:
        return sum(self.variable_groups.values())

    @property
    def total_scalar_variables(self) -> int:
        return sum(self.scalar_variables.values())

    @property
    def total_constraint_groups(self) -> int:
        return sum(self.constraint_groups.values())

    @property
    def total_scalar_constraints(self) -> int:
        return sum(self.scalar_constraints.values())

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "method": self.method,
            "variable_groups": dict(self.variable_groups),
            "scalar_variables": dict(self.scalar_variables),
            "constraint_groups": dict(self.constraint_groups),
            "scalar_constraints": dict(self.scalar_constraints),
            "totals": {
                "variable_groups": self.total_variable_groups,
                "scalar_variables": self.total_scalar_variables,
                "constraint_groups": self.total_constraint_groups,
                "scalar_constraints": self.total_scalar_constraints,
            },
            "decom_convention": self.decom_convention,
        }

    def to_text(self) -> str:
        lines = [f"size report: scenario={self.scenario} method={self.method}"]
        lines.append(f"  decommissioning convention: {self.decom_convention}")
        lines.append(f"  {'kind':<12}{'name':<17}{'groups':>8}{'scalars':>9}")
        for name in self.variable_groups:
            lines.append(
                f"  {'variable':<12}{name:<17}{self.variable_groups[name]:>8}"
                f"{self.scalar_variables[name]:>9}"
            )
        for name in self.constraint_groups:
            lines.append(
                f"  {'constraint':<12}{name:<17}{self.constraint_groups[name]:>8}"
                f"{self.scalar_constraints[name]:>9}"
            )
        lines.append(
            f"  {'total':<12}{'':<17}"
            f"{self.total_variable_groups + self.total_constraint_groups:>8}"
            f"{self.total_scalar_variables + self.total_scalar_constraints:>9}"
        )
        return "\n".join(lines)


def size_report(scenario: Scenario, method: str, policy: str = POLICY_OPERATIONAL) -> SizeReport:
    """Count variable and constraint groups of a built model, without solving."""
    built = _build(scenario, method, policy)

    if method == "simple":
        flow_groups = {(f, y) for (f, y, _rp, _b) in built.flow}
        capacity_groups = {(a, y) for (a, y, _rp, _b) in built.capacity_rows}
    elif method == "vintage":
        flow_groups = {(f, y, v) for (f, y, v, _rp, _b) in built.flow}
        capacity_groups = {(a, y, v) for (a, y, v, _rp, _b) in built.capacity_rows}
    else:
        flow_groups = {(f, y) for (f, y, _rp, _b) in built.flow}
        capacity_groups = {(a, y) for (a, y, _rp, _b) in built.capacity_rows}
    demand_groups = {(c, y) for (c, y, _rp, _b) in built.demand_rows}

    variable_groups = {
        "inv": len(built.inv),
        "decom": len(built.decom),
        "available": len(built.available),
        "production": len(flow_groups),
    }
    scalar_variables = {
        "inv": len(built.inv),
        "decom": len(built.decom),
        "available": len(built.available),
        "production": len(built.flow),
    }
    constraint_groups = {
        "available_units": len(built.available_rows),
        "capacity": len(capacity_groups),
        "demand": len(demand_groups),
    }
    scalar_constraints = {
        "available_units": len(built.available_rows),
        "capacity": len(built.capacity_rows),
        "demand": len(built.demand_rows),
    }
    return SizeReport(
        scenario=scenario.name,
        method=method,
        variable_groups=variable_groups,
        scalar_variables=scalar_variables,
        constraint_groups=constraint_groups,
        scalar_constraints=scalar_constraints,
        decom_convention=DECOM_CONVENTIONS[method],
    )


@dataclass
class MethodResult:
    method: str
    status: str
    objective: float | None = None
    breakdown: dict[str, float] = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"method": self.method, "status": self.status}
        if self.objective is not None:
            out["objective"] = self.objective
            out["breakdown"] = dict(self.breakdown)
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class ComparisonReport:
    scenario: str
    mode: str
    policy: str
    methods: dict[str, MethodResult]
    gaps: dict[str, dict]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "mode": self.mode,
            "policy": self.policy,
            "methods": {name: result.to_dict() for name, result in self.methods.items()},
            "gaps": {name: dict(gap) for name, gap in self.gaps.items()},
        }

    def to_text(self) -> str:
        lines = [
            f"comparison: scenario={self.scenario} mode={self.mode} policy={self.policy}",
            f"  {'method':<10}{'status':<12}{'objective':>16}",
        ]
        for name, result in self.methods.items():
            objective = "-" if result.objective is None else f"{result.objective:.6f}"
            lines.append(f"  {name:<10}{result.status:<12}{objective:>16}")
        if self.gaps:
            lines.append(f"  {'pair':<22}{'absolute':>14}{'relative':>12}  equivalent")
        for pair, gap in self.gaps.items():
            lines.append(
                f"  {pair:<22}{gap['absolute']:>14.6g}{gap['relative']:>12.3e}"
                f"  {'yes' if gap['equivalent'] else 'no'}"
            )
        return "\n".join(lines)


def compare_methods(
    scenario: Scenario,
    methods: list[str],
    policy: str = POLICY_OPERATIONAL,
    mode: str = MODE_CONTINUOUS,
    options: SolveOptions | None = None,
) -> ComparisonReport:
    """Build, solve and tabulate several formulations on one scenario.

    A method that fails to build or solve is reported as an error entry;
    the others still run.
    """
    if not methods:
        raise EmptySelection("no methods selected for comparison")
    options = options or SolveOptions()
    if options.mode != mode:
        options = SolveOptions(
            mode=mode,
            feas_tol=options.feas_tol,
            opt_tol=options.opt_tol,
            max_iterations=options.max_iterations,
            bland_threshold=options.bland_threshold,
            max_nodes=options.max_nodes,
        )

    results: dict[str, MethodResult] = {}
    for method in methods:
        if method in results:
            continue
        try:
            built = _build(scenario, method, policy)
            solution = solve(built.model, options)
            results[method] = MethodResult(
                method=method,
                status=solution.status,
                objective=solution.objective,
                breakdown=solution.breakdown,
            )
        except PlanError as exc:
            results[method] = MethodResult(method=method, status="error", error=str(exc))

    gaps: dict[str, dict] = {}
    names = list(results)
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            a, b = results[first], results[second]
            if a.objective is None or b.objective is None:
                continue
            absolute = b.objective - a.objective
            scale = max(abs(a.objective), abs(b.objective), 1e-12)
            relative = abs(absolute) / scale
            gaps[f"{first}_vs_{second}"] = {
                "absolute": absolute,
                "relative": relative,
                "equivalent": relative <= EQUIVALENCE_REL_TOL,
            }
    return ComparisonReport(
        scenario=scenario.name,
        mode=mode,
        policy=policy,
        methods=results,
        gaps=gaps,
    )
