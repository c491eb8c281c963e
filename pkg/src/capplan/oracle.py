"""Brute-force reference solver.

Enumerates every integer assignment of the investment and
decommissioning decisions, evaluates the unit-accounting rules by
direct arithmetic on scenario data (never through the formulation
builders) and solves the remaining flow-dispatch LP for each feasible
assignment.  Slow by design; it exists to anchor the formulation
builders and the bundled integer solver on small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import EnumerationTooLarge
from .formulations.compact import POLICY_OPERATIONAL, collapse_profiles
from .formulations.vintage import vintage_profile_value
from .lp.model import GREATER_EQUAL, LESS_EQUAL, LinearModel
from .lp.solver import SolveOptions, solve
from .scenario import Scenario

MAX_DECISIONS = 12

METHOD_SIMPLE = "simple"
METHOD_VINTAGE = "vintage"
METHOD_COMPACT = "compact"


@dataclass
class OracleResult:
    method: str
    objective: float | None
    assignment: dict[tuple, int] | None
    candidates: int
    decisions: tuple[tuple, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return self.objective is not None


def decision_keys(scenario: Scenario, method: str) -> list[tuple]:
    """Ordered integer decisions of a method on a scenario.

    Keys are ``("inv", asset, vintage)`` and ``("decom", asset, ...)``
    tuples matching the formulation's variable ranges.
    """
    if method not in (METHOD_SIMPLE, METHOD_VINTAGE, METHOD_COMPACT):
        raise ValueError(f"unknown method {method!r}")
    keys: list[tuple] = []
    for asset in scenario.tracked_producers():
        for vintage in asset.investable_years:
            keys.append(("inv", asset.name, vintage))
        if method == METHOD_SIMPLE:
            for year in scenario.years:
                keys.append(("decom", asset.name, year))
        elif method == METHOD_VINTAGE:
            for year, vintage in scenario.domain_triples(asset.name):
                keys.append(("decom", asset.name, year, vintage))
        else:
            for year, vintage in scenario.domain_triples(asset.name):
                if vintage < year:
                    keys.append(("decom", asset.name, year, vintage))
    return keys


def available_units(scenario: Scenario, method: str, assignment: dict[tuple, int]):
    """Direct evaluation of the unit-accounting rules for one assignment.

    Returns a map keyed by (asset, year) for the simple method and by
    (asset, year, vintage) otherwise, or None when any pool goes negative.
    """
    pools: dict[tuple, float] = {}
    for asset in scenario.tracked_producers():
        name = asset.name
        investable = set(asset.investable_years)
        if method == METHOD_SIMPLE:
            for year in scenario.years:
                window = scenario.active_window(name, year)
                value = scenario.initial_units(name, year)
                value += sum(
                    assignment[("inv", name, i)] for i in window if i in investable
                )
                value -= sum(assignment[("decom", name, i)] for i in window)
                if value < -1e-9:
                    return None
                pools[(name, year)] = value
        else:
            triples = scenario.domain_triples(name)
            triple_set = set(triples)
            strict = method == METHOD_COMPACT
            for year, vintage in triples:
                value = scenario.vintage_initial_units(name, year, vintage)
                if vintage in investable:
                    value += assignment[("inv", name, vintage)]
                for i in scenario.years:
                    if (i, vintage) not in triple_set or i > year:
                        continue
                    if strict and i <= vintage:
                        continue
                    if not strict and i < vintage:
                        continue
                    value -= assignment[("decom", name, i, vintage)]
                if value < -1e-9:
                    return None
                pools[(name, year, vintage)] = value
    return pools


def fixed_and_investment_cost(scenario: Scenario, method: str, assignment, pools) -> float:
    total = 0.0
    for asset in scenario.tracked_producers():
        name = asset.name
        unit = asset.unit_capacity
        for vintage in asset.investable_years:
            cost = scenario.asset_year[(name, vintage)].investment_cost
            total += cost * unit * assignment[("inv", name, vintage)]
        if method == METHOD_SIMPLE:
            for year in scenario.years:
                params = scenario.asset_year.get((name, year))
                if params is not None:
                    total += params.fixed_cost * unit * pools[(name, year)]
        else:
            for year, vintage in scenario.domain_triples(name):
                fixed = scenario.vintage_fixed_cost(name, year, vintage)
                total += fixed * unit * pools[(name, year, vintage)]
    return total


def _capacity_rhs(scenario: Scenario, method: str, pools, collapsed):
    """Constant capacity limits per producer constraint row."""
    rhs: dict[tuple, float] = {}
    for asset in scenario.tracked_producers():
        name = asset.name
        for year in scenario.years:
            if not scenario.is_producer_in(name, year):
                continue
            if not scenario.out_edges(name, year):
                continue
            capacity = scenario.capacity_in_year(name, year)
            if method == METHOD_VINTAGE:
                for y, vintage in scenario.domain_triples(name):
                    if y != year:
                        continue
                    for rp, block, _w, _d in scenario.time_steps(year):
                        profile = vintage_profile_value(scenario, name, vintage, year, rp, block)
                        rhs[(name, year, vintage, rp, block)] = (
                            profile * capacity * pools[(name, year, vintage)]
                        )
            else:
                for rp, block, _w, _d in scenario.time_steps(year):
                    if method == METHOD_SIMPLE:
                        profile = scenario.profile[(name, year, rp, block)]
                        units = pools[(name, year)]
                    else:
                        profile = collapsed[(name, year, rp, block)]
                        units = sum(
                            pools[(name, y, v)]
                            for (y, v) in scenario.domain_triples(name)
                            if y == year
                        )
                    rhs[(name, year, rp, block)] = profile * capacity * units
    return rhs


def _dispatch_lp(scenario: Scenario, method: str, rhs) -> float | None:
    """Minimum variable cost of meeting demand under fixed capacity limits."""
    model = LinearModel("dispatch")
    flows: dict[tuple, object] = {}
    for year in scenario.years:
        for edge in scenario.flows.values():
            if (edge.id, year) not in scenario.flow_cost:
                continue
            cost = scenario.flow_cost[(edge.id, year)]
            for rp, block, weight, duration in scenario.time_steps(year):
                if method == METHOD_VINTAGE:
                    for y, vintage in scenario.domain_triples(edge.from_asset):
                        if y != year:
                            continue
                        var = model.add_variable("flow", (edge.id, year, vintage, rp, block))
                        flows[(edge.id, year, vintage, rp, block)] = var
                        model.add_objective(var, weight * cost * duration)
                else:
                    var = model.add_variable("flow", (edge.id, year, rp, block))
                    flows[(edge.id, year, rp, block)] = var
                    model.add_objective(var, weight * cost * duration)

    for key, limit in rhs.items():
        if method == METHOD_VINTAGE:
            name, year, vintage, rp, block = key
            coeffs = [
                (flows[(e.id, year, vintage, rp, block)], 1.0)
                for e in scenario.out_edges(name, year)
            ]
        else:
            name, year, rp, block = key
            coeffs = [
                (flows[(e.id, year, rp, block)], 1.0) for e in scenario.out_edges(name, year)
            ]
        if coeffs:
            model.add_constraint(f"cap_{len(model.constraints)}", coeffs, LESS_EQUAL, limit)

    for (consumer, year, rp, block), value in scenario.demand.items():
        if value == 0.0:
            continue
        coeffs = []
        for edge in scenario.in_edges(consumer, year):
            if method == METHOD_VINTAGE:
                for y, vintage in scenario.domain_triples(edge.from_asset):
                    if y == year:
                        coeffs.append((flows[(edge.id, year, vintage, rp, block)], 1.0))
            else:
                coeffs.append((flows[(edge.id, year, rp, block)], 1.0))
        if not coeffs:
            return None
        model.add_constraint(f"dem_{len(model.constraints)}", coeffs, GREATER_EQUAL, value)

    solution = solve(model, SolveOptions())
    if not solution.is_optimal:
        return None
    return solution.objective


def evaluate_assignment(
    scenario: Scenario,
    method: str,
    assignment: dict[tuple, int],
    policy: str = POLICY_OPERATIONAL,
    collapsed=None,
) -> float | None:
    """Total cost of one integer assignment, or None when infeasible."""
    pools = available_units(scenario, method, assignment)
    if pools is None:
        return None
    if collapsed is None and method == METHOD_COMPACT:
        collapsed = collapse_profiles(scenario, policy)
    rhs = _capacity_rhs(scenario, method, pools, collapsed)
    dispatch = _dispatch_lp(scenario, method, rhs)
    if dispatch is None:
        return None
    return fixed_and_investment_cost(scenario, method, assignment, pools) + dispatch


def oracle_solve(
    scenario: Scenario,
    method: str,
    max_units_per_decision: int = 2,
    policy: str = POLICY_OPERATIONAL,
) -> OracleResult:
    """Exhaustively enumerate integer assignments and return the best.

    The dispatch LP is memoised on its capacity limits, which collapses
    the many assignments that produce identical available capacity.
    """
    keys = decision_keys(scenario, method)
    if len(keys) > MAX_DECISIONS:
        raise EnumerationTooLarge(
            f"{len(keys)} integer decisions exceed the enumeration cap of {MAX_DECISIONS}"
        )
    collapsed = collapse_profiles(scenario, policy) if method == METHOD_COMPACT else None

    best_objective: float | None = None
    best_assignment: dict[tuple, int] | None = None
    candidates = 0
    dispatch_cache: dict[tuple, float | None] = {}

    for combo in itertools.product(range(max_units_per_decision + 1), repeat=len(keys)):
        candidates += 1
        assignment = dict(zip(keys, combo))
        pools = available_units(scenario, method, assignment)
        if pools is None:
            continue
        rhs = _capacity_rhs(scenario, method, pools, collapsed)
        cache_key = tuple(sorted(rhs.items()))
        if cache_key in dispatch_cache:
            dispatch = dispatch_cache[cache_key]
        else:
            dispatch = _dispatch_lp(scenario, method, rhs)
            dispatch_cache[cache_key] = dispatch
        if dispatch is None:
            continue
        total = fixed_and_investment_cost(scenario, method, assignment, pools) + dispatch
        if best_objective is None or total < best_objective:
            best_objective = total
            best_assignment = assignment

    return OracleResult(
        method=method,
        objective=best_objective,
        assignment=best_assignment,
        candidates=candidates,
        decisions=tuple(keys),
    )
