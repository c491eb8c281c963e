"""Compact investment method.

Accounting stays vintage-indexed (available units per operational year
and vintage) but production variables drop the vintage index: each
capacity constraint sums the contributions of all live vintages under a
single per-year availability profile.  When vintage-specific profiles
exist they are collapsed to that single profile by a configurable
policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnknownPolicy
from ..lp.model import EQUAL, LESS_EQUAL, LinearModel, VarRef
from ..lp.solver import SolveOptions, solve
from ..scenario import Scenario
from .common import FIXED, INVESTMENT, add_demand_constraints, add_flow_variables, year_profile
from .vintage import build_vintage, vintage_profile_value

POLICY_OPERATIONAL = "operational-year-profile"
POLICY_MIN = "min-over-active-vintages"
POLICY_MEAN = "mean-over-active-vintages"
POLICY_MAX = "max-over-active-vintages"
POLICY_WEIGHTED = "capacity-weighted"

POLICIES = (POLICY_OPERATIONAL, POLICY_MIN, POLICY_MEAN, POLICY_MAX, POLICY_WEIGHTED)

_ALIASES = {
    "operational": POLICY_OPERATIONAL,
    "min": POLICY_MIN,
    "mean": POLICY_MEAN,
    "max": POLICY_MAX,
    "weighted": POLICY_WEIGHTED,
}


def normalize_policy(name: str) -> str:
    policy = _ALIASES.get(name, name)
    if policy not in POLICIES:
        raise UnknownPolicy(f"unknown collapse policy {name!r}; choose from {POLICIES}")
    return policy


@dataclass
class CompactBuildOutput:
    model: LinearModel
    collapse_policy: str
    inv: dict[tuple[str, int], VarRef] = field(default_factory=dict)
    decom: dict[tuple[str, int, int], VarRef] = field(default_factory=dict)
    available: dict[tuple[str, int, int], VarRef] = field(default_factory=dict)
    flow: dict[tuple[str, int, int, int], VarRef] = field(default_factory=dict)
    collapsed_profile: dict[tuple[str, int, int, int], float] = field(default_factory=dict)
    available_rows: list[tuple[str, int, int]] = field(default_factory=list)
    capacity_rows: list[tuple[str, int, int, int]] = field(default_factory=list)
    demand_rows: list[tuple[str, int, int, int]] = field(default_factory=list)


def collapse_profiles(scenario: Scenario, policy: str) -> dict[tuple[str, int, int, int], float]:
    """Single per-year availability profile per producer, according to policy.

    Only assets with at least one vintage-specific profile are affected;
    everything else keeps its vintage-less profile.
    """
    policy = normalize_policy(policy)
    reference = _reference_available(scenario) if policy == POLICY_WEIGHTED else {}

    collapsed: dict[tuple[str, int, int, int], float] = {}
    assets_with_vintage_profiles = {key[0] for key in scenario.vintage_profile}
    for asset in scenario.producers():
        triples = scenario.domain_triples(asset.name)
        for year in scenario.years:
            if not scenario.is_producer_in(asset.name, year):
                continue
            active = [v for (y, v) in triples if y == year]
            use_vintages = asset.name in assets_with_vintage_profiles and active
            for rp, block, _w, _d in scenario.time_steps(year):
                base = year_profile(scenario, asset.name, year, rp, block)
                if policy == POLICY_OPERATIONAL or not use_vintages:
                    collapsed[(asset.name, year, rp, block)] = base
                    continue
                values = [
                    vintage_profile_value(scenario, asset.name, v, year, rp, block)
                    for v in active
                ]
                if policy == POLICY_MIN:
                    value = min(values)
                elif policy == POLICY_MAX:
                    value = max(values)
                elif policy == POLICY_MEAN:
                    value = sum(values) / len(values)
                else:  # capacity-weighted
                    weights = [reference.get((asset.name, year, v), 0.0) for v in active]
                    total = sum(weights)
                    if total > 1e-12:
                        value = sum(w * p for w, p in zip(weights, values)) / total
                    else:
                        value = sum(values) / len(values)
                collapsed[(asset.name, year, rp, block)] = value
    return collapsed


def _reference_available(scenario: Scenario) -> dict[tuple[str, int, int], float]:
    """Per-vintage available units of a continuous vintage-method solve,
    used as weights by the capacity-weighted policy."""
    built = build_vintage(scenario)
    solution = solve(built.model, SolveOptions(mode="continuous"))
    if not solution.is_optimal:
        return {}
    return {key: solution.values[var] for key, var in built.available.items()}


def build_compact(scenario: Scenario, collapse_policy: str = POLICY_OPERATIONAL) -> CompactBuildOutput:
    """Compile a scenario into the compact-method linear model."""
    policy = normalize_policy(collapse_policy)
    model = LinearModel(f"{scenario.name}-compact")
    out = CompactBuildOutput(model=model, collapse_policy=policy)
    tracked = scenario.tracked_producers()
    triples = {a.name: scenario.domain_triples(a.name) for a in tracked}
    triple_sets = {name: set(pairs) for name, pairs in triples.items()}
    out.collapsed_profile = collapse_profiles(scenario, policy)

    for asset in tracked:
        unit = asset.unit_capacity
        for vintage in asset.investable_years:
            var = model.add_variable("inv", (asset.name, vintage), integer=True)
            out.inv[(asset.name, vintage)] = var
            cost = scenario.asset_year[(asset.name, vintage)].investment_cost
            model.add_objective(var, cost * unit, INVESTMENT)
        # a vintage can be decommissioned only after its commissioning year
        for year, vintage in triples[asset.name]:
            if vintage < year:
                out.decom[(asset.name, year, vintage)] = model.add_variable(
                    "decom", (asset.name, year, vintage), integer=True
                )
        for year, vintage in triples[asset.name]:
            var = model.add_variable("avail", (asset.name, year, vintage))
            out.available[(asset.name, year, vintage)] = var
            fixed = scenario.vintage_fixed_cost(asset.name, year, vintage)
            if fixed:
                model.add_objective(var, fixed * unit, FIXED)

    out.flow = add_flow_variables(model, scenario)

    for asset in tracked:
        investable = set(asset.investable_years)
        for year, vintage in triples[asset.name]:
            coeffs = [(out.available[(asset.name, year, vintage)], 1.0)]
            if vintage in investable:
                coeffs.append((out.inv[(asset.name, vintage)], -1.0))
            for i in scenario.years:
                if vintage < i <= year and (i, vintage) in triple_sets[asset.name]:
                    coeffs.append((out.decom[(asset.name, i, vintage)], 1.0))
            model.add_constraint(
                f"units__{asset.name}_{year}_{vintage}",
                coeffs,
                EQUAL,
                scenario.vintage_initial_units(asset.name, year, vintage),
            )
            out.available_rows.append((asset.name, year, vintage))

    for asset in tracked:
        for year in scenario.years:
            if not scenario.is_producer_in(asset.name, year):
                continue
            edges = scenario.out_edges(asset.name, year)
            if not edges:
                continue
            active = [v for (y, v) in triples[asset.name] if y == year]
            capacity = scenario.capacity_in_year(asset.name, year)
            for rp, block, _w, _d in scenario.time_steps(year):
                profile = out.collapsed_profile[(asset.name, year, rp, block)]
                coeffs = [(out.flow[(e.id, year, rp, block)], 1.0) for e in edges]
                for vintage in active:
                    coeffs.append(
                        (out.available[(asset.name, year, vintage)], -profile * capacity)
                    )
                model.add_constraint(
                    f"cap__{asset.name}_{year}_{rp}_{block}", coeffs, LESS_EQUAL, 0.0
                )
                out.capacity_rows.append((asset.name, year, rp, block))

    out.demand_rows = add_demand_constraints(model, scenario, out.flow)
    return out
