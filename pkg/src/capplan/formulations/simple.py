"""Simple investment method.

Capacity is tracked per asset and operational year only: one pool of
available units accumulates investments that are still inside their
technical lifetime, minus decommissioning, with no memory of the
commissioning year.  Production therefore sees a single availability
profile per asset and year.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import WrongMethod
from ..lp.model import EQUAL, LESS_EQUAL, LinearModel, VarRef
from ..scenario import METHOD_COMPACT, Scenario
from .common import FIXED, INVESTMENT, add_demand_constraints, add_flow_variables, year_profile


@dataclass
class SimpleBuildOutput:
    model: LinearModel
    inv: dict[tuple[str, int], VarRef] = field(default_factory=dict)
    decom: dict[tuple[str, int], VarRef] = field(default_factory=dict)
    available: dict[tuple[str, int], VarRef] = field(default_factory=dict)
    flow: dict[tuple[str, int, int, int], VarRef] = field(default_factory=dict)
    available_rows: list[tuple[str, int]] = field(default_factory=list)
    capacity_rows: list[tuple[str, int, int, int]] = field(default_factory=list)
    demand_rows: list[tuple[str, int, int, int]] = field(default_factory=list)


def build_simple(scenario: Scenario) -> SimpleBuildOutput:
    """Compile a scenario into the simple-method linear model."""
    for asset in scenario.assets.values():
        if asset.investment_method == METHOD_COMPACT:
            raise WrongMethod(
                f"asset {asset.name} uses vintage-indexed data; "
                "the simple method cannot represent it"
            )

    model = LinearModel(f"{scenario.name}-simple")
    out = SimpleBuildOutput(model=model)
    tracked = scenario.tracked_producers()

    for asset in tracked:
        unit = asset.unit_capacity
        for year in asset.investable_years:
            var = model.add_variable("inv", (asset.name, year), integer=True)
            out.inv[(asset.name, year)] = var
            cost = scenario.asset_year[(asset.name, year)].investment_cost
            model.add_objective(var, cost * unit, INVESTMENT)
        for year in scenario.years:
            out.decom[(asset.name, year)] = model.add_variable(
                "decom", (asset.name, year), integer=True
            )
        for year in scenario.years:
            var = model.add_variable("avail", (asset.name, year))
            out.available[(asset.name, year)] = var
            params = scenario.asset_year.get((asset.name, year))
            if params is not None and params.fixed_cost:
                model.add_objective(var, params.fixed_cost * unit, FIXED)

    out.flow = add_flow_variables(model, scenario)

    # available units: initial stock plus live investments minus decommissioning
    for asset in tracked:
        investable = set(asset.investable_years)
        for year in scenario.years:
            window = scenario.active_window(asset.name, year)
            coeffs = [(out.available[(asset.name, year)], 1.0)]
            for i in window:
                if i in investable:
                    coeffs.append((out.inv[(asset.name, i)], -1.0))
            for i in window:
                coeffs.append((out.decom[(asset.name, i)], 1.0))
            model.add_constraint(
                f"units__{asset.name}_{year}",
                coeffs,
                EQUAL,
                scenario.initial_units(asset.name, year),
            )
            out.available_rows.append((asset.name, year))

    for asset in tracked:
        for year in scenario.years:
            if not scenario.is_producer_in(asset.name, year):
                continue
            edges = scenario.out_edges(asset.name, year)
            if not edges:
                continue
            capacity = scenario.capacity_in_year(asset.name, year)
            for rp, block, _w, _d in scenario.time_steps(year):
                profile = year_profile(scenario, asset.name, year, rp, block)
                coeffs = [(out.flow[(e.id, year, rp, block)], 1.0) for e in edges]
                coeffs.append((out.available[(asset.name, year)], -profile * capacity))
                model.add_constraint(
                    f"cap__{asset.name}_{year}_{rp}_{block}", coeffs, LESS_EQUAL, 0.0
                )
                out.capacity_rows.append((asset.name, year, rp, block))

    out.demand_rows = add_demand_constraints(model, scenario, out.flow)
    return out
