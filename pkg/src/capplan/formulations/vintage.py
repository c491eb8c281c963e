"""Vintage investment method.

Production and capacity are tracked per (vintage, operational year)
pair, so units commissioned in different years can carry different
availability profiles.  Decommissioning is likewise vintage-indexed and
is allowed from the commissioning year onwards.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from ..errors import InvariantViolation, MissingVintageProfile, ScenarioWarning
from ..lp.model import EQUAL, GREATER_EQUAL, LESS_EQUAL, LinearModel, VarRef
from ..scenario import Scenario
from .common import FIXED, INVESTMENT, VARIABLE, year_profile


@dataclass
class VintageBuildOutput:
    model: LinearModel
    inv: dict[tuple[str, int], VarRef] = field(default_factory=dict)
    decom: dict[tuple[str, int, int], VarRef] = field(default_factory=dict)
    available: dict[tuple[str, int, int], VarRef] = field(default_factory=dict)
    flow: dict[tuple[str, int, int, int, int], VarRef] = field(default_factory=dict)
    available_rows: list[tuple[str, int, int]] = field(default_factory=list)
    capacity_rows: list[tuple[str, int, int, int, int]] = field(default_factory=list)
    demand_rows: list[tuple[str, int, int, int]] = field(default_factory=list)


def vintage_profile_value(
    scenario: Scenario,
    asset: str,
    vintage: int,
    year: int,
    rp: int,
    block: int,
    fallback: bool = True,
    _warned: set | None = None,
) -> float:
    value = scenario.vintage_profile.get((asset, vintage, year, rp, block))
    if value is not None:
        return value
    if not fallback:
        raise MissingVintageProfile(
            f"no vintage profile for {asset} vintage {vintage} at ({year}, {rp}, {block})"
        )
    if _warned is not None and (asset, vintage) not in _warned:
        _warned.add((asset, vintage))
        warnings.warn(
            f"{asset} vintage {vintage}: falling back to the vintage-less profile",
            ScenarioWarning,
            stacklevel=2,
        )
    return year_profile(scenario, asset, year, rp, block)


def build_vintage(scenario: Scenario, profile_fallback: bool = True) -> VintageBuildOutput:
    """Compile a scenario into the vintage-method linear model."""
    model = LinearModel(f"{scenario.name}-vintage")
    out = VintageBuildOutput(model=model)
    tracked = scenario.tracked_producers()
    triples = {a.name: scenario.domain_triples(a.name) for a in tracked}
    triple_sets = {name: set(pairs) for name, pairs in triples.items()}
    # warn about fallbacks only for assets that carry vintage profiles at all;
    # a directory without any is simply vintage-less data
    has_vintage_profiles = {key[0] for key in scenario.vintage_profile}
    warned: set = set()

    for asset in tracked:
        unit = asset.unit_capacity
        for vintage in asset.investable_years:
            var = model.add_variable("inv", (asset.name, vintage), integer=True)
            out.inv[(asset.name, vintage)] = var
            cost = scenario.asset_year[(asset.name, vintage)].investment_cost
            model.add_objective(var, cost * unit, INVESTMENT)
        # one decommissioning decision per milestone year a vintage is active in
        for year, vintage in triples[asset.name]:
            out.decom[(asset.name, year, vintage)] = model.add_variable(
                "decom", (asset.name, year, vintage), integer=True
            )
        for year, vintage in triples[asset.name]:
            var = model.add_variable("avail", (asset.name, year, vintage))
            out.available[(asset.name, year, vintage)] = var
            fixed = scenario.vintage_fixed_cost(asset.name, year, vintage)
            if fixed:
                model.add_objective(var, fixed * unit, FIXED)

    # flows carry the commissioning year of the producing units
    for year in scenario.years:
        for edge in scenario.flows.values():
            if (edge.id, year) not in scenario.flow_cost:
                continue
            cost = scenario.flow_cost[(edge.id, year)]
            vintages = [v for (y, v) in triples.get(edge.from_asset, ()) if y == year]
            for vintage in vintages:
                for rp, block, weight, duration in scenario.time_steps(year):
                    var = model.add_variable("flow", (edge.id, year, vintage, rp, block))
                    out.flow[(edge.id, year, vintage, rp, block)] = var
                    model.add_objective(var, weight * cost * duration, VARIABLE)

    for asset in tracked:
        investable = set(asset.investable_years)
        for year, vintage in triples[asset.name]:
            coeffs = [(out.available[(asset.name, year, vintage)], 1.0)]
            if vintage in investable:
                coeffs.append((out.inv[(asset.name, vintage)], -1.0))
            for i in scenario.years:
                if vintage <= i <= year and (i, vintage) in triple_sets[asset.name]:
                    coeffs.append((out.decom[(asset.name, i, vintage)], 1.0))
            model.add_constraint(
                f"units__{asset.name}_{year}_{vintage}",
                coeffs,
                EQUAL,
                scenario.vintage_initial_units(asset.name, year, vintage),
            )
            out.available_rows.append((asset.name, year, vintage))

    for asset in tracked:
        for year, vintage in triples[asset.name]:
            if not scenario.is_producer_in(asset.name, year):
                continue
            edges = scenario.out_edges(asset.name, year)
            if not edges:
                continue
            capacity = scenario.capacity_in_year(asset.name, year)
            for rp, block, _w, _d in scenario.time_steps(year):
                profile = vintage_profile_value(
                    scenario,
                    asset.name,
                    vintage,
                    year,
                    rp,
                    block,
                    profile_fallback,
                    warned if asset.name in has_vintage_profiles else None,
                )
                coeffs = [(out.flow[(e.id, year, vintage, rp, block)], 1.0) for e in edges]
                coeffs.append(
                    (out.available[(asset.name, year, vintage)], -profile * capacity)
                )
                model.add_constraint(
                    f"cap__{asset.name}_{year}_{vintage}_{rp}_{block}",
                    coeffs,
                    LESS_EQUAL,
                    0.0,
                )
                out.capacity_rows.append((asset.name, year, vintage, rp, block))

    for (consumer, year, rp, block), value in scenario.demand.items():
        if value == 0.0:
            continue
        coeffs = []
        for edge in scenario.in_edges(consumer, year):
            for (y, v) in triples.get(edge.from_asset, ()):
                if y == year:
                    coeffs.append((out.flow[(edge.id, year, v, rp, block)], 1.0))
        if not coeffs:
            raise InvariantViolation(
                f"demand of {consumer} in {year} cannot be met: no active vintage supply"
            )
        model.add_constraint(
            f"dem__{consumer}_{year}_{rp}_{block}", coeffs, GREATER_EQUAL, value
        )
        out.demand_rows.append((consumer, year, rp, block))
    return out
