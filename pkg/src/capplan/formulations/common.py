"""Pieces shared by the formulation builders."""

from __future__ import annotations

from ..errors import InvariantViolation, MissingProfile
from ..lp.model import GREATER_EQUAL, LinearModel, VarRef
from ..scenario import Scenario

INVESTMENT = "investment"
FIXED = "fixed"
VARIABLE = "variable"


def year_profile(scenario: Scenario, asset: str, year: int, rp: int, block: int) -> float:
    value = scenario.profile.get((asset, year, rp, block))
    if value is None:
        raise MissingProfile(f"no availability profile for {asset} at ({year}, {rp}, {block})")
    return value


def add_flow_variables(model: LinearModel, scenario: Scenario):
    """One flow variable per active edge and time step, objective term included."""
    flow: dict[tuple[str, int, int, int], VarRef] = {}
    for year in scenario.years:
        for edge in scenario.flows.values():
            if (edge.id, year) not in scenario.flow_cost:
                continue
            cost = scenario.flow_cost[(edge.id, year)]
            for rp, block, weight, duration in scenario.time_steps(year):
                var = model.add_variable("flow", (edge.id, year, rp, block))
                flow[(edge.id, year, rp, block)] = var
                model.add_objective(var, weight * cost * duration, VARIABLE)
    return flow


def add_demand_constraints(model: LinearModel, scenario: Scenario, flow):
    """Total inflow must cover demand per consumer and time step."""
    rows: list[tuple[str, int, int, int]] = []
    for (consumer, year, rp, block), value in scenario.demand.items():
        if value == 0.0:
            continue
        edges = scenario.in_edges(consumer, year)
        if not edges:
            raise InvariantViolation(
                f"demand of {consumer} in {year} cannot be met: no active inflow edge"
            )
        coeffs = [(flow[(e.id, year, rp, block)], 1.0) for e in edges]
        model.add_constraint(
            f"dem__{consumer}_{year}_{rp}_{block}", coeffs, GREATER_EQUAL, value
        )
        rows.append((consumer, year, rp, block))
    return rows
