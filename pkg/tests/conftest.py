"""Shared fixtures and reference oracles for the test suite.

The oracles here (vertex enumeration, lattice enumeration) are written
independently of the solver under test and kept deliberately dumb.
"""

from __future__ import annotations

import itertools
import warnings
from pathlib import Path

import numpy as np
import pytest

from capplan.loader import load_scenario
from capplan.lp.model import EQUAL, GREATER_EQUAL, LESS_EQUAL, LinearModel
from capplan.scenario import (
    Asset,
    AssetVintageParams,
    AssetYearParams,
    FlowEdge,
    RepPeriod,
    Scenario,
    TimeBlock,
)

FIXTURES = Path(__file__).parent / "fixtures"

FIXTURE_NAMES = [
    "toy1",
    "toy1v",
    "wind3",
    "homog_gaps",
    "homog_multi",
    "homog_profiles",
    "zero_demand",
    "infeasible1",
    "compact_marked",
]

HOMOGENEOUS_FIXTURES = ["toy1", "wind3", "homog_gaps", "homog_multi", "homog_profiles"]


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture(scope="session")
def scenarios():
    loaded = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name in FIXTURE_NAMES:
            loaded[name] = load_scenario(fixture_path(name))
    return loaded


@pytest.fixture
def toy1(scenarios):
    return scenarios["toy1"]


@pytest.fixture
def toy1v(scenarios):
    return scenarios["toy1v"]


@pytest.fixture
def wind3(scenarios):
    return scenarios["wind3"]


# -- in-memory scenario construction ------------------------------------------


def make_single_asset_scenario(
    years: tuple[int, ...],
    lifetime: int,
    investable: tuple[int, ...],
    unit_capacity: float = 10.0,
    investment_cost: float = 50.0,
    fixed_cost: float = 4.0,
    variable_cost: float = 1.0,
    demand: dict[int, float] | None = None,
    profile: float = 1.0,
    vintage_profiles: dict[tuple[int, int], float] | None = None,
    initial_units: dict[int, float] | None = None,
    initial_vintage: int | None = None,
    name: str = "mem",
) -> Scenario:
    """One producer, one consumer, one edge, one block per year."""
    demand = demand or {}
    initial_units = initial_units or {}
    method = "simple" if investable else "none"
    producer = Asset("gen", "producer", method, lifetime, unit_capacity, tuple(investable))
    consumer = Asset("load", "consumer", "none", 1, 0.0, ())
    asset_year = {
        ("gen", y): AssetYearParams(
            "gen", y, investment_cost, fixed_cost, unit_capacity, initial_units.get(y, 0.0)
        )
        for y in years
    }
    asset_vintage = {}
    if initial_vintage is not None:
        for y in years:
            units = initial_units.get(y, 0.0)
            if units:
                asset_vintage[("gen", y, initial_vintage)] = AssetVintageParams(
                    "gen", y, initial_vintage, None, units
                )
    rep_periods = {
        y: (RepPeriod(y, 1, 1.0, (TimeBlock(1, 1.0),)),) for y in years
    }
    scenario = Scenario(
        name=name,
        years=tuple(years),
        assets={"gen": producer, "load": consumer},
        asset_year=asset_year,
        asset_vintage=asset_vintage,
        rep_periods=rep_periods,
        flows={"e": FlowEdge("e", "gen", "load")},
        flow_cost={("e", y): variable_cost for y in years},
    )
    for y in years:
        scenario.profile[("gen", y, 1, 1)] = profile
        value = demand.get(y, 0.0)
        if value:
            scenario.demand[("load", y, 1, 1)] = value
    for (vintage, y), value in (vintage_profiles or {}).items():
        scenario.vintage_profile[("gen", vintage, y, 1, 1)] = value
    return scenario


def random_conservatism_scenario(rng: np.random.Generator, index: int) -> Scenario:
    """Random two-year scenario whose older vintage profiles are pointwise
    below the newest vintage's profile."""
    years = (2030, 2040)
    unit = float(rng.integers(5, 30))
    newest = float(rng.uniform(0.7, 1.0))
    older_2040 = newest * float(rng.uniform(0.55, 1.0))
    first_year = float(rng.uniform(0.6, 1.0))
    worst = min(older_2040, first_year, newest)
    demand_2030 = round(float(rng.uniform(0.3, 1.4)) * unit * worst, 3)
    demand_2040 = round(float(rng.uniform(0.3, 1.8)) * unit * worst, 3)
    return make_single_asset_scenario(
        years,
        lifetime=20,
        investable=years,
        unit_capacity=unit,
        investment_cost=float(rng.integers(20, 80)),
        fixed_cost=float(rng.integers(1, 8)),
        variable_cost=round(float(rng.uniform(0.1, 2.0)), 3),
        demand={2030: demand_2030, 2040: demand_2040},
        profile=1.0,
        vintage_profiles={
            (2030, 2030): first_year,
            (2030, 2040): older_2040,
            (2040, 2040): newest,
        },
        name=f"random_conserve_{index}",
    )


# -- reference oracles ----------------------------------------------------------


def vertex_enumeration_minimum(model: LinearModel):
    """Brute-force minimum of a continuous model with finite box bounds.

    Enumerates every n-subset of {constraints as equalities} union
    {active bounds}, solves the linear system and keeps the best feasible
    point.  Only valid when every variable has finite bounds.
    """
    n = len(model.variables)
    rows = []
    for constraint in model.constraints:
        coeffs = np.zeros(n)
        for var, value in constraint.coefficients:
            coeffs[var.position] = value
        rows.append((coeffs, constraint.sense, constraint.rhs))
    for var in model.variables:
        assert var.lower is not None and var.upper is not None
        unit = np.zeros(n)
        unit[var.position] = 1.0
        rows.append((unit, GREATER_EQUAL, var.lower))
        rows.append((unit, LESS_EQUAL, var.upper))

    cost = np.zeros(n)
    for var, coeff in model.objective_coefficients().items():
        cost[var.position] = coeff

    def feasible(point) -> bool:
        for coeffs, sense, rhs in rows:
            activity = float(coeffs @ point)
            if sense == LESS_EQUAL and activity > rhs + 1e-7:
                return False
            if sense == GREATER_EQUAL and activity < rhs - 1e-7:
                return False
            if sense == EQUAL and abs(activity - rhs) > 1e-7:
                return False
        return True

    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        a = np.array([rows[i][0] for i in subset])
        b = np.array([rows[i][2] for i in subset])
        try:
            point = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(point)):
            continue
        if feasible(point):
            value = float(cost @ point)
            if best is None or value < best:
                best = value
    if best is None:
        return "infeasible", None
    return "optimal", best


def lattice_minimum(model: LinearModel):
    """Exhaustive minimum of an all-integer model with finite bounds."""
    ranges = []
    for var in model.variables:
        assert var.is_integer and var.lower is not None and var.upper is not None
        ranges.append(range(int(var.lower), int(var.upper) + 1))
    cost = model.objective_coefficients()
    best = None
    for point in itertools.product(*ranges):
        values = {var: float(v) for var, v in zip(model.variables, point)}
        if model.max_violation(values) > 1e-9:
            continue
        value = sum(coeff * values[var] for var, coeff in cost.items())
        if best is None or value < best:
            best = value
    if best is None:
        return "infeasible", None
    return "optimal", best


# -- random model generators -----------------------------------------------------


def random_lp(rng: np.random.Generator) -> LinearModel:
    """Random box-bounded LP with at most 6 variables and 6 constraints."""
    n = int(rng.integers(1, 7))
    m = int(rng.integers(0, 7))
    model = LinearModel("random-lp")
    variables = []
    for j in range(n):
        lower = float(rng.integers(0, 3))
        upper = lower + float(rng.integers(0, 6))
        variables.append(model.add_variable("x", (j,), lower=lower, upper=upper))
    for var in variables:
        model.add_objective(var, float(rng.integers(-5, 6)))
    for i in range(m):
        coeffs = []
        for var in variables:
            value = int(rng.integers(-3, 4))
            if value:
                coeffs.append((var, float(value)))
        if not coeffs:
            coeffs = [(variables[0], 1.0)]
        sense = [LESS_EQUAL, GREATER_EQUAL, EQUAL][int(rng.integers(0, 3))]
        model.add_constraint(f"c{i}", coeffs, sense, float(rng.integers(-6, 13)))
    return model


def random_milp(rng: np.random.Generator) -> LinearModel:
    """Random all-integer model small enough for lattice enumeration."""
    n = int(rng.integers(1, 5))
    m = int(rng.integers(0, 5))
    model = LinearModel("random-milp")
    variables = []
    for j in range(n):
        upper = float(rng.integers(1, 5))
        variables.append(model.add_variable("x", (j,), lower=0.0, upper=upper, integer=True))
    for var in variables:
        model.add_objective(var, float(rng.integers(-5, 6)))
    for i in range(m):
        coeffs = []
        for var in variables:
            value = int(rng.integers(-3, 4))
            if value:
                coeffs.append((var, float(value)))
        if not coeffs:
            coeffs = [(variables[0], 1.0)]
        sense = [LESS_EQUAL, GREATER_EQUAL][int(rng.integers(0, 2))]
        model.add_constraint(f"c{i}", coeffs, sense, float(rng.integers(-4, 10)))
    return model


_NASTY_PARTS = ["wind farm", "a_b", "x", "2030", "co2", "a-b", "x__y"]


def random_model_for_roundtrip(rng: np.random.Generator) -> LinearModel:
    """Random model exercising naming, bounds, integrality and senses."""
    model = LinearModel("random-rt")
    n = int(rng.integers(1, 8))
    variables = []
    for j in range(n):
        group = _NASTY_PARTS[int(rng.integers(0, len(_NASTY_PARTS)))]
        arity = int(rng.integers(0, 3))
        index = tuple(
            _NASTY_PARTS[int(rng.integers(0, len(_NASTY_PARTS)))] for _ in range(arity)
        )
        kind = int(rng.integers(0, 5))
        lower: float | None
        upper: float | None
        if kind == 0:
            lower, upper = 0.0, None
        elif kind == 1:
            lower, upper = None, None
        elif kind == 2:
            lower, upper = None, float(rng.normal() * 10)
        elif kind == 3:
            lower = float(rng.normal() * 10)
            upper = lower + abs(float(rng.normal() * 10))
        else:
            lower, upper = float(rng.normal() * 10), None
        try:
            var = model.add_variable(
                group, index, lower=lower, upper=upper, integer=bool(rng.integers(0, 2))
            )
        except Exception:
            continue
        variables.append(var)
    if not variables:
        variables.append(model.add_variable("x", ()))
    for var in variables:
        if rng.random() < 0.8:
            model.add_objective(var, float(rng.normal() * 7))
    for i in range(int(rng.integers(0, 6))):
        picks = [v for v in variables if rng.random() < 0.6] or [variables[0]]
        coeffs = [(v, float(rng.normal() * 5) or 1.0) for v in picks]
        sense = [LESS_EQUAL, GREATER_EQUAL, EQUAL][int(rng.integers(0, 3))]
        model.add_constraint(f"row {i}", coeffs, sense, float(rng.normal() * 20))
    return model


# -- assignment extraction --------------------------------------------------------


def assignment_from_solution(built, solution, method: str) -> dict[tuple, int]:
    """Integer decisions of a solved formulation, keyed like the oracle's."""
    assignment: dict[tuple, int] = {}
    for key, var in built.inv.items():
        assignment[("inv",) + key] = int(round(solution.values[var]))
    for key, var in built.decom.items():
        assignment[("decom",) + key] = int(round(solution.values[var]))
    return assignment
