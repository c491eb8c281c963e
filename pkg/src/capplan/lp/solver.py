"""Bundled desk-scale solver: dense two-phase simplex plus exhaustive
branch-and-bound for small integer models.

Scope is deliberately limited (~2000 scalar variables continuous, 25
integer variables); anything larger should be emitted as an LP file and
handed to an external solver.  Pivoting uses Dantzig pricing with a
switch to Bland's rule after a run of degenerate pivots, which is enough
to prevent cycling at this scale.  All arithmetic is plain numpy, so
repeated solves of the same model are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import NumericalFailure, TooLargeForBundledSolver
from .model import (
    EQUAL,
    GREATER_EQUAL,
    LESS_EQUAL,
    STATUS_INFEASIBLE,
    STATUS_ITERATION_LIMIT,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    LinearModel,
    Solution,
    VarRef,
)

MAX_CONTINUOUS_VARIABLES = 2000
MAX_INTEGER_VARIABLES = 25

MODE_CONTINUOUS = "continuous"
MODE_INTEGER = "integer"

_PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class SolveOptions:
    mode: str = MODE_CONTINUOUS
    feas_tol: float = 1e-9
    opt_tol: float = 1e-9
    max_iterations: int = 20000
    bland_threshold: int = 1000
    max_nodes: int = 200000


def solve(model: LinearModel, options: SolveOptions | None = None) -> Solution:
    """Solve a model; integrality is honoured only in integer mode."""
    options = options or SolveOptions()
    if options.mode not in (MODE_CONTINUOUS, MODE_INTEGER):
        raise ValueError(f"unknown solve mode {options.mode!r}")
    if len(model.variables) > MAX_CONTINUOUS_VARIABLES:
        raise TooLargeForBundledSolver(
            f"{len(model.variables)} variables exceed the bundled limit "
            f"of {MAX_CONTINUOUS_VARIABLES}; use emit_lp and an external solver"
        )
    if options.mode == MODE_INTEGER:
        n_integer = len(model.integer_variables())
        if n_integer > MAX_INTEGER_VARIABLES:
            raise TooLargeForBundledSolver(
                f"{n_integer} integer variables exceed the bundled limit "
                f"of {MAX_INTEGER_VARIABLES}; use emit_lp and an external solver"
            )
        status, values, objective = _branch_and_bound(model, options)
    else:
        status, values, objective = _solve_relaxation(model, options, {})

    solution = Solution(status=status)
    if status == STATUS_OPTIMAL:
        solution.values = values
        solution.objective = objective
        solution.breakdown = model.evaluate_breakdown(values)
    return solution


# -- continuous core ----------------------------------------------------------


def _effective_bounds(var: VarRef, overrides) -> tuple[float | None, float | None]:
    lower, upper = var.lower, var.upper
    if var.position in overrides:
        tight_lower, tight_upper = overrides[var.position]
        if tight_lower is not None:
            lower = tight_lower if lower is None else max(lower, tight_lower)
        if tight_upper is not None:
            upper = tight_upper if upper is None else min(upper, tight_upper)
    return lower, upper


def _solve_relaxation(model: LinearModel, options: SolveOptions, overrides):
    """Solve the continuous relaxation with optional per-variable bound
    tightenings (used by branch-and-bound).  Returns (status, values, obj)."""
    n = len(model.variables)

    # substitution x = shift + sum(sign * y_k), y_k >= 0
    columns: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    shifts = np.zeros(n)
    extra_rows: list[tuple[dict[int, float], str, float]] = []  # bound rows
    n_std = 0
    for var in model.variables:
        lower, upper = _effective_bounds(var, overrides)
        if lower is not None and upper is not None and lower > upper:
            return STATUS_INFEASIBLE, {}, None
        if lower is not None:
            columns[var.position].append((n_std, 1.0))
            shifts[var.position] = lower
            if upper is not None:
                extra_rows.append(({n_std: 1.0}, LESS_EQUAL, upper - lower))
            n_std += 1
        elif upper is not None:
            columns[var.position].append((n_std, -1.0))
            shifts[var.position] = upper
            n_std += 1
        else:
            columns[var.position].append((n_std, 1.0))
            columns[var.position].append((n_std + 1, -1.0))
            n_std += 2

    rows: list[tuple[dict[int, float], str, float]] = []
    for constraint in model.constraints:
        coeffs: dict[int, float] = {}
        rhs = constraint.rhs
        for var, coeff in constraint.coefficients:
            rhs -= coeff * shifts[var.position]
            for col, sign in columns[var.position]:
                coeffs[col] = coeffs.get(col, 0.0) + coeff * sign
        rows.append((coeffs, constraint.sense, rhs))
    rows.extend(extra_rows)

    cost = np.zeros(n_std)
    constant = 0.0
    for var, coeff in model.objective_coefficients().items():
        constant += coeff * shifts[var.position]
        for col, sign in columns[var.position]:
            cost[col] += coeff * sign

    status, y = _two_phase_simplex(rows, cost, n_std, options)
    if status != STATUS_OPTIMAL:
        return status, {}, None

    values: dict[VarRef, float] = {}
    for var in model.variables:
        value = shifts[var.position]
        for col, sign in columns[var.position]:
            value += sign * y[col]
        values[var] = float(value)
    objective = model.evaluate_objective(values)
    return STATUS_OPTIMAL, values, objective


def _two_phase_simplex(rows, cost, n_std, options: SolveOptions):
    """Minimize cost . y over the given rows with y >= 0."""
    m = len(rows)
    if m == 0:
        # only lower bounds: optimum is y = 0 unless some cost is negative
        if np.any(cost < -options.opt_tol):
            return STATUS_UNBOUNDED, None
        return STATUS_OPTIMAL, np.zeros(n_std)

    n_slack = sum(1 for _c, sense, _r in rows if sense != EQUAL)
    width = n_std + n_slack
    dense = np.zeros((m, width + 1))
    slack_col = n_std
    artificial_needed = []
    for i, (coeffs, sense, rhs) in enumerate(rows):
        for col, value in coeffs.items():
            dense[i, col] = value
        flip = rhs < 0
        if flip:
            dense[i, :] = -dense[i, :]
            rhs = -rhs
            sense = {LESS_EQUAL: GREATER_EQUAL, GREATER_EQUAL: LESS_EQUAL, EQUAL: EQUAL}[sense]
        dense[i, -1] = rhs
        if sense == LESS_EQUAL:
            dense[i, slack_col] = 1.0
            artificial_needed.append(False)
            slack_col += 1
        elif sense == GREATER_EQUAL:
            dense[i, slack_col] = -1.0
            artificial_needed.append(True)
            slack_col += 1
        else:
            artificial_needed.append(True)

    n_artificial = sum(artificial_needed)
    total = width + n_artificial
    tableau = np.zeros((m, total + 1))
    tableau[:, :width] = dense[:, :width]
    tableau[:, -1] = dense[:, -1]
    basis = [-1] * m
    art_col = width
    for i in range(m):
        if artificial_needed[i]:
            tableau[i, art_col] = 1.0
            basis[i] = art_col
            art_col += 1
        else:
            slack = np.nonzero(dense[i, n_std:width])[0]
            basis[i] = n_std + int(slack[0])

    rhs_scale = max(1.0, float(np.max(np.abs(tableau[:, -1]))))

    if n_artificial:
        phase1_cost = np.zeros(total)
        phase1_cost[width:] = 1.0
        cost_row = phase1_cost.copy()
        for i in range(m):
            if basis[i] >= width:
                cost_row -= tableau[i, :total]
        status = _iterate(tableau, basis, cost_row, options, allowed=total)
        if status == STATUS_ITERATION_LIMIT:
            return status, None
        if status == STATUS_UNBOUNDED:
            raise NumericalFailure("feasibility phase reported an unbounded direction")
        infeasibility = _phase_objective(tableau, basis, phase1_cost)
        if infeasibility > options.feas_tol * rhs_scale:
            return STATUS_INFEASIBLE, None
        _drive_out_artificials(tableau, basis, width)
        keep = [i for i in range(len(basis)) if basis[i] < width]
        if len(keep) != len(basis):
            tableau = tableau[keep]
            basis = [basis[i] for i in keep]
        tableau = np.hstack([tableau[:, :width], tableau[:, -1:]])
        total = width

    full_cost = np.zeros(total)
    full_cost[:n_std] = cost
    cost_row = full_cost.copy()
    for i, b in enumerate(basis):
        if full_cost[b] != 0.0:
            cost_row -= full_cost[b] * tableau[i, :total]
    status = _iterate(tableau, basis, cost_row, options, allowed=total)
    if status != STATUS_OPTIMAL:
        return status, None

    y = np.zeros(total)
    for i, b in enumerate(basis):
        y[b] = tableau[i, -1]
    return STATUS_OPTIMAL, y[:n_std]


def _phase_objective(tableau, basis, phase_cost) -> float:
    value = 0.0
    for i, b in enumerate(basis):
        value += phase_cost[b] * tableau[i, -1]
    return float(value)


def _drive_out_artificials(tableau, basis, width):
    """Pivot basic artificials onto structural columns where possible."""
    for i in range(len(basis)):
        if basis[i] < width:
            continue
        pivots = np.nonzero(np.abs(tableau[i, :width]) > _PIVOT_TOL)[0]
        if len(pivots) == 0:
            continue  # redundant row, caller drops it
        _pivot(tableau, basis, i, int(pivots[0]), None)


def _iterate(tableau, basis, cost_row, options: SolveOptions, allowed: int):
    iterations = 0
    degenerate_run = 0
    use_bland = False
    while True:
        if iterations >= options.max_iterations:
            return STATUS_ITERATION_LIMIT
        reduced = cost_row[:allowed]
        if use_bland:
            candidates = np.nonzero(reduced < -options.opt_tol)[0]
            if len(candidates) == 0:
                return STATUS_OPTIMAL
            entering = int(candidates[0])
        else:
            entering = int(np.argmin(reduced))
            if reduced[entering] >= -options.opt_tol:
                return STATUS_OPTIMAL
        column = tableau[:, entering]
        eligible = np.nonzero(column > _PIVOT_TOL)[0]
        if len(eligible) == 0:
            return STATUS_UNBOUNDED
        ratios = tableau[eligible, -1] / column[eligible]
        best = float(np.min(ratios))
        ties = eligible[np.nonzero(ratios <= best + 1e-12)[0]]
        if use_bland:
            leaving = int(min(ties, key=lambda i: basis[i]))
        else:
            leaving = int(ties[0])
        _pivot(tableau, basis, leaving, entering, cost_row)
        iterations += 1
        if best <= _PIVOT_TOL:
            degenerate_run += 1
            if degenerate_run >= options.bland_threshold:
                use_bland = True
        else:
            degenerate_run = 0


def _pivot(tableau, basis, row: int, col: int, cost_row):
    pivot_value = tableau[row, col]
    if abs(pivot_value) <= _PIVOT_TOL:
        raise NumericalFailure("pivot element vanished")
    tableau[row, :] /= pivot_value
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i, :] -= tableau[i, col] * tableau[row, :]
    if cost_row is not None and cost_row[col] != 0.0:
        cost_row -= cost_row[col] * tableau[row, : len(cost_row)]
    basis[row] = col


# -- integer mode --------------------------------------------------------------


def _branch_and_bound(model: LinearModel, options: SolveOptions):
    integers = model.integer_variables()
    if not integers:
        return _solve_relaxation(model, options, {})

    def integrality_gap(values) -> tuple[VarRef | None, float]:
        for var in integers:
            value = values[var]
            if abs(value - round(value)) > 1e-9 * (1.0 + abs(value)):
                return var, value
        return None, 0.0

    best_objective = math.inf
    best_values = None
    stack: list[dict[int, tuple[float | None, float | None]]] = [{}]
    nodes = 0
    feasible_seen = False
    relaxation_unbounded = False

    while stack:
        overrides = stack.pop()
        nodes += 1
        if nodes > options.max_nodes:
            return STATUS_ITERATION_LIMIT, {}, None
        status, values, objective = _solve_relaxation(model, options, overrides)
        if status == STATUS_INFEASIBLE:
            continue
        if status == STATUS_UNBOUNDED:
            relaxation_unbounded = True
            continue
        if status == STATUS_ITERATION_LIMIT:
            return status, {}, None
        feasible_seen = True
        if objective >= best_objective - 1e-9 * (1.0 + abs(best_objective)):
            continue
        fractional, value = integrality_gap(values)
        if fractional is None:
            candidate = _resolve_with_fixed_integers(model, options, overrides, integers, values)
            if candidate is not None:
                fixed_values, fixed_objective = candidate
                if fixed_objective < best_objective:
                    best_objective = fixed_objective
                    best_values = fixed_values
            continue
        floor_value = math.floor(value)
        down = dict(overrides)
        down[fractional.position] = _merge_bound(
            overrides.get(fractional.position), upper=float(floor_value)
        )
        up = dict(overrides)
        up[fractional.position] = _merge_bound(
            overrides.get(fractional.position), lower=float(floor_value + 1)
        )
        stack.append(up)
        stack.append(down)

    if best_values is None:
        if relaxation_unbounded and not feasible_seen:
            return STATUS_UNBOUNDED, {}, None
        return STATUS_INFEASIBLE, {}, None
    return STATUS_OPTIMAL, best_values, best_objective


def _merge_bound(existing, lower: float | None = None, upper: float | None = None):
    low, high = existing if existing else (None, None)
    if lower is not None:
        low = lower if low is None else max(low, lower)
    if upper is not None:
        high = upper if high is None else min(high, upper)
    return (low, high)


def _resolve_with_fixed_integers(model, options, overrides, integers, values):
    """Pin integer variables at their rounded values and re-solve, so the
    incumbent carries exactly-integral values."""
    fixed = dict(overrides)
    for var in integers:
        rounded = float(round(values[var]))
        fixed[var.position] = (rounded, rounded)
    status, fixed_values, objective = _solve_relaxation(model, options, fixed)
    if status != STATUS_OPTIMAL:
        return None
    for var in integers:
        fixed_values[var] = float(round(fixed_values[var]))
    return fixed_values, model.evaluate_objective(fixed_values)


def relax_to_continuous(options: SolveOptions) -> SolveOptions:
    return replace(options, mode=MODE_CONTINUOUS)
