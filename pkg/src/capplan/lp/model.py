"""Language-agnostic linear-model container.

A :class:`LinearModel` is a plain registry of variables, linear
constraints and a grouped linear objective.  It knows nothing about
scenarios or formulations; builders populate it and the solver and the
LP-file writer consume it.  Variable and constraint order is insertion
order and is part of the contract (deterministic output depends on it).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from ..errors import BoundError, DuplicateCoefficient, DuplicateVariable

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
SENSES = (LESS_EQUAL, EQUAL, GREATER_EQUAL)

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class VarRef:
    """Handle for one scalar variable; hashable, usable as a dict key."""

    group: str
    index: tuple
    position: int
    lower: float | None = 0.0
    upper: float | None = None
    is_integer: bool = False

    def __repr__(self) -> str:
        parts = ",".join(str(p) for p in self.index)
        return f"{self.group}[{parts}]"


@dataclass(frozen=True)
class Constraint:
    name: str
    coefficients: tuple[tuple[VarRef, float], ...]
    sense: str
    rhs: float


@dataclass
class Solution:
    status: str
    values: dict[VarRef, float] = field(default_factory=dict)
    objective: float | None = None
    breakdown: dict[str, float] = field(default_factory=dict)

    @property
    def is_optimal(self) -> bool:
        return self.status == STATUS_OPTIMAL


class LinearModel:
    """Minimization model over named variables with sparse constraints."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[VarRef] = []
        self.constraints: list[Constraint] = []
        self.objective_groups: dict[str, dict[VarRef, float]] = {}
        self._by_key: dict[tuple[str, tuple], VarRef] = {}
        self._constraint_names: set[str] = set()

    # -- construction -------------------------------------------------------

    def add_variable(
        self,
        group: str,
        index: tuple = (),
        lower: float | None = 0.0,
        upper: float | None = None,
        integer: bool = False,
    ) -> VarRef:
        key = (group, index)
        if key in self._by_key:
            raise DuplicateVariable(f"variable {group}{index} already exists")
        if lower is not None and upper is not None and lower > upper:
            raise BoundError(f"variable {group}{index}: lower {lower} > upper {upper}")
        var = VarRef(group, index, len(self.variables), lower, upper, integer)
        self.variables.append(var)
        self._by_key[key] = var
        return var

    def get_variable(self, group: str, index: tuple = ()) -> VarRef:
        return self._by_key[(group, index)]

    def add_constraint(
        self,
        name: str,
        coefficients: list[tuple[VarRef, float]],
        sense: str,
        rhs: float,
    ) -> Constraint:
        if sense not in SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        if name in self._constraint_names:
            raise ValueError(f"constraint name {name!r} already used")
        seen: set[int] = set()
        kept: list[tuple[VarRef, float]] = []
        for var, coeff in coefficients:
            if self._by_key.get((var.group, var.index)) is not var:
                raise ValueError(f"constraint {name}: variable {var!r} is not in this model")
            if var.position in seen:
                raise DuplicateCoefficient(f"constraint {name}: duplicate variable {var!r}")
            seen.add(var.position)
            if coeff != 0.0:
                kept.append((var, coeff))
        if not kept:
            raise ValueError(f"constraint {name}: no nonzero coefficients")
        constraint = Constraint(name, tuple(kept), sense, rhs)
        self.constraints.append(constraint)
        self._constraint_names.add(name)
        return constraint

    def add_objective(self, var: VarRef, coeff: float, group: str = "objective"):
        """Accumulate an objective coefficient under a named cost group."""
        if self._by_key.get((var.group, var.index)) is not var:
            raise ValueError(f"objective: variable {var!r} is not in this model")
        bucket = self.objective_groups.setdefault(group, {})
        bucket[var] = bucket.get(var, 0.0) + coeff

    # -- views ---------------------------------------------------------------

    def objective_coefficients(self) -> dict[VarRef, float]:
        merged: dict[VarRef, float] = {}
        for bucket in self.objective_groups.values():
            for var, coeff in bucket.items():
                merged[var] = merged.get(var, 0.0) + coeff
        return merged

    def integer_variables(self) -> list[VarRef]:
        return [v for v in self.variables if v.is_integer]

    def evaluate_breakdown(self, values: dict[VarRef, float]) -> dict[str, float]:
        return {
            group: sum(coeff * values.get(var, 0.0) for var, coeff in bucket.items())
            for group, bucket in self.objective_groups.items()
        }

    def evaluate_objective(self, values: dict[VarRef, float]) -> float:
        return sum(
            coeff * values.get(var, 0.0)
            for var, coeff in self.objective_coefficients().items()
        )

    def constraint_residual(self, constraint: Constraint, values: dict[VarRef, float]) -> float:
        """Violation of one constraint at the given point (0 when satisfied)."""
        activity = sum(coeff * values.get(var, 0.0) for var, coeff in constraint.coefficients)
        if constraint.sense == LESS_EQUAL:
            return max(0.0, activity - constraint.rhs)
        if constraint.sense == GREATER_EQUAL:
            return max(0.0, constraint.rhs - activity)
        return abs(activity - constraint.rhs)

    def max_violation(self, values: dict[VarRef, float]) -> float:
        worst = 0.0
        for constraint in self.constraints:
            worst = max(worst, self.constraint_residual(constraint, values))
        for var in self.variables:
            value = values.get(var, 0.0)
            if var.lower is not None:
                worst = max(worst, var.lower - value)
            if var.upper is not None:
                worst = max(worst, value - var.upper)
        return worst


# -- canonical naming and structural equality --------------------------------

_SANITIZE = re.compile(r"[^A-Za-z0-9_]")


def _sanitize(part) -> str:
    text = _SANITIZE.sub("_", str(part))
    return text if text else "_"


def _unique(base: str, used: set[str]) -> str:
    name = base
    suffix = 2
    while name in used:
        name = f"{base}_{suffix}"
        suffix += 1
    used.add(name)
    return name


def _lp_safe(base: str) -> str:
    # LP identifiers must not start with a digit
    return "_" + base if base[0].isdigit() else base


def canonical_names(model: LinearModel) -> dict[VarRef, str]:
    """Stable external names: ``group__idx1_idx2``, unique within the model."""
    names: dict[VarRef, str] = {}
    used: set[str] = set()
    for var in model.variables:
        base = _sanitize(var.group)
        if var.index:
            base += "__" + "_".join(_sanitize(p) for p in var.index)
        names[var] = _unique(_lp_safe(base), used)
    return names


def canonical_constraint_names(model: LinearModel) -> dict[str, str]:
    names: dict[str, str] = {}
    used: set[str] = set()
    for constraint in model.constraints:
        names[constraint.name] = _unique(_lp_safe(_sanitize(constraint.name)), used)
    return names


def _canonical_form(model: LinearModel):
    names = canonical_names(model)
    constraint_names = canonical_constraint_names(model)
    variables = {
        names[v]: (
            v.lower if v.lower is not None else -math.inf,
            v.upper if v.upper is not None else math.inf,
            v.is_integer,
        )
        for v in model.variables
    }
    constraints = {
        constraint_names[c.name]: (
            frozenset((names[v], coeff) for v, coeff in c.coefficients),
            c.sense,
            c.rhs,
        )
        for c in model.constraints
    }
    objective = {}
    for var, coeff in model.objective_coefficients().items():
        if coeff != 0.0:
            objective[names[var]] = objective.get(names[var], 0.0) + coeff
    return variables, constraints, objective


def structurally_equal(a: LinearModel, b: LinearModel) -> bool:
    """True when two models describe the same mathematical program.

    Variables are matched by canonical name, so a model and its
    emit/parse round trip compare equal even though parsed variables
    carry flat names.
    """
    return _canonical_form(a) == _canonical_form(b)
