"""CPLEX-LP-format text emission and parsing.

The writer produces the classic section layout (``Minimize`` /
``Subject To`` / ``Bounds`` / ``General`` / ``End``) with variable names
flattened to ``group__idx1_idx2`` and every number printed with 17
significant digits, so a written file parses back to a structurally
identical model.  The parser accepts exactly this dialect plus
``\\``-comments and blank lines.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from ..errors import ParseError
from .model import (
    EQUAL,
    GREATER_EQUAL,
    LESS_EQUAL,
    LinearModel,
    canonical_constraint_names,
    canonical_names,
)

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _num(value: float) -> str:
    return f"{value:.17g}"


def render_lp(model: LinearModel) -> str:
    """Serialize a model to LP-format text."""
    names = canonical_names(model)
    constraint_names = canonical_constraint_names(model)
    lines = ["Minimize"]
    objective = model.objective_coefficients()
    # emit objective terms in variable declaration order for determinism
    ordered = sorted(objective.items(), key=lambda item: item[0].position)
    terms = [(names[var], coeff) for var, coeff in ordered if coeff != 0.0]
    lines.append((" obj: " + _render_terms(terms)).rstrip())
    lines.append("Subject To")
    for constraint in model.constraints:
        body = _render_terms([(names[v], c) for v, c in constraint.coefficients])
        lines.append(
            f" {constraint_names[constraint.name]}: {body} {constraint.sense} {_num(constraint.rhs)}"
        )
    # every variable gets a bounds line so unused ones still round-trip
    bound_lines = []
    for var in model.variables:
        name = names[var]
        lower, upper = var.lower, var.upper
        if lower is None and upper is None:
            bound_lines.append(f" {name} free")
        elif lower is None:
            bound_lines.append(f" -infinity <= {name} <= {_num(upper)}")
        elif upper is None:
            bound_lines.append(f" {name} >= {_num(lower)}")
        elif lower == 0.0:
            bound_lines.append(f" {name} <= {_num(upper)}")
        else:
            bound_lines.append(f" {_num(lower)} <= {name} <= {_num(upper)}")
    if bound_lines:
        lines.append("Bounds")
        lines.extend(bound_lines)
    general = [names[v] for v in model.variables if v.is_integer]
    if general:
        lines.append("General")
        lines.extend(f" {name}" for name in general)
    lines.append("End")
    return "\n".join(lines) + "\n"


def _render_terms(terms: list[tuple[str, float]]) -> str:
    if not terms:
        return ""
    parts = [f"{_num(terms[0][1])} {terms[0][0]}"]
    for name, coeff in terms[1:]:
        sign = "-" if coeff < 0 else "+"
        parts.append(f"{sign} {_num(abs(coeff))} {name}")
    return " ".join(parts)


def emit_lp(model: LinearModel, path: str | Path) -> None:
    """Write the model to ``path`` in LP format."""
    Path(path).write_text(render_lp(model), encoding="utf-8")


# -- parsing -------------------------------------------------------------------


def parse_lp(path: str | Path) -> LinearModel:
    """Read a file in the emitted dialect back into a model."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_lp_text(text)


def parse_lp_text(text: str) -> LinearModel:
    objective: list[tuple[str, float]] = []
    constraints: list[tuple[str, list[tuple[str, float]], str, float]] = []
    bounds: dict[str, tuple[float | None, float | None]] = {}
    integers: list[str] = []
    order: list[str] = []
    seen: set[str] = set()

    def note(name: str):
        if name not in seen:
            seen.add(name)
            order.append(name)

    section = None
    saw_end = False
    pending_objective: list[str] = []
    objective_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        keyword = line.lower()
        if keyword == "minimize":
            section = "objective"
            continue
        if keyword == "subject to":
            section = "constraints"
            continue
        if keyword == "bounds":
            section = "bounds"
            continue
        if keyword == "general":
            section = "general"
            continue
        if keyword == "end":
            saw_end = True
            section = "done"
            continue
        if section == "objective":
            pending_objective.append(line)
            if not objective_line:
                objective_line = line_no
        elif section == "constraints":
            constraints.append(_parse_constraint(line, line_no))
        elif section == "bounds":
            name, low, high = _parse_bound(line, line_no)
            bounds[name] = (low, high)
        elif section == "general":
            for token in line.split():
                if not _NAME.match(token):
                    raise ParseError(line_no, f"invalid variable name {token!r}")
                integers.append(token)
        elif section == "done":
            raise ParseError(line_no, "content after End")
        else:
            raise ParseError(line_no, f"unexpected line outside any section: {line!r}")

    if not saw_end:
        raise ParseError(len(text.splitlines()) or 1, "missing End section")
    if pending_objective:
        joined = " ".join(pending_objective)
        if ":" not in joined:
            raise ParseError(objective_line, "objective must be written as 'obj: <terms>'")
        _label, body = joined.split(":", 1)
        objective = _parse_terms(body, objective_line)

    # the emitter writes one bounds line per variable in declaration order,
    # so reading Bounds first reproduces that order; anything else follows
    # in order of appearance
    for name in bounds:
        note(name)
    for name, _coeff in objective:
        note(name)
    for _name, coeffs, _sense, _rhs in constraints:
        for name, _coeff in coeffs:
            note(name)
    for name in integers:
        note(name)

    model = LinearModel()
    refs = {}
    integer_set = set(integers)
    for name in order:
        lower, upper = bounds.get(name, (0.0, None))
        refs[name] = model.add_variable(
            name, (), lower=lower, upper=upper, integer=name in integer_set
        )
    for name, coeff in objective:
        model.add_objective(refs[name], coeff)
    for name, coeffs, sense, rhs in constraints:
        model.add_constraint(name, [(refs[n], c) for n, c in coeffs], sense, rhs)
    return model


def _parse_constraint(line: str, line_no: int):
    if ":" not in line:
        raise ParseError(line_no, "constraint must be written as 'name: <terms> <sense> <rhs>'")
    name, rest = line.split(":", 1)
    name = name.strip()
    if not _NAME.match(name):
        raise ParseError(line_no, f"invalid constraint name {name!r}")
    match = re.search(r"(<=|>=|=)", rest)
    if not match:
        raise ParseError(line_no, "constraint has no <=, >= or = sense")
    sense = {"<=": LESS_EQUAL, ">=": GREATER_EQUAL, "=": EQUAL}[match.group(1)]
    body, rhs_text = rest[: match.start()], rest[match.end() :]
    rhs = _parse_number(rhs_text.strip(), line_no)
    coeffs = _parse_terms(body, line_no)
    if not coeffs:
        raise ParseError(line_no, "constraint has no terms")
    return name, coeffs, sense, rhs


def _parse_terms(body: str, line_no: int) -> list[tuple[str, float]]:
    tokens = body.split()
    terms: list[tuple[str, float]] = []
    sign = 1.0
    coeff: float | None = None
    for token in tokens:
        if token == "+":
            _flush_requires_complete(coeff, line_no)
            sign = 1.0
        elif token == "-":
            _flush_requires_complete(coeff, line_no)
            sign = -1.0
        elif _NAME.match(token):
            value = sign if coeff is None else coeff
            terms.append((token, value))
            sign = 1.0
            coeff = None
        else:
            if coeff is not None:
                raise ParseError(line_no, f"two consecutive numbers near {token!r}")
            coeff = sign * _parse_number(token, line_no)
            sign = 1.0
    if coeff is not None:
        raise ParseError(line_no, "dangling coefficient at end of expression")
    return terms


def _flush_requires_complete(coeff, line_no: int):
    if coeff is not None:
        raise ParseError(line_no, "operator immediately after a coefficient")


def _parse_bound(line: str, line_no: int):
    tokens = line.split()
    if len(tokens) == 2 and tokens[1].lower() == "free":
        name = tokens[0]
        _require_name(name, line_no)
        return name, None, None
    if len(tokens) == 3:
        name, op, value = tokens
        _require_name(name, line_no)
        bound = _parse_number(value, line_no)
        if op == ">=":
            return name, bound, None
        if op == "<=":
            return name, 0.0, bound
        raise ParseError(line_no, f"unknown bound operator {op!r}")
    if len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<=":
        low = _parse_number(tokens[0], line_no)
        name = tokens[2]
        _require_name(name, line_no)
        high = _parse_number(tokens[4], line_no)
        return name, None if math.isinf(low) else low, None if math.isinf(high) else high
    raise ParseError(line_no, f"unrecognised bound line {line!r}")


def _require_name(token: str, line_no: int):
    if not _NAME.match(token):
        raise ParseError(line_no, f"invalid variable name {token!r}")


def _parse_number(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(line_no, f"expected a number, got {token!r}") from None
