from .lpfile import emit_lp, parse_lp, parse_lp_text, render_lp
from .model import (
    EQUAL,
    GREATER_EQUAL,
    LESS_EQUAL,
    STATUS_INFEASIBLE,
    STATUS_ITERATION_LIMIT,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    Constraint,
    LinearModel,
    Solution,
    VarRef,
    canonical_names,
    structurally_equal,
)
from .solver import (
    MODE_CONTINUOUS,
    MODE_INTEGER,
    SolveOptions,
    solve,
)

__all__ = [
    "Constraint",
    "LinearModel",
    "Solution",
    "SolveOptions",
    "VarRef",
    "EQUAL",
    "GREATER_EQUAL",
    "LESS_EQUAL",
    "MODE_CONTINUOUS",
    "MODE_INTEGER",
    "STATUS_INFEASIBLE",
    "STATUS_ITERATION_LIMIT",
    "STATUS_OPTIMAL",
    "STATUS_UNBOUNDED",
    "canonical_names",
    "emit_lp",
    "parse_lp",
    "parse_lp_text",
    "render_lp",
    "solve",
    "structurally_equal",
]
