"""Multi-year capacity-expansion planning toolkit.

Builds three linear-programming formulations of the same investment
problem (simple, vintage and compact unit accounting) from one scenario
data model, solves them with a bundled desk-scale solver or emits LP
files for external ones, and cross-checks the formulations against a
brute-force oracle.
"""

from .analysis import ComparisonReport, SizeReport, compare_methods, size_report
from .formulations import build_compact, build_simple, build_vintage
from .loader import load_scenario
from .oracle import oracle_solve
from .scenario import Scenario

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "Scenario",
    "SizeReport",
    "build_compact",
    "build_simple",
    "build_vintage",
    "compare_methods",
    "load_scenario",
    "oracle_solve",
    "size_report",
    "__version__",
]
