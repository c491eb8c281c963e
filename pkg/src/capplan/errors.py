"""Exception hierarchy shared across the package.

Every error raised on a user-facing path derives from :class:`PlanError`
so the CLI can map failures to exit codes in one place.
"""

from __future__ import annotations


class PlanError(Exception):
    """Base class for all errors raised by this package."""


# --- scenario loading ------------------------------------------------------


class MissingFile(PlanError):
    """A required scenario CSV file is absent."""


class MalformedRow(PlanError):
    """A CSV row could not be parsed.

    Carries enough context (file, line, column) to point at the exact cell.
    """

    def __init__(self, file: str, line: int, column: str, reason: str):
        self.file = file
        self.line = line
        self.column = column
        super().__init__(f"{file}:{line} column '{column}': {reason}")


class BrokenReference(PlanError):
    """A row references an entity that does not exist."""


class InvariantViolation(PlanError):
    """Loaded data violates a scenario invariant; the message names the rule."""


class ScenarioWarning(UserWarning):
    """Non-fatal data issue detected while loading or building."""


# --- linear models and solver ----------------------------------------------


class DuplicateVariable(PlanError):
    """A (group, index) pair was registered twice in one model."""


class BoundError(PlanError):
    """Variable bounds are contradictory (lower > upper)."""


class DuplicateCoefficient(PlanError):
    """A constraint listed the same variable twice."""


class TooLargeForBundledSolver(PlanError):
    """Model exceeds the bundled solver's size limits; emit an LP file instead."""


class NumericalFailure(PlanError):
    """The bundled solver could not complete reliably."""


class ParseError(PlanError):
    """An LP file did not conform to the emitted dialect."""

    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


# --- formulation builders ---------------------------------------------------


class WrongMethod(PlanError):
    """An asset's investment method is incompatible with the requested build."""


class MissingProfile(PlanError):
    """No availability profile found for a producer time step."""


class MissingVintageProfile(PlanError):
    """No vintage-specific profile found and the fallback is disabled."""


class UnknownPolicy(PlanError):
    """Unrecognised profile-collapse policy name."""


# --- analysis ----------------------------------------------------------------


class EnumerationTooLarge(PlanError):
    """The brute-force search space exceeds the enumeration cap."""


class EmptySelection(PlanError):
    """A comparison was requested over an empty set of methods."""
