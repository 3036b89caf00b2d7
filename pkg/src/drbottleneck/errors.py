"""Exception types shared across the toolkit.

Every error carries a short machine-readable ``kind`` tag; the CLI maps these
tags to exit codes.
"""


class SolverError(Exception):
    """Base class for all toolkit errors."""

    kind = "error"


class InvalidInstanceError(SolverError):
    """The combinatorial instance is malformed or infeasible."""

    kind = "invalid-instance"


class DomainError(SolverError):
    """An argument lies outside its documented domain."""

    kind = "domain"


class EnumerationLimitError(SolverError):
    """An exact enumeration was refused because the instance is too large."""

    kind = "scale-guard"


class ConvergenceError(SolverError):
    """An iterative numerical routine failed to converge."""

    kind = "convergence"


class InvariantViolationError(SolverError):
    """A mathematical identity that must hold was violated at runtime."""

    kind = "invariant"


class ScenarioParseError(SolverError):
    """A scenario file could not be parsed.

    ``row`` and ``column`` locate the offending entry when known (0-based,
    header row is row 0).
    """

    kind = "parse"

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column
