"""Exception types shared across the package."""

from __future__ import annotations


class TreeMatchError(Exception):
    """Base class for all package-specific errors."""


class FormatError(TreeMatchError):
    """Raised when a text input (graph, tree, end, matching file) is malformed.

    line is 1-based when the error is tied to a specific input line, else None.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(TreeMatchError):
    """Raised when a construction hits its vertex or work budget.

    frontier carries the unfinished boundary (a sorted tuple of vertices)
    when the failing operation has one, so callers can report or resume.
    """

    def __init__(self, message: str, frontier: tuple = ()):
        self.frontier = tuple(frontier)
        super().__init__(message)


class InvariantViolationError(TreeMatchError):
    """Raised when a checked construction invariant fails.

    This signals a bug (or a bad-ray input slipping past a precondition),
    never a normal negative outcome.
    """
