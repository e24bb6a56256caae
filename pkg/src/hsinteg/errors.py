"""Shared exception types.

The CLI maps UsageError (bad input) to exit code 1 and ResourceLimitError
(guard tripped, no verdict) to exit code 2.  InternalCheckError signals a
failed self-verification and always indicates a bug.
"""


class UsageError(ValueError):
    """Invalid input: bad syntax, mismatched contexts, unsupported request."""


class ParseError(UsageError):
    """Syntax error in a polynomial or problem description."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A configured guard (degree, term count, pair count, timeout) tripped."""


class InternalCheckError(RuntimeError):
    """A mandatory self-check failed; the computed result cannot be trusted."""
