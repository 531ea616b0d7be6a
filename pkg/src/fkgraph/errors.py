"""Exception types shared across the package."""

from __future__ import annotations


class FkGraphError(Exception):
    """Base class for all package errors."""


class ParseError(FkGraphError):
    """Malformed graph input. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(FkGraphError):
    """A configured size cap (vertices, pairs, points) was exceeded."""


class InternalInvariantError(FkGraphError):
    """A structural fact the theory guarantees failed to hold; carries a witness."""


class ExactnessError(InternalInvariantError):
    """A six-term sequence failed exactness at some position."""
