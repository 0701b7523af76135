"""Exception hierarchy shared across the package.

Errors are grouped by how the CLI maps them to exit codes: usage problems
exit 2, domain (mathematical precondition) problems exit 3, data problems
exit 4.
"""

from __future__ import annotations


class LevyskewError(Exception):
    """Base class for all package errors."""


class UsageError(LevyskewError):
    """Bad command-line usage or malformed configuration input."""


class DomainError(LevyskewError):
    """A mathematical precondition is violated (parameter out of range)."""


class UnsupportedOrder(DomainError):
    """A generator coefficient beyond the supported order was requested."""


class QuadratureError(DomainError):
    """A numerical integration failed to converge; never silently ignored."""


class OutOfBounds(DomainError):
    """An option price violates static no-arbitrage bounds."""


class NoConvergence(DomainError):
    """An iterative solver exhausted its iteration budget."""


class DataError(LevyskewError):
    """Problems with user-supplied market data files."""


class ParseError(DataError):
    """A data file could not be parsed; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(DataError):
    """A data file is missing required columns or has a wrong header."""


class InsufficientQuotes(DataError):
    """Not enough quotes to compute an implied forward."""


class MissingWing(DataError):
    """A 25-delta strike cannot be bracketed on one side of the smile."""


class SignMixError(DataError):
    """Skew observations change sign inside a regression window."""
