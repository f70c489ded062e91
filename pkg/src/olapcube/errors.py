"""Exception hierarchy shared by every module."""
from __future__ import annotations

UINT64_MAX = 2**64 - 1


class OlapError(Exception):
    """Base class for all engine errors."""


class DomainError(OlapError, ValueError):
    """An argument is outside the domain of an operation."""


class IngestionError(DomainError):
    """A fact or detail record could not be loaded."""

    def __init__(self, row_index: int, message: str):
        super().__init__(f"row {row_index}: {message}")
        self.row_index = row_index


class ArithmeticOverflow(OlapError, OverflowError):
    """A count or measure left the unsigned 64-bit range."""


class ParseError(OlapError, ValueError):
    """Syntax error in a view, filter, key or link expression.

    ``column`` is 1-based.
    """

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"{message} at column {column}")
        self.column = column
        self.text = text


def check_u64(value: int, what: str = "value") -> int:
    if value > UINT64_MAX:
        raise ArithmeticOverflow(f"{what} exceeds 64-bit unsigned range")
    return value
