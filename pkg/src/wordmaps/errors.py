"""Shared exception types."""


class WordmapsError(Exception):
    """Base class for all library errors."""


class DomainError(WordmapsError):
    """An argument violates an operation's precondition."""


class ParseError(WordmapsError):
    """Malformed textual input.

    Carries enough position information to point at the offending spot.
    """

    def __init__(self, message, line=None, column=None, filename=None):
        self.line = line
        self.column = column
        self.filename = filename
        where = ""
        if filename is not None:
            where += f"{filename}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)


class FuelExhaustedError(WordmapsError):
    """A fuel-bounded evaluation ran out of budget before finishing."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExceededError(WordmapsError):
    """A decision procedure hit its resource budget.

    Raised instead of returning a possibly wrong verdict.
    """
