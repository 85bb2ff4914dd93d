"""Exception types shared across the package."""


class QaffineError(Exception):
    """Base class for errors raised by this package."""


class StructureError(QaffineError):
    """A presentation is missing data (rules, Hopf entries) needed by an operation."""


class ParseError(QaffineError):
    """Syntax error in an input expression; carries the offending position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ConsistencyError(QaffineError):
    """An internal identity that must hold failed; signals an engine bug."""


class SearchExhaustedError(QaffineError):
    """Bounded rewriting search ended without reaching the required form."""
