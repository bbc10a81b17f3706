"""
Error types shared by every computation module.

Computation code raises these; only the command-line layer turns them into
exit statuses.
"""


class MtcError(Exception):
    """Base class for all engine errors."""


class UsageError(MtcError, ValueError):
    """An operation was called with arguments outside its contract."""


class IntegrityError(MtcError):
    """An algebraic identity that must hold (d^2 = 0, lower <= upper, ...) failed."""


class ParseError(MtcError):
    """A model file could not be parsed; carries the 1-based location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")
