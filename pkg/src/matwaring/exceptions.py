"""Exception hierarchy shared by every module of the package."""


class WaringError(Exception):
    """Base class for all errors raised by matwaring."""


class ParseError(WaringError, ValueError):
    """Malformed scalar or matrix text.

    ``line`` and ``column`` are 1-based and point into the offending document
    when known.
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DimensionMismatch(WaringError, ValueError):
    pass


class IndexOutOfRange(WaringError, IndexError):
    pass


class NonConvergence(WaringError, ArithmeticError):
    """Root finder could not certify its residuals; retry at higher precision."""


class IllConditioned(WaringError, ArithmeticError):
    """A rank or clustering decision sits too close to its tolerance."""


class Singular(WaringError, ArithmeticError):
    pass


class NotAPowerError(WaringError, ValueError):
    pass


class PreconditionViolated(WaringError, ValueError):
    pass


class OutOfRegime(WaringError, ValueError):
    pass


class BadOrdering(WaringError, ValueError):
    pass


class InvariantViolation(WaringError, AssertionError):
    """An internal postcondition failed; this is a defect, not a user error."""
