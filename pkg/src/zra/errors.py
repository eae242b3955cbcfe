"""Exception and warning types shared across the package."""


class ZraError(Exception):
    """Base class for all package errors."""


class DomainError(ZraError, ValueError):
    """Argument outside the domain where a formula is defined."""


class NonFiniteError(ZraError, ArithmeticError):
    """A series remainder could not be bounded at the requested accuracy."""


class AccuracyError(ZraError, ArithmeticError):
    """The configured evaluation scheme cannot certify the target tolerance."""


class NoSignChange(ZraError, ValueError):
    pass


class TolTooSmall(ZraError, ValueError):
    pass


class NotConsecutive(ZraError, ValueError):
    pass


class NoCriticalFound(ZraError, ArithmeticError):
    pass


class InsufficientZeros(ZraError, ValueError):
    pass


class InsufficientData(ZraError, ValueError):
    pass


class IncompleteTable(ZraError, ValueError):
    """The zero list does not cover the height a computation needs."""


class ZeroCollision(ZraError, ValueError):
    """An evaluation point coincides with a zero ordinate within tolerance."""


class ParseError(ZraError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class OrderError(ZraError, ValueError):
    pass


class SchemaError(ZraError, ValueError):
    pass


class ZraIOError(ZraError, OSError):
    pass


class StepTooCoarse(UserWarning):
    """Scan step is too large for the expected local zero density."""


class MultipleCritical(UserWarning):
    """More than one stationary point was found between two consecutive zeros."""


class DoubleZeroSuspected(UserWarning):
    """|Z'| at a refined zero is small enough to suggest a multiple zero."""
