"""Exception types raised across the package."""


class SopError(Exception):
    """Base class for all errors raised by sopkit."""


class UnboundVariable(SopError):
    pass


class ArityMismatch(SopError):
    pass


class TooManyVariables(SopError):
    pass


class LevelTooSmall(SopError):
    pass


class NotPrimedFragment(SopError):
    pass


class WrongLevel(SopError):
    pass


class WrongRing(SopError):
    pass


class ArityTooSmall(SopError):
    pass


class StepLimitExceeded(SopError):
    """Raised by :func:`sopkit.rewrite.reduce` once the step budget is spent.

    The partially reduced term and trace are kept on the exception.
    """

    def __init__(self, message, term=None, trace=None):
        super().__init__(message)
        self.term = term
        self.trace = trace or []


class UnsupportedScalar(SopError):
    pass


class DomainError(SopError, ValueError):
    pass


class WidthMismatch(SopError):
    pass


class CircuitSyntaxError(SopError):
    def __init__(self, message, line, col=1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class IndexOutOfRange(CircuitSyntaxError):
    pass
