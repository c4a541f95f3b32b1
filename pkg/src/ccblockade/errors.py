"""Exception hierarchy shared across the package."""


class BlockadeError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(BlockadeError, ValueError):
    pass


class DimensionMismatchError(BlockadeError, ValueError):
    pass


class InvalidStateError(BlockadeError, ValueError):
    """A matrix failed the density-matrix checks (Hermiticity, trace, positivity)."""


class ParameterError(BlockadeError, ValueError):
    pass


class DegenerateCubicError(BlockadeError, ArithmeticError):
    """The two-excitation cubic has (near-)coincident roots.

    The trigonometric closed form is ill-conditioned there; call with
    ``allow_fallback=True`` to use dense diagonalization instead.
    """


class RootNotFoundError(BlockadeError, ArithmeticError):
    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class NonUniqueSteadyStateError(BlockadeError, ArithmeticError):
    pass


class UndefinedCorrelationError(BlockadeError, ArithmeticError):
    """Mean occupation too small for g2(0) to be meaningful."""


class ConvergenceError(BlockadeError, ArithmeticError):
    pass


class PreconditionError(BlockadeError, ValueError):
    pass


class ResonanceSingularityError(BlockadeError, ArithmeticError):
    pass


class ConfigError(BlockadeError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SweepAbortedError(BlockadeError, RuntimeError):
    """Too many grid points failed for the sweep to be useful."""
