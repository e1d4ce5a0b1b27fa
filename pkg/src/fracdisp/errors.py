"""Exception and warning types shared across the package."""


class FracdispError(Exception):
    """Base class for all package errors."""


class PoleError(FracdispError, ValueError):
    """Evaluation requested exactly at a pole of the function."""


class RangeError(FracdispError, ValueError):
    """Argument outside the numerically representable range (overflow)."""


class DomainError(FracdispError, ValueError):
    """Argument outside the documented domain of an operation."""


class ConvergenceError(FracdispError, RuntimeError):
    """An iterative evaluation failed to reach its tolerance within its cap."""


class QuadratureError(FracdispError, RuntimeError):
    """A quadrature did not converge to the committed accuracy."""


class DegenerateInputError(FracdispError, ValueError):
    """Input data carries no information for the requested operation."""


class SupportTruncationWarning(UserWarning):
    """Sampled profile does not decay to tolerance at the grid boundary."""


class SpectralLeakageWarning(UserWarning):
    """Measurable spectral mass lies outside the configured dyadic range."""
