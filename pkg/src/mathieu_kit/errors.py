"""Exception types shared across the package."""


class MathieuKitError(Exception):
    """Base class for all library errors."""


class DomainError(MathieuKitError):
    """A parameter is outside the mathematical domain of an operation."""


class ConvergenceError(MathieuKitError):
    """A convergence guard failed: the requested sum or integral diverges.

    The message names the violated guard so callers (and the CLI) can
    report exactly which constraint was broken.
    """


class ToleranceNotReachedError(MathieuKitError):
    """The term or node budget ran out before the tolerance was certified.

    Carries the best value and bound achieved so far in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PrecisionLossError(MathieuKitError):
    """Cancellation destroyed all significant digits of a result."""


class QuadratureError(MathieuKitError):
    """The quadrature engine could not certify the requested tolerance."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
