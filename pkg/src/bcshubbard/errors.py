"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Base class for rejected parameter sets."""

    bound = "invalid"


class NonPositiveBeta(ValidationError):
    bound = "beta > 0"


class NonPositiveGamma(ValidationError):
    bound = "gamma > 0"


class NonFinite(ValidationError):
    bound = "all parameters finite"


class BracketFailure(RuntimeError):
    """No sign change where the stationary-point structure guarantees one."""


class PreconditionViolated(ValueError):
    pass


class OutsideWindow(ValueError):
    """Density lies outside the coexistence interval [d-, d+]."""


class DimensionTooLarge(ValueError):
    pass


class NoTransition(RuntimeError):
    """r_beta vanishes over the whole scanned temperature range."""
