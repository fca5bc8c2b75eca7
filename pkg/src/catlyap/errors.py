"""Exception types raised across catlyap."""


class CatlyapError(Exception):
    """Base class for all library errors."""


class NotUnimodular(CatlyapError, ValueError):
    pass


class NotHyperbolic(CatlyapError, ValueError):
    pass


class NotMonotoneAlongUnstable(CatlyapError, ValueError):
    """Measured directional derivative along the unstable vector is not positive."""


class DegenerateRotation(CatlyapError, ValueError):
    """Polar factors are ill-conditioned because the matrix is (nearly) orthogonal."""


class OutOfRange(CatlyapError, ValueError):
    pass


class StraddlesDiscontinuity(CatlyapError, ValueError):
    """A finite-difference stencil crosses a leaf discontinuity."""


class ResolutionExhausted(CatlyapError, RuntimeError):
    """Adaptive refinement hit its cap before the lift-gap condition held."""


class ConfigError(CatlyapError, ValueError):
    pass
