"""Exception types raised across the package."""


class XLMimoError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(XLMimoError, ValueError):
    pass


class SingularityError(XLMimoError, ValueError):
    """Kernel evaluated at coincident source and observation points."""


class DegenerateSpectrumError(XLMimoError, ValueError):
    """Wavevector lattice too small to represent a planar aperture."""


class UndefinedMetricError(XLMimoError, ValueError):
    pass


class SingularGramError(XLMimoError, ValueError):
    """Channel Gram matrix is numerically rank deficient."""


class DivergenceError(XLMimoError, ArithmeticError):
    """Neumann series is not contractive for the given channel."""


class ConfigError(XLMimoError, ValueError):
    pass
