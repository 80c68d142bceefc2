"""Exception types shared across the package."""


class SfentropyError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergent(SfentropyError):
    """An adaptive integral exhausted its panel budget before meeting tolerance."""


class NonFinite(SfentropyError):
    """An integrand produced NaN or Inf."""


class InvalidModelParameters(SfentropyError, ValueError):
    """Model constructed with non-positive charge, exponent or frequency."""


class NegativeDistribution(SfentropyError):
    """A distribution failed its positivity scan; its entropy is undefined."""


class DivergentNorm(SfentropyError):
    """The normalization integral of a distribution failed to converge."""


class ConfigError(SfentropyError):
    """Malformed run configuration (file or command line)."""
