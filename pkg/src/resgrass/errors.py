"""Exception hierarchy shared by every module."""


class ResgrassError(Exception):
    """Base class for all errors raised by resgrass."""


class DimensionMismatch(ResgrassError, ValueError):
    """Operands live on different polarized spaces or have the wrong shape."""


class InvariantViolation(ResgrassError, ValueError):
    """A value does not satisfy the invariant of the type it claims to be."""


class InvalidExponent(ResgrassError, ValueError):
    """A Schatten exponent outside the admissible range."""


class RankDeficient(ResgrassError, ValueError):
    """A frame does not have linearly independent columns."""


class NotInChartDomain(ResgrassError, ValueError):
    """The subspace lies outside the domain of the requested chart."""


class ConfigError(ResgrassError, ValueError):
    """Invalid experiment configuration."""
