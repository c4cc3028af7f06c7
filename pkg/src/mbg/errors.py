"""Exception hierarchy shared by every module."""


class MbgError(Exception):
    """Base class for all errors raised by :mod:`mbg`."""


class DomainError(MbgError, ValueError):
    """A parameter lies outside the region where a quantity is defined."""


class PoleError(DomainError):
    """A gamma-type factor hits a pole."""


class DensityUndefinedError(DomainError):
    """The generator is non-positive where the density must be evaluated."""


class SupportError(DomainError):
    """A point lies outside the support of the distribution."""


class ConvergenceError(MbgError):
    """A truncated series or a quadrature failed to reach its tolerance."""


class EstimatorUnreliableError(MbgError):
    """Importance weights are degenerate (effective sample size collapsed)."""
