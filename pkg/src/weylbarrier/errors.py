"""Exception hierarchy shared by all modules."""


class WeylError(Exception):
    """Base class for every error raised by the package."""


class DomainError(WeylError, ValueError):
    """Input outside the physical domain (e.g. no propagating incoming wave)."""


class SingularityError(WeylError, ArithmeticError):
    """A denominator vanishes: grazing incidence, E = V0, resonant 1 + alpha, ..."""


class RegimeError(WeylError, ValueError):
    """Operation is not defined in the energy zone of the given configuration."""


class DivergentSeriesError(WeylError, ArithmeticError):
    """A multiple-reflection series was asked for a sum it does not have."""


class ResolutionError(WeylError, ValueError):
    """Quadrature or grid too coarse for the requested evaluation."""
