"""Exception types shared across the package."""


class LumpcylError(Exception):
    """Base class for package errors."""


class DomainError(LumpcylError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InvalidLumpError(LumpcylError, ValueError):
    """Coefficient vector does not define a genuine degree-n map
    (vanishing resultant, all-zero vector, or endpoint mismatch)."""


class ConvergenceError(LumpcylError, RuntimeError):
    """A quadrature refinement budget was exhausted before reaching
    the requested tolerance."""


class DivergenceError(LumpcylError, RuntimeError):
    """A quantity grew without bound: divergent path length, or the
    moduli-space metric evaluated inside its singular neighbourhood.
    Distinct from ConvergenceError, which signals numerical failure."""
