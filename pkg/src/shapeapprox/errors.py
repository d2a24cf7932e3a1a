"""Exception types shared across the package."""


class ShapeApproxError(Exception):
    """Base class for all package errors."""


class BasisError(ShapeApproxError):
    """Operation received a polynomial in an unexpected basis or degree."""


class DomainError(ShapeApproxError):
    """Evaluation point outside the valid domain of the representation."""


class BackendError(ShapeApproxError):
    """Mixed exact-rational and float scalar backends in one operation."""


class DegreeCapError(ShapeApproxError):
    """Result degree would exceed the configured cap."""


class PrecisionError(ShapeApproxError):
    """Floating-point precision was insufficient for a certified step."""


class RegimeError(ShapeApproxError):
    """Parameters outside the regime where a construction is defined."""


class SolverError(ShapeApproxError):
    """Linear-programming solver failed to converge."""
