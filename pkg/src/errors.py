# src/errors.py
from typing import List, Optional


class HKTBraneError(Exception):
    """Base class for all library errors."""
    pass


# quat
class QuaternionDimensionError(HKTBraneError):
    """Raised when a dimension is not a multiple of four."""
    pass


# exterior
class FormDegreeError(HKTBraneError):
    """Raised when a form has the wrong degree for an operation."""
    pass


class DimensionMismatchError(HKTBraneError):
    """Raised when operands live on spaces of different dimension."""
    pass


class SingularityProximityError(HKTBraneError):
    """Raised when a finite-difference stencil would touch an excluded set."""

    def __init__(self, message: str, distance: Optional[float] = None):
        super().__init__(message)
        self.distance = distance


class NonPositiveMetricError(HKTBraneError):
    """Raised when a metric is not symmetric positive-definite."""
    pass


# geom
class SingularMetricError(HKTBraneError):
    """Raised when the metric cannot be inverted at a point."""
    pass


class ExcludedPathError(HKTBraneError):
    """Raised when a transport path meets the excluded set."""
    pass


# brane
class DegenerateTauError(HKTBraneError):
    """Raised for a tau map with p1 = p2 = 0."""
    pass


class SingularLocusError(HKTBraneError):
    """Raised when a field is evaluated on a brane locus."""
    pass


class QuadratureResolutionError(HKTBraneError):
    """Raised when the estimated quadrature error exceeds the tolerance."""

    def __init__(self, message: str, estimated_error: float):
        super().__init__(message)
        self.estimated_error = estimated_error


# calib
class InsufficientMaximizersError(HKTBraneError):
    """Raised when too few distinct maximizers exist to estimate a dimension."""
    pass


# cli
class ConfigError(HKTBraneError):
    """
    Raised for an invalid run configuration.

    Args:
        message: Human readable summary
        diagnostics: One entry per problem, "line L: field: reason"
    """

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = diagnostics or []
        detail = "; ".join(self.diagnostics)
        super().__init__(f"{message}: {detail}" if detail else message)
