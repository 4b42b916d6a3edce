# src/brane/solution.py
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.exterior import FormField, MetricField, ScalarField, exterior_derivative
from src.geom import TorsionConnection

# Relative distance from the limiting value that still counts as inside a region
REGION_TOLERANCE = 1e-2


@dataclass(frozen=True)
class CommonSectorSolution:
    """
    Transverse data of a common-sector solution ℝ^(1,p) × K.

    Attributes:
        metric: Metric on the transverse chart K
        torsion: Closed 3-form H on K
        dilaton: φ on K
        longitudinal: Name of the flat longitudinal factor, metadata only
        harmonic: Harmonic function the solution is built from, if any
    """
    metric: MetricField
    torsion: FormField
    dilaton: ScalarField
    longitudinal: str = "R^(1,1)"
    harmonic: Optional[ScalarField] = None

    @property
    def dimension(self) -> int:
        return self.metric.dimension

    def distance(self, x: np.ndarray) -> float:
        return min(self.metric.distance(x), self.torsion.distance(x))

    def connection(self, sign: int = 1) -> TorsionConnection:
        return TorsionConnection(self.metric, self.torsion, sign)

    def dilaton_residual(self, x: Sequence[float]) -> float:
        """|e^{2φ} − (det g)^{1/4}| at x."""
        g = self.metric(x)
        return abs(np.exp(2.0 * self.dilaton(x)) - np.linalg.det(g) ** 0.25)

    def closure_residual(self, x: Sequence[float], step: Optional[float] = None) -> float:
        """Largest coefficient of dH at x."""
        return exterior_derivative(self.torsion, x, step).max_norm()

    def asymptotic_profile(self, radius: float) -> Dict[str, Any]:
        """
        Classify a transverse radius against the two asymptotic regions.

        Far away h → 1 and the chart is flat; near the core h·|q|² → 1 and
        the transverse space becomes a cylinder ℝ × S³.

        Args:
            radius: Distance from the core along the first chart axis

        Returns:
            The harmonic function, the throat factor h·|q|² and the region name
        """
        if self.harmonic is None:
            raise ValueError("Solution carries no harmonic function")
        if not radius > 0:
            raise ValueError(f"radius must be positive, got {radius}")
        point = np.zeros(self.harmonic.dimension)
        point[0] = radius
        h = self.harmonic(point)
        throat = h * radius ** 2
        if abs(h - 1.0) < REGION_TOLERANCE:
            region = "flat"
        elif abs(throat - 1.0) < REGION_TOLERANCE:
            region = "throat"
        else:
            region = "intermediate"
        return {"radius": radius, "h": h, "throat_factor": throat, "region": region}


def dilaton_from_metric(metric: MetricField) -> ScalarField:
    """φ with e^{2φ} = (det g)^{1/4}."""
    return ScalarField(metric.dimension, lambda x: 0.125 * np.log(np.linalg.det(metric(x))), metric.distance)
