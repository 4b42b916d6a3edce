# src/brane/mbrane.py
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from config import settings
from src.errors import QuadratureResolutionError
from src.exterior import AltForm, FormField, ScalarField, central_difference, hodge_star
from static.constants import FLUX_NORMALIZATION_M5, QUADRATURE_TOLERANCE, logger

TANGENT_STEP = 1e-5


class MBraneKind(Enum):
    M2 = "M2"
    M5 = "M5"


# (longitudinal dimension, transverse dimension, overall warp exponent)
_GEOMETRY = {
    MBraneKind.M2: (3, 8, 1.0 / 3.0),
    MBraneKind.M5: (6, 5, 2.0 / 3.0),
}


@dataclass(frozen=True)
class MBraneSolution:
    """
    M-brane ds² = h^c (h⁻¹ ds²(ℝ^(1,p)) + ds²(ℝᵈ)) with h = 1 + q/|y|^(d−2).

    Only the transverse data are stored: the harmonic function and the
    closed transverse flux, F = −½⋆₅dh for the M-5 and the dual flux
    −½⋆₈dh for the M-2.
    """
    kind: MBraneKind
    q: float

    @property
    def longitudinal_dimension(self) -> int:
        return _GEOMETRY[self.kind][0]

    @property
    def transverse_dimension(self) -> int:
        return _GEOMETRY[self.kind][1]

    @property
    def warp_exponent(self) -> float:
        return _GEOMETRY[self.kind][2]

    @property
    def power(self) -> int:
        return self.transverse_dimension - 2

    def h(self, y: np.ndarray) -> float:
        return 1.0 + self.q / float(np.linalg.norm(y)) ** self.power

    def dh(self, y: np.ndarray) -> AltForm:
        y = np.asarray(y, dtype=float)
        r = float(np.linalg.norm(y))
        return AltForm(self.transverse_dimension, 1, -self.power * self.q * y / r ** (self.power + 2))

    @property
    def harmonic(self) -> ScalarField:
        return ScalarField(self.transverse_dimension, self.h, _radius)

    @property
    def flux(self) -> FormField:
        """The transverse flux −½⋆dh, of degree d − 1."""
        d = self.transverse_dimension
        return FormField(d, lambda y: -0.5 * hodge_star(None, self.dh(y)), _radius, degree=d - 1)

    def metric_diagonal(self, y: Sequence[float]) -> np.ndarray:
        """
        Diagonal of the 11d metric at transverse point y, mostly plus.

        Longitudinal entries h^(c−1) (time negative), transverse entries h^c.
        """
        h = self.harmonic(y)
        c = self.warp_exponent
        longitudinal = np.full(self.longitudinal_dimension, h ** (c - 1.0))
        longitudinal[0] *= -1.0
        return np.concatenate([longitudinal, np.full(self.transverse_dimension, h ** c)])

    def laplacian_residual(self, y: Sequence[float], step: Optional[float] = None) -> float:
        """|Δh| at y by second central differences."""
        step = settings.FD_STEP if step is None else step
        field = self.harmonic
        y = field.point(y)
        field.require_clearance(y, 2.0 * step)
        centre = field(y)
        total = 0.0
        for m in range(self.transverse_dimension):
            shift = np.zeros_like(y)
            shift[m] = step
            total += (field(y + shift) - 2.0 * centre + field(y - shift)) / step ** 2
        return abs(total)


def _radius(y: np.ndarray) -> float:
    return float(np.linalg.norm(y))


def m_brane(kind: MBraneKind, q: float) -> MBraneSolution:
    """
    Raises:
        ValueError: If q is not positive
    """
    if not q > 0:
        raise ValueError(f"Charge parameter must be positive, got {q}")
    return MBraneSolution(MBraneKind(kind), float(q))


def _sphere_point(angles: np.ndarray, radius: float) -> np.ndarray:
    t1, t2, t3, t4 = angles
    return radius * np.array([
        np.cos(t1),
        np.sin(t1) * np.cos(t2),
        np.sin(t1) * np.sin(t2) * np.cos(t3),
        np.sin(t1) * np.sin(t2) * np.sin(t3) * np.cos(t4),
        np.sin(t1) * np.sin(t2) * np.sin(t3) * np.sin(t4),
    ])


def _sphere_integral(flux: FormField, radius: float, resolution: int) -> float:
    # Gauss-Legendre in the polar angles, midpoint rule in the periodic one
    nodes, weights = np.polynomial.legendre.leggauss(resolution)
    polar = 0.5 * np.pi * (nodes + 1.0)
    polar_weights = 0.5 * np.pi * weights
    count = 2 * resolution
    azimuth = (np.arange(count) + 0.5) * 2.0 * np.pi / count
    azimuth_weight = 2.0 * np.pi / count

    total = 0.0
    for i, t1 in enumerate(polar):
        for j, t2 in enumerate(polar):
            for k, t3 in enumerate(polar):
                weight = polar_weights[i] * polar_weights[j] * polar_weights[k] * azimuth_weight
                for t4 in azimuth:
                    angles = np.array([t1, t2, t3, t4])
                    y = _sphere_point(angles, radius)
                    tangents = central_difference(lambda a: _sphere_point(a, radius), angles, TANGENT_STEP).T
                    orientation = np.sign(np.linalg.det(np.column_stack([y / radius, tangents])))
                    total += weight * orientation * flux(y).evaluate(tangents)
    return total


def flux_integral(sol: MBraneSolution, radius: float, resolution: Optional[int] = None) -> float:
    """
    ∫ F over the radius-R sphere S⁴ ⊂ ℝ⁵, outward orientation.

    Args:
        sol: An M-5 solution
        radius: Sphere radius
        resolution: Gauss-Legendre nodes per polar angle

    Returns:
        The flux

    Raises:
        QuadratureResolutionError: If the estimated relative error exceeds 1%
    """
    if sol.kind is not MBraneKind.M5:
        raise ValueError("The flux integral is only available for the M-5 brane")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    resolution = settings.QUADRATURE_RESOLUTION if resolution is None else resolution
    if resolution < 3:
        raise QuadratureResolutionError(f"Resolution {resolution} is too coarse", estimated_error=float("inf"))

    flux = sol.flux
    fine = _sphere_integral(flux, radius, resolution)
    coarse = _sphere_integral(flux, radius, resolution - 2)
    error = abs(fine - coarse) / max(abs(fine), 1e-300)
    logger.debug(f"Flux at R={radius}: {fine:.10f} (coarse {coarse:.10f}, relative error {error:.2e})")
    if error > QUADRATURE_TOLERANCE:
        raise QuadratureResolutionError(
            f"Quadrature at resolution {resolution} has estimated error {error:.2%}", estimated_error=error
        )
    return fine


def flux_charge(sol: MBraneSolution, radius: float, resolution: Optional[int] = None) -> float:
    """
    M-5 charge: the flux divided by FLUX_NORMALIZATION_M5, so q₅ = 1 gives 1.
    """
    return flux_integral(sol, radius, resolution) / FLUX_NORMALIZATION_M5
