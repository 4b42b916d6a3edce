# src/brane/superposition.py
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.brane.ns5 import ns5_torsion_at
from src.brane.solution import CommonSectorSolution, dilaton_from_metric
from src.brane.tau_map import TauMap, normalize_tau
from src.errors import DimensionMismatchError, SingularLocusError
from src.exterior import AltForm, FormField, MetricField
from src.quat import ParameterClass
from static.constants import logger

# Relative smallest singular value below which two singular planes are not transverse
TRANSVERSALITY_TOLERANCE = 1e-10
CANONICAL_TOLERANCE = 1e-12
CHART_DIMENSION = 8


@dataclass(frozen=True)
class SuperpositionConfig:
    """
    Finite family of weighted tau maps defining an HKT metric on ℚ² minus
    the singular planes τ⁻¹(0).

    Attributes:
        taus: The maps
        box: Coordinate range used when sampling the chart
        step: Finite-difference step override, None for the settings default
    """
    taus: Tuple[TauMap, ...] = ()
    box: Tuple[float, float] = (-2.0, 2.0)
    step: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(self.taus))
        if self.box[0] >= self.box[1]:
            raise ValueError(f"Empty chart box {self.box}")

    @classmethod
    def from_tuples(cls, entries: Iterable[Tuple[Sequence[float], Sequence[float], Sequence[float], float]],
                    **kwargs) -> "SuperpositionConfig":
        return cls(tuple(TauMap.from_arrays(*entry) for entry in entries), **kwargs)

    def distance(self, x: Sequence[float]) -> float:
        """Distance from x to the nearest singular plane, infinite for an empty config."""
        x = np.asarray(x, dtype=float)
        return min((t.distance(x) for t in self.taus), default=float("inf"))

    def general_position(self) -> bool:
        """True when every pair of singular planes meets transversally in a point."""
        for i, first in enumerate(self.taus):
            for second in self.taus[i + 1:]:
                stacked = np.vstack([first.jacobian(), second.jacobian()])
                singular = np.linalg.svd(stacked, compute_uv=False)
                if singular[-1] <= TRANSVERSALITY_TOLERANCE * singular[0]:
                    return False
        return True

    def parameter_class(self) -> ParameterClass:
        """
        Joint class of the products p̄₁p₂.

        Maps with p̄₁p₂ = 0 are compatible with every class.
        """
        classes = {t.parameter_class() for t in self.taus if not t.product().is_zero()}
        if not classes or classes == {ParameterClass.REAL}:
            return ParameterClass.REAL
        if classes <= {ParameterClass.REAL, ParameterClass.COMPLEX}:
            return ParameterClass.COMPLEX
        if classes == {ParameterClass.IMAGINARY}:
            return ParameterClass.IMAGINARY
        return ParameterClass.QUATERNION

    def scaled(self, factor: float) -> "SuperpositionConfig":
        """Dilate the singular planes by factor, scaling a and r alike."""
        if not factor > 0:
            raise ValueError("Scale factor must be positive")
        taus = tuple(TauMap(t.p1, t.p2, t.a.scale(factor), t.r * factor) for t in self.taus)
        return SuperpositionConfig(taus, (self.box[0] * factor, self.box[1] * factor), self.step)

    def metric_field(self) -> MetricField:
        return MetricField(CHART_DIMENSION, lambda x: build_metric(self, x), self.distance)

    def torsion_field(self) -> FormField:
        return FormField(CHART_DIMENSION, lambda x: build_torsion(self, x), self.distance, degree=3)


def _images(cfg: SuperpositionConfig, x: Sequence[float]) -> List[Tuple[TauMap, np.ndarray]]:
    x = np.asarray(x, dtype=float)
    if x.shape != (CHART_DIMENSION,):
        raise DimensionMismatchError(f"Expected a point of Q^2 as an 8-vector, got shape {x.shape}")
    images = []
    for t in cfg.taus:
        image = t(x)
        if not np.any(image):
            raise SingularLocusError("Point lies on a singular plane tau^-1(0)")
        images.append((t, image))
    return images


def build_metric(cfg: SuperpositionConfig, x: Sequence[float]) -> np.ndarray:
    """
    γ(x) = δ₈ + Σ_τ r² Jᵀ_τ g₀(τ(x)) J_τ with g₀ = |q|⁻²δ.

    Raises:
        SingularLocusError: If x lies on some τ⁻¹(0)
    """
    gamma = np.eye(CHART_DIMENSION)
    for t, image in _images(cfg, x):
        J = t.jacobian()
        gamma += (t.r ** 2 / float(image @ image)) * (J.T @ J)
    return gamma


def build_torsion(cfg: SuperpositionConfig, x: Sequence[float]) -> AltForm:
    """
    H(x) = Σ_τ r² τ*H₀ with H₀ the NS-5 torsion on ℚ∖{0}.

    Raises:
        SingularLocusError: If x lies on some τ⁻¹(0)
    """
    torsion = AltForm.zero(CHART_DIMENSION, 3)
    for t, image in _images(cfg, x):
        torsion = torsion + t.r ** 2 * ns5_torsion_at(image).pullback(t.jacobian())
    return torsion


def _same_map(first: TauMap, second: TauMap) -> bool:
    return all(
        np.allclose(u.as_array(), v.as_array(), rtol=0.0, atol=CANONICAL_TOLERANCE)
        for u, v in ((first.p1, second.p1), (first.p2, second.p2), (first.a, second.a))
    )


def normalize_config(cfg: SuperpositionConfig) -> SuperpositionConfig:
    """
    Replace every map by its canonical form and merge equivalent maps.

    Equivalent maps share a singular plane and pull back the same data,
    so their weights combine as r² = r₁² + r₂².
    """
    merged: List[TauMap] = []
    for t in cfg.taus:
        canonical = normalize_tau(t)
        for index, kept in enumerate(merged):
            if _same_map(kept, canonical):
                merged[index] = TauMap(kept.p1, kept.p2, kept.a, float(np.hypot(kept.r, canonical.r)))
                break
        else:
            merged.append(canonical)
    if len(merged) < len(cfg.taus):
        logger.info(f"Merged {len(cfg.taus) - len(merged)} equivalent tau maps")
    return SuperpositionConfig(tuple(merged), cfg.box, cfg.step)


def assemble_solution(cfg: SuperpositionConfig) -> CommonSectorSolution:
    """
    The common-sector solution ℝ^(1,1) × K of a configuration.

    The dilaton satisfies e^{2φ} = (det γ)^{1/4}. Configurations whose
    singular planes are not in general position are accepted with a warning.
    """
    if not cfg.taus:
        logger.warning("Empty tau configuration, the solution is flat")
    elif not cfg.general_position():
        logger.warning("Singular planes are not in general position, the metric may be incomplete")
    metric = cfg.metric_field()
    return CommonSectorSolution(
        metric=metric,
        torsion=cfg.torsion_field(),
        dilaton=dilaton_from_metric(metric),
        longitudinal="R^(1,1)",
    )
