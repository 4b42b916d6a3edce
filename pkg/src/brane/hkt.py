# src/brane/hkt.py
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.brane.ns5 import ns5_solution
from src.brane.solution import CommonSectorSolution
from src.brane.superposition import SuperpositionConfig
from src.errors import DimensionMismatchError, HKTBraneError
from src.exterior import FormField, MetricField, exterior_derivative, j_derivation, kahler_form
from src.geom.conventions import ANCHOR_POINTS, ANCHOR_STEP, ANCHOR_TOLERANCE
from src.quat import HypercomplexTriple, left_triple, right_triple
from static.constants import logger

COUPLING_CANDIDATES: Tuple[float, ...] = (-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0)

Source = Union[SuperpositionConfig, CommonSectorSolution]


def triple_sign(triple: HypercomplexTriple) -> int:
    """+1 for the right triple (parallel for ∇⁺), −1 for the left triple (∇⁻)."""
    return 1 if triple.name == "J" else -1


def kahler_field(metric: MetricField, J: np.ndarray) -> FormField:
    """The Hermitian form ω(X, Y) = g(J X, Y) as a field."""
    return FormField(metric.dimension, lambda y: kahler_form(J, metric(y)), metric.distance, degree=2)


def _raw_terms(
    metric: MetricField,
    torsion: FormField,
    J: np.ndarray,
    x: Sequence[float],
    step: Optional[float],
) -> Tuple[np.ndarray, np.ndarray]:
    d_omega = exterior_derivative(kahler_field(metric, J), x, step)
    return d_omega.coefficients, j_derivation(J, torsion(x)).coefficients


@lru_cache(maxsize=1)
def hkt_coupling() -> float:
    """
    Coupling k in dω_r = k·σ·i_{J_r}H, fitted once on the NS-5 anchor.

    The least-squares value over the anchor points and the right triple is
    snapped to the nearest candidate, then the snapped value is checked on
    both triples.

    Raises:
        HKTBraneError: If the anchor is not HKT for the snapped coupling
    """
    solution = ns5_solution()
    terms = [
        _raw_terms(solution.metric, solution.torsion, J, point, ANCHOR_STEP)
        for point in ANCHOR_POINTS for J in right_triple(4)
    ]
    numerator = sum(float(d @ v) for d, v in terms)
    denominator = sum(float(v @ v) for _, v in terms)
    if denominator == 0.0:
        raise HKTBraneError("NS-5 anchor torsion vanishes, cannot fit the HKT coupling")
    fitted = numerator / denominator
    coupling = min(COUPLING_CANDIDATES, key=lambda k: abs(k - fitted))

    residual = max(
        max(hkt_residuals(solution, point, triple, ANCHOR_STEP, coupling))
        for point in ANCHOR_POINTS
        for triple in (right_triple(4), left_triple(4))
    )
    if residual > ANCHOR_TOLERANCE:
        raise HKTBraneError(
            f"NS-5 anchor fails the HKT relation with coupling {coupling} (residual {residual:.3e})"
        )
    logger.info(f"HKT coupling k={coupling} (least squares {fitted:.6f}, anchor residual {residual:.2e})")
    return coupling


def _fields(source: Source) -> Tuple[MetricField, FormField, Optional[float]]:
    if isinstance(source, SuperpositionConfig):
        return source.metric_field(), source.torsion_field(), source.step
    return source.metric, source.torsion, None


def hkt_residuals(
    source: Source,
    x: Sequence[float],
    triple: HypercomplexTriple,
    step: Optional[float] = None,
    coupling: Optional[float] = None,
) -> List[float]:
    """
    Per-member residuals ‖dω_r − k·σ·i_{J_r}H‖ of the HKT relation.

    Args:
        source: A configuration or a solution
        x: Chart point
        triple: The hypercomplex structure tested
        step: Difference step, defaults to the configuration's or the settings value
        coupling: Override of the calibrated coupling k

    Returns:
        Euclidean coefficient norms for r = 1, 2, 3
    """
    metric, torsion, default = _fields(source)
    if triple.dimension != metric.dimension:
        raise DimensionMismatchError(f"Triple on R^{triple.dimension}, solution on R^{metric.dimension}")
    step = default if step is None else step
    factor = (hkt_coupling() if coupling is None else coupling) * triple_sign(triple)
    residuals = []
    for J in triple:
        d_omega, contraction = _raw_terms(metric, torsion, J, x, step)
        residuals.append(float(np.linalg.norm(d_omega - factor * contraction)))
    logger.debug(f"HKT residuals for triple {triple.name}: {residuals}")
    return residuals


def hkt_residual(
    source: Source,
    x: Sequence[float],
    triple: HypercomplexTriple,
    step: Optional[float] = None,
) -> float:
    """Largest of the three HKT residuals; zero when the structure is HKT at x."""
    return max(hkt_residuals(source, x, triple, step))
