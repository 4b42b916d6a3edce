# src/geom/conventions.py
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from src.errors import HKTBraneError
from src.exterior import AltForm, FormField, MetricField, hodge_star
from src.geom.connection import TorsionConnection, covariant_derivative_of_J
from src.quat import left_triple, right_triple
from static.constants import logger

# Generic anchor points on ℚ∖{0}, away from the origin
ANCHOR_POINTS: Tuple[Tuple[float, ...], ...] = (
    (0.7, -0.4, 0.5, 0.3),
    (-0.2, 0.9, 0.6, -0.8),
)
# Candidate (orientation of ℚ, contorsion factor) pairs, tried in order
CANDIDATES: Tuple[Tuple[int, float], ...] = ((1, 0.5), (-1, 0.5), (1, 1.0), (-1, 1.0))
ANCHOR_TOLERANCE = 1e-5
ANCHOR_STEP = 1e-4


@dataclass(frozen=True)
class ConnectionConventions:
    """
    Frozen sign conventions for torsion connections.

    Attributes:
        orientation: Orientation of ℚ relative to the basis (1, i, j, k)
        contorsion: Factor κ in Γ± = Γ ± κ g⁻¹H
        anchor_residual: max |∇⁺J|, |∇⁻I| on the NS-5 anchor for this choice
    """
    orientation: int
    contorsion: float
    anchor_residual: float


def anchor_fields(orientation: int) -> Tuple[MetricField, FormField]:
    """
    Transverse NS-5 data on ℚ∖{0}: g = hδ, H = −½⋆dh with h = 1 + 1/|q|².
    """
    def h(q: np.ndarray) -> float:
        return 1.0 + 1.0 / float(q @ q)

    def torsion(q: np.ndarray) -> AltForm:
        dh = AltForm(4, 1, -2.0 * q / float(q @ q) ** 2)
        return -0.5 * hodge_star(None, dh, orientation)

    norm = lambda q: float(np.linalg.norm(q))
    return (
        MetricField(4, lambda q: h(q) * np.eye(4), norm),
        FormField(4, torsion, norm, degree=3),
    )


def anchor_residual(orientation: int, contorsion: float) -> float:
    """Largest of |∇⁺J_r| and |∇⁻I_r| over the anchor points."""
    metric, torsion = anchor_fields(orientation)
    plus = TorsionConnection(metric, torsion, 1, contorsion)
    minus = TorsionConnection(metric, torsion, -1, contorsion)
    residuals: List[float] = []
    for point in ANCHOR_POINTS:
        for J in right_triple(4):
            residuals.append(np.max(np.abs(covariant_derivative_of_J(plus, J, point, ANCHOR_STEP))))
        for I in left_triple(4):
            residuals.append(np.max(np.abs(covariant_derivative_of_J(minus, I, point, ANCHOR_STEP))))
    return float(max(residuals))


@lru_cache(maxsize=1)
def connection_conventions() -> ConnectionConventions:
    """
    Calibrate the orientation and contorsion factor once.

    H = −½⋆dh is fixed; the pair is chosen so that ∇⁺J = 0 and ∇⁻I = 0
    on the NS-5 anchor.

    Raises:
        HKTBraneError: If no candidate satisfies both conditions
    """
    scores = [(anchor_residual(o, k), o, k) for o, k in CANDIDATES]
    for residual, orientation, contorsion in scores:
        logger.debug(f"Anchor candidate orientation={orientation} contorsion={contorsion}: {residual:.3e}")
    best = min(scores)
    if best[0] > ANCHOR_TOLERANCE:
        raise HKTBraneError(
            f"No orientation/contorsion pair makes the NS-5 anchor parallel (best residual {best[0]:.3e})"
        )
    conventions = ConnectionConventions(orientation=best[1], contorsion=best[2], anchor_residual=best[0])
    logger.info(
        f"Connection conventions: orientation={conventions.orientation}, "
        f"contorsion={conventions.contorsion}, anchor residual={conventions.anchor_residual:.2e}"
    )
    return conventions


def quaternion_orientation() -> int:
    return connection_conventions().orientation
