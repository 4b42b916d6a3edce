# src/geom/curvature.py
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from src.errors import ExcludedPathError
from src.geom.connection import TorsionConnection, connection_coeffs
from src.exterior import central_difference
from static.constants import logger


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    """
    Curvature endomorphism R(e_m, e_n) at a point, index raised with g.
    """
    point: np.ndarray
    plane: Tuple[int, int]
    endomorphism: np.ndarray
    metric: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.endomorphism))

    def antisymmetry_residual(self) -> float:
        """‖gR + Rᵀg‖, zero for a metric connection."""
        g, R = self.metric, self.endomorphism
        return float(np.linalg.norm(g @ R + R.T @ g))


def _connection_blocks(c: TorsionConnection, x: np.ndarray, step: float) -> np.ndarray:
    # blocks[m] = (Γ_m)^a_b = Γ[a, m, b]
    return connection_coeffs(c, x, step).transpose(1, 0, 2)


def curvature_tensor(
    c: TorsionConnection,
    x: Sequence[float],
    step: Optional[float] = None,
    richardson: bool = True,
) -> np.ndarray:
    """
    All curvature endomorphisms at x.

    Args:
        c: The connection
        x: Chart point
        step: Outer difference step, defaults to settings.CURVATURE_STEP
        richardson: Extrapolate the outer differences

    Returns:
        Array R[m, n, a, b] = R(e_m, e_n)^a_b
    """
    step = settings.CURVATURE_STEP if step is None else step
    inner = min(settings.FD_STEP, step / 10.0)
    x = c.metric.point(x)
    c.metric.require_clearance(x, step + 2.0 * inner)

    blocks = _connection_blocks(c, x, inner)
    # derivative[m, n] = ∂_m Γ_n
    derivative = central_difference(lambda y: _connection_blocks(c, y, inner), x, step, richardson)
    commutator = np.einsum("mab,nbc->mnac", blocks, blocks)
    return derivative - derivative.transpose(1, 0, 2, 3) + commutator - commutator.transpose(1, 0, 2, 3)


def curvature(
    c: TorsionConnection,
    x: Sequence[float],
    m: int,
    n: int,
    step: Optional[float] = None,
) -> CurvatureSample:
    """
    R(e_m, e_n) = ∂_m Γ_n − ∂_n Γ_m + [Γ_m, Γ_n] as a CurvatureSample.
    """
    x = c.metric.point(x)
    R = curvature_tensor(c, x, step)[m, n]
    return CurvatureSample(point=x, plane=(m, n), endomorphism=R, metric=c.metric(x))


def curvature_samples(c: TorsionConnection, x: Sequence[float], step: Optional[float] = None) -> List[CurvatureSample]:
    """One sample for every coordinate plane m < n at x."""
    x = c.metric.point(x)
    tensor = curvature_tensor(c, x, step)
    g = c.metric(x)
    dimension = c.dimension
    return [
        CurvatureSample(point=x, plane=(m, n), endomorphism=tensor[m, n], metric=g)
        for m in range(dimension) for n in range(m + 1, dimension)
    ]


def _check_path(c: TorsionConnection, path: np.ndarray, clearance: float) -> None:
    for start, end in zip(path[:-1], path[1:]):
        for t in np.linspace(0.0, 1.0, 5):
            point = (1.0 - t) * start + t * end
            if c.distance(point) <= clearance:
                raise ExcludedPathError(
                    f"Transport path passes within {clearance:.3g} of the excluded set near {np.round(point, 4).tolist()}"
                )


def parallel_transport(
    c: TorsionConnection,
    path: np.ndarray,
    frame: np.ndarray,
    substeps: Optional[int] = None,
    step: Optional[float] = None,
) -> np.ndarray:
    """
    Transport a frame along a polyline with fixed-step RK4.

    Solves dV^a/dt = −Γ^a_{bc} ẋ^b V^c on every segment.

    Args:
        c: The connection
        path: K×n array of polyline vertices
        frame: n×p matrix of column vectors at path[0]
        substeps: RK4 steps per segment, defaults to settings.TRANSPORT_SUBSTEPS
        step: Difference step for the connection coefficients

    Returns:
        The transported frame at path[-1]

    Raises:
        ExcludedPathError: If the path meets the excluded set
    """
    substeps = settings.TRANSPORT_SUBSTEPS if substeps is None else substeps
    step = settings.FD_STEP if step is None else step
    path = np.asarray(path, dtype=float)
    V = np.array(frame, dtype=float)
    _check_path(c, path, 2.0 * step)

    def rate(point: np.ndarray, velocity: np.ndarray, state: np.ndarray) -> np.ndarray:
        A = np.einsum("abc,b->ac", connection_coeffs(c, point, step), velocity)
        return -A @ state

    for start, end in zip(path[:-1], path[1:]):
        velocity = end - start
        h = 1.0 / substeps
        for i in range(substeps):
            t = i * h
            x0 = start + t * velocity
            xm = x0 + 0.5 * h * velocity
            x1 = x0 + h * velocity
            k1 = rate(x0, velocity, V)
            k2 = rate(xm, velocity, V + 0.5 * h * k1)
            k3 = rate(xm, velocity, V + 0.5 * h * k2)
            k4 = rate(x1, velocity, V + h * k3)
            V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    logger.debug(f"Transported frame along {len(path) - 1} segments")
    return V


def square_loop(x: Sequence[float], m: int, n: int, side: float) -> np.ndarray:
    """Closed square x → x+εe_m → x+εe_m+εe_n → x+εe_n → x."""
    x = np.asarray(x, dtype=float)
    em, en = np.zeros_like(x), np.zeros_like(x)
    em[m], en[n] = side, side
    return np.array([x, x + em, x + em + en, x + en, x])
