# src/geom/connection.py
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config import settings
from src.errors import DimensionMismatchError, FormDegreeError, SingularMetricError
from src.exterior import FormField, MetricField, central_difference, zero_form_field
from static.constants import logger

# Condition number above which g is treated as singular
MAX_CONDITION = 1e12


def _inverse(g: np.ndarray) -> np.ndarray:
    try:
        cond = np.linalg.cond(g)
    except np.linalg.LinAlgError:
        raise SingularMetricError("Metric is not invertible")
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMetricError(f"Metric condition number {cond:.3g} is too large")
    return np.linalg.inv(g)


def christoffel(g: MetricField, x: Sequence[float], step: Optional[float] = None) -> np.ndarray:
    """
    Levi-Civita symbols Γ^a_{bc} by central differences of g.

    The derivative index is b: ∇_b V^a = ∂_b V^a + Γ^a_{bc} V^c.

    Args:
        g: Metric field
        x: Point farther than 2·step from the excluded set
        step: Difference step, defaults to settings.FD_STEP

    Returns:
        Array Γ[a, b, c], symmetric in (b, c)

    Raises:
        SingularMetricError: If g(x) cannot be inverted
    """
    step = settings.FD_STEP if step is None else step
    x = g.point(x)
    g.require_clearance(x, 2.0 * step)
    inverse = _inverse(g(x))
    # dg[b, d, c] = ∂_b g_dc
    dg = central_difference(g, x, step)
    lowered = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    # lowered[d, b, c] = ½(∂_b g_dc + ∂_c g_db − ∂_d g_bc)
    return np.einsum("ad,dbc->abc", inverse, lowered)


@dataclass(frozen=True)
class TorsionConnection:
    """
    Metric connection with totally antisymmetric torsion,
    Γ±^a_{bc} = Γ^a_{bc} ± κ g^{ad} H_{dbc}.

    The contorsion factor κ defaults to the value calibrated on the
    NS-5 anchor (see src.geom.conventions).
    """
    metric: MetricField
    torsion: FormField
    sign: int = 1
    contorsion: Optional[float] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.torsion.degree != 3:
            raise FormDegreeError(f"Torsion must be a 3-form, got degree {self.torsion.degree}")
        if self.torsion.dimension != self.metric.dimension:
            raise DimensionMismatchError("Metric and torsion live on different charts")
        if self.contorsion is None:
            from src.geom.conventions import connection_conventions
            object.__setattr__(self, "contorsion", connection_conventions().contorsion)

    @property
    def dimension(self) -> int:
        return self.metric.dimension

    def with_sign(self, sign: int) -> "TorsionConnection":
        return TorsionConnection(self.metric, self.torsion, sign, self.contorsion)

    def distance(self, x: np.ndarray) -> float:
        return min(self.metric.distance(x), self.torsion.distance(x))


def levi_civita(metric: MetricField) -> TorsionConnection:
    """The torsion-free connection of a metric."""
    return TorsionConnection(metric, zero_form_field(metric.dimension, 3), 1, 0.0)


def connection_coeffs(c: TorsionConnection, x: Sequence[float], step: Optional[float] = None) -> np.ndarray:
    """
    Coefficients Γ±^a_{bc} of a torsion connection.

    Args:
        c: The connection
        x: Chart point
        step: Difference step for the Levi-Civita part

    Returns:
        Array Γ[a, b, c] with b the derivative index
    """
    gamma = christoffel(c.metric, x, step)
    if c.contorsion == 0.0:
        return gamma
    inverse = np.linalg.inv(c.metric(x))
    H = c.torsion(x).to_tensor()
    return gamma + c.sign * c.contorsion * np.einsum("ad,dbc->abc", inverse, H)


def torsion_tensor(c: TorsionConnection, x: Sequence[float], step: Optional[float] = None) -> np.ndarray:
    """Lowered antisymmetric part ½(Γ_{abc} − Γ_{acb})."""
    gamma = np.einsum("ad,dbc->abc", c.metric(x), connection_coeffs(c, x, step))
    return 0.5 * (gamma - gamma.transpose(0, 2, 1))


def covariant_derivative_of_metric(
    c: TorsionConnection, x: Sequence[float], step: Optional[float] = None
) -> np.ndarray:
    """
    (∇_b g)_{ac} = ∂_b g_ac − Γ^d_{ba} g_dc − Γ^d_{bc} g_ad, indexed [b, a, c].
    """
    step = settings.FD_STEP if step is None else step
    x = c.metric.point(x)
    g = c.metric(x)
    gamma = connection_coeffs(c, x, step)
    dg = central_difference(c.metric, x, step)
    term = np.einsum("dba,dc->bac", gamma, g)
    return dg - term - term.transpose(0, 2, 1)


def covariant_derivative_of_J(
    c: TorsionConnection,
    J: np.ndarray,
    x: Sequence[float],
    step: Optional[float] = None,
) -> np.ndarray:
    """
    Covariant derivative of a constant endomorphism field J.

    (∇_b J)^a_c = Γ^a_{bd} J^d_c − Γ^d_{bc} J^a_d, i.e. [Γ_b, J] per direction.

    Args:
        c: The connection
        J: Constant n×n matrix, for instance a member of a hypercomplex triple
        x: Chart point
        step: Difference step

    Returns:
        Array [b, a, c]; zero iff J is parallel at x
    """
    J = np.asarray(J, dtype=float)
    if J.shape != (c.dimension, c.dimension):
        raise DimensionMismatchError(f"Endomorphism of shape {J.shape} on R^{c.dimension}")
    gamma = connection_coeffs(c, x, step)
    # (Γ_b)^a_d = Γ[a, b, d]
    blocks = gamma.transpose(1, 0, 2)
    result = blocks @ J - J @ blocks
    logger.debug(f"|∇J| = {np.max(np.abs(result)):.3e} at x = {np.round(x, 4).tolist()}")
    return result
