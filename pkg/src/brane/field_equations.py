# src/brane/field_equations.py
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from config import settings
from src.brane.solution import CommonSectorSolution
from src.exterior import central_difference
from src.geom import christoffel, connection_conventions, curvature_tensor, levi_civita

EOM_COMPONENTS = ("einstein", "h_equation", "dilaton")


@dataclass(frozen=True)
class EOMResidual:
    """
    Norms of the three common-sector field equations at a point.

    Attributes:
        einstein: ‖R_mn + 2∇_m∇_nφ − ¼H_mpq H_n^pq‖
        h_equation: ‖∇_p(e^{−2φ}H^pmn)‖
        dilaton: |R + 4∇²φ − 4|dφ|² − (1/12)H²|
        step: Difference step used
    """
    einstein: float
    h_equation: float
    dilaton: float
    step: float

    def max(self) -> float:
        return max(self.einstein, self.h_equation, self.dilaton)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _standard_torsion(sol: CommonSectorSolution, y: np.ndarray) -> np.ndarray:
    # String-frame H with ∇± = Γ ± ½g⁻¹H, i.e. twice κ times the stored torsion
    return 2.0 * connection_conventions().contorsion * sol.torsion(y).to_tensor()


def eom_residual(sol: CommonSectorSolution, x: Sequence[float], step: Optional[float] = None) -> EOMResidual:
    """
    Residuals of the string-frame equations of motion on the transverse data.

    Args:
        sol: Solution with metric, torsion and dilaton
        x: Chart point farther than 3·step from the excluded set
        step: Outer difference step, defaults to settings.EOM_STEP

    Returns:
        EOMResidual; all components vanish at second order in step on a solution

    Raises:
        SingularityProximityError: If the stencils come within 3·step of the excluded set
    """
    step = settings.EOM_STEP if step is None else step
    x = sol.metric.point(x)
    sol.metric.require_clearance(x, 3.0 * step)
    inner = min(settings.FD_STEP, step / 10.0)

    g = sol.metric(x)
    inverse = np.linalg.inv(g)

    R = curvature_tensor(levi_civita(sol.metric), x, step, richardson=False)
    # Ricci_bd = R(e_a, e_d)^a_b
    ricci = np.einsum("adab->bd", R)
    scalar = float(np.einsum("bd,bd->", inverse, ricci))

    phi = sol.dilaton
    dphi = central_difference(lambda y: np.array(phi(y)), x, step)
    hessian = central_difference(lambda y: central_difference(lambda z: np.array(phi(z)), y, step), x, step)
    gamma = christoffel(sol.metric, x, inner)
    nabla2 = hessian - np.einsum("amn,a->mn", gamma, dphi)

    H = _standard_torsion(sol, x)
    HH = np.einsum("mpq,nrs,pr,qs->mn", H, H, inverse, inverse)
    h_squared = float(np.einsum("mn,mn->", inverse, HH))

    einstein = ricci + 2.0 * nabla2 - 0.25 * HH
    dilaton = (
        scalar
        + 4.0 * float(np.einsum("mn,mn->", inverse, nabla2))
        - 4.0 * float(dphi @ inverse @ dphi)
        - h_squared / 12.0
    )

    def density(y: np.ndarray) -> np.ndarray:
        gy = sol.metric(y)
        gi = np.linalg.inv(gy)
        raised = np.einsum("abc,ap,bm,cn->pmn", _standard_torsion(sol, y), gi, gi, gi)
        return np.sqrt(np.linalg.det(gy)) * np.exp(-2.0 * phi(y)) * raised

    divergence = np.einsum("ppmn->mn", central_difference(density, x, step)) / np.sqrt(np.linalg.det(g))

    return EOMResidual(
        einstein=float(np.linalg.norm(einstein)),
        h_equation=float(np.linalg.norm(divergence)),
        dilaton=abs(dilaton),
        step=step,
    )


def observed_order(coarse: float, fine: float, floor: float = 0.0) -> float:
    """log₂(coarse/fine), nan unless both residuals exceed floor."""
    if coarse > floor and fine > floor:
        return float(np.log2(coarse / fine))
    return float("nan")


def convergence_order(
    sol: CommonSectorSolution,
    x: Sequence[float],
    step: Optional[float] = None,
    floor: Optional[float] = None,
) -> Dict[str, float]:
    """
    Observed order of each residual under halving of the outer step.

    The study runs at settings.EOM_ORDER_STEP, where truncation error sits
    well above the roundoff plateau of the nested differences. Components
    at or below floor are reported as nan.
    """
    step = settings.EOM_ORDER_STEP if step is None else step
    floor = settings.EOM_ORDER_FLOOR if floor is None else floor
    coarse = eom_residual(sol, x, step).to_dict()
    fine = eom_residual(sol, x, step / 2.0).to_dict()
    return {name: observed_order(coarse[name], fine[name], floor) for name in EOM_COMPONENTS}
