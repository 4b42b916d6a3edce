# src/geom/holonomy.py
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional

import numpy as np

from src.calib.forms import build_cayley
from src.exterior import AltForm, hodge_star, multi_indices, wedge
from src.geom.curvature import CurvatureSample
from src.quat import HypercomplexTriple, left_triple, right_triple
from static.constants import DEGENERATE_CURVATURE, MEMBER_THRESHOLD, NONMEMBER_THRESHOLD

ALGEBRAS = ("sp2_I", "sp2_J", "u4", "su4", "spin7")


def wedge_star_operator(omega: AltForm) -> np.ndarray:
    """
    Matrix of β ↦ ⋆(Ω∧β) on Λ²ℝⁿ in the basis e^{ab}, a < b.
    """
    n = omega.dimension
    columns = []
    for pair in multi_indices(n, 2):
        image = hodge_star(None, wedge(omega, AltForm.basis(n, pair)))
        columns.append(image.coefficients)
    return np.column_stack(columns)


@dataclass(frozen=True, eq=False)
class HolonomyStructures:
    """
    Reference structures on ℝ⁸ for the membership tests.

    Attributes:
        I: Left triple
        J: Right triple
        spin7_complement: Projector of Λ²ℝ⁸ onto the 7-dimensional
            eigenspace (eigenvalue 3) of β ↦ ⋆(Ω∧β)
        spectrum: Sorted eigenvalues of that operator
    """
    I: HypercomplexTriple
    J: HypercomplexTriple
    spin7_complement: np.ndarray
    spectrum: np.ndarray


@lru_cache(maxsize=1)
def holonomy_structures() -> HolonomyStructures:
    operator = wedge_star_operator(build_cayley(left_triple(8)))
    operator = 0.5 * (operator + operator.T)
    eigenvalues = np.linalg.eigvalsh(operator)
    # Eigenvalues are −1 (×21) and 3 (×7)
    projector = (operator + np.eye(operator.shape[0])) / 4.0
    return HolonomyStructures(
        I=left_triple(8),
        J=right_triple(8),
        spin7_complement=projector,
        spectrum=np.sort(eigenvalues),
    )


@dataclass
class MembershipReport:
    """
    Residual norms of a curvature endomorphism against candidate algebras.

    Residuals are normalized by ‖R‖; a report with ‖R‖ below the
    degeneracy threshold is indeterminate for every algebra.
    """
    norm: float
    residuals: Dict[str, float] = field(default_factory=dict)
    antisymmetry: float = 0.0

    @property
    def indeterminate(self) -> bool:
        return self.norm < DEGENERATE_CURVATURE

    def status(self, algebra: str) -> str:
        """
        Returns:
            "indeterminate", "member", "non-member" or "inconclusive"
        """
        if self.indeterminate:
            return "indeterminate"
        residual = self.residuals[algebra]
        if residual < MEMBER_THRESHOLD:
            return "member"
        if residual > NONMEMBER_THRESHOLD:
            return "non-member"
        return "inconclusive"

    def member(self, algebra: str) -> Optional[bool]:
        status = self.status(algebra)
        if status == "member":
            return True
        if status == "non-member":
            return False
        return None


def _commutator_residual(R: np.ndarray, structures: Iterable[np.ndarray], scale: float) -> float:
    return max(float(np.linalg.norm(R @ S - S @ R)) for S in structures) / scale


def orthonormal_conjugate(R: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Express a g-skew endomorphism in the frame g^{1/2}, where it is δ-skew."""
    eigenvalues, vectors = np.linalg.eigh(g)
    root = (vectors * np.sqrt(eigenvalues)) @ vectors.T
    inverse_root = (vectors / np.sqrt(eigenvalues)) @ vectors.T
    return root @ R @ inverse_root


def algebra_membership(
    sample: CurvatureSample,
    g: Optional[np.ndarray] = None,
    structures: Optional[HolonomyStructures] = None,
) -> MembershipReport:
    """
    Test a curvature endomorphism against sp(2), u(4), su(4) and spin(7).

    Args:
        sample: Curvature sample with g-skew endomorphism R
        g: Metric at the sample point, defaults to the sample's own
        structures: Reference structures, defaults to the cached ones

    Returns:
        MembershipReport with residuals normalized by ‖R‖
    """
    structures = structures or holonomy_structures()
    g = sample.metric if g is None else np.asarray(g, dtype=float)
    R = sample.endomorphism
    norm = float(np.linalg.norm(R))
    report = MembershipReport(norm=norm, antisymmetry=float(np.linalg.norm(g @ R + R.T @ g)))
    if norm < DEGENERATE_CURVATURE:
        report.residuals = {name: 0.0 for name in ALGEBRAS}
        return report

    u4 = _commutator_residual(R, [structures.I.J1], norm)
    trace = abs(float(np.trace(structures.I.J1 @ R))) / norm
    skew = orthonormal_conjugate(R, g)
    beta = AltForm.from_matrix(0.5 * (skew - skew.T)).coefficients
    spin7 = float(np.linalg.norm(structures.spin7_complement @ beta) / np.linalg.norm(beta))

    report.residuals = {
        "sp2_I": _commutator_residual(R, structures.I, norm),
        "sp2_J": _commutator_residual(R, structures.J, norm),
        "u4": u4,
        "su4": max(u4, trace),
        "spin7": spin7,
    }
    return report


def span_dimension(samples: List[CurvatureSample], rel_tol: float = 1e-6) -> int:
    """
    Dimension of the linear span of the curvature endomorphisms.
    """
    nonzero = [s.endomorphism.ravel() for s in samples if s.norm >= DEGENERATE_CURVATURE]
    if not nonzero:
        return 0
    singular = np.linalg.svd(np.array(nonzero), compute_uv=False)
    return int(np.sum(singular > rel_tol * singular[0]))
