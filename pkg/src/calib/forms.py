# src/calib/forms.py
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.errors import DimensionMismatchError, FormDegreeError
from src.exterior import AltForm, Plane, kahler_form, wedge
from src.quat import HypercomplexTriple, left_triple, right_triple


class CalibrationKind(Enum):
    """The four quaternionic calibrations of degree 4 on ℝ⁸."""
    MIXED_IJ = "mixed_ij"
    KAHLER2_PLUS_PHI = "kahler2_phi"
    CAYLEY_PLUS_PHI = "cayley_phi"
    PHI_J = "phi_j"


@dataclass(frozen=True)
class CalibrationSpec:
    """
    A calibration kind together with the triples it is built from.

    Attributes:
        kind: Which convex combination
        I: Left triple on ℝ⁸
        J: Right triple on ℝ⁸
        kahler_index: Member I_r (1, 2 or 3) used by KAHLER2_PLUS_PHI
    """
    kind: CalibrationKind
    I: HypercomplexTriple = field(default_factory=lambda: left_triple(8))
    J: HypercomplexTriple = field(default_factory=lambda: right_triple(8))
    kahler_index: int = 1

    def __post_init__(self):
        if self.kahler_index not in (1, 2, 3):
            raise ValueError("kahler_index must be 1, 2 or 3")


def _require_dimension(triple: HypercomplexTriple) -> None:
    if triple.dimension != 8:
        raise DimensionMismatchError(f"Calibrations live on R^8, triple acts on R^{triple.dimension}")


def build_phi(triple: HypercomplexTriple) -> AltForm:
    """
    Kraines form φ of a triple, proportional to Σ_r ω_r∧ω_r.

    Normalized to +1 on the quaternionic line ℚ×0 with the orientation
    (1, i, j, k), so φ_I and φ_J agree there.

    Args:
        triple: Left or right triple on ℝ⁸

    Returns:
        The degree-4 form φ
    """
    _require_dimension(triple)
    raw = AltForm.zero(8, 4)
    for J in triple:
        omega = kahler_form(J)
        raw = raw + wedge(omega, omega)
    return raw * (1.0 / raw.evaluate(np.eye(8)[:, :4]))


def _block_kahler(J: np.ndarray, block: int) -> AltForm:
    # Kähler form of J restricted to one ℚ factor of ℝ⁸
    mask = np.zeros((8, 8))
    mask[4 * block:4 * block + 4, 4 * block:4 * block + 4] = 1.0
    return kahler_form(J * mask)


def build_cayley(triple_i: HypercomplexTriple) -> AltForm:
    """
    Cayley form Ω = vol₁ + vol₂ − Σ_r ω⁽¹⁾_{I_r}∧ω⁽²⁾_{I_r}.

    vol₁, vol₂ are the volume forms of the two ℚ factors and ω⁽ᵇ⁾ the
    Kähler forms of I_r on factor b. Ω is self-dual, has comass 1 and
    equals 1 on ℚ×0.
    """
    _require_dimension(triple_i)
    omega = AltForm.basis(8, (0, 1, 2, 3)) + AltForm.basis(8, (4, 5, 6, 7))
    for I in triple_i:
        omega = omega - wedge(_block_kahler(I, 0), _block_kahler(I, 1))
    return omega


def build_calibration(spec: CalibrationSpec) -> AltForm:
    """
    The calibration form of a spec.

    Returns:
        ½(φ_I + φ_J), (1/5)ω_{I_r}∧ω_{I_r} + (3/5)φ_J, ¼Ω + ¾φ_J or φ_J
    """
    phi_j = build_phi(spec.J)
    if spec.kind is CalibrationKind.PHI_J:
        return phi_j
    if spec.kind is CalibrationKind.MIXED_IJ:
        return 0.5 * (build_phi(spec.I) + phi_j)
    if spec.kind is CalibrationKind.KAHLER2_PLUS_PHI:
        omega = kahler_form(spec.I[spec.kahler_index - 1])
        return 0.2 * wedge(omega, omega) + 0.6 * phi_j
    if spec.kind is CalibrationKind.CAYLEY_PLUS_PHI:
        return 0.25 * build_cayley(spec.I) + 0.75 * phi_j
    raise ValueError(f"Unknown calibration kind {spec.kind}")


def calibration_by_name(name: str) -> AltForm:
    return build_calibration(CalibrationSpec(CalibrationKind(name.lower())))


def evaluate_on_plane(w: AltForm, plane: Plane) -> float:
    """
    Value of w on the oriented unit co-volume of a plane.

    Raises:
        FormDegreeError: If deg w differs from the plane dimension
    """
    if w.degree != plane.degree:
        raise FormDegreeError(f"A {w.degree}-form cannot be evaluated on a {plane.degree}-plane")
    if w.dimension != plane.dimension:
        raise DimensionMismatchError(f"Form on R^{w.dimension}, plane in R^{plane.dimension}")
    return w.evaluate(plane.frame)
