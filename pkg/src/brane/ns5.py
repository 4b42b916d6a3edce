# src/brane/ns5.py
from typing import Tuple

import numpy as np

from src.brane.solution import CommonSectorSolution
from src.exterior import AltForm, FormField, MetricField, ScalarField, hodge_star
from src.geom import quaternion_orientation


def _radius(q: np.ndarray) -> float:
    return float(np.linalg.norm(q))


def ns5_harmonic(q: np.ndarray) -> float:
    """h = 1 + 1/|q|²."""
    return 1.0 + 1.0 / float(q @ q)


def ns5_torsion_at(q: np.ndarray) -> AltForm:
    """
    H₀ = −½⋆d(|q|⁻²) on ℚ∖{0} with the flat star in the calibrated orientation.
    """
    q = np.asarray(q, dtype=float)
    d_inverse_square = AltForm(4, 1, -2.0 * q / float(q @ q) ** 2)
    return -0.5 * hodge_star(None, d_inverse_square, quaternion_orientation())


def ns5_base() -> Tuple[MetricField, FormField]:
    """
    The cone metric g₀ = |q|⁻²δ on ℚ∖{0} and its NS-5 torsion H₀.
    """
    return (
        MetricField(4, lambda q: np.eye(4) / float(q @ q), _radius),
        FormField(4, ns5_torsion_at, _radius, degree=3),
    )


def ns5_solution() -> CommonSectorSolution:
    """
    NS-5-brane on ℝ^(1,5) × (ℚ∖{0}): g = hδ, H = −½⋆dh, e^{2φ} = h.
    """
    harmonic = ScalarField(4, ns5_harmonic, _radius)
    return CommonSectorSolution(
        metric=MetricField(4, lambda q: ns5_harmonic(q) * np.eye(4), _radius),
        torsion=FormField(4, ns5_torsion_at, _radius, degree=3),
        dilaton=ScalarField(4, lambda q: 0.5 * np.log(ns5_harmonic(q)), _radius),
        longitudinal="R^(1,5)",
        harmonic=harmonic,
    )
