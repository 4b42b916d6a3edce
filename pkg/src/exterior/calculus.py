# src/exterior/calculus.py
from typing import Callable, Optional, Sequence, Union

import numpy as np

from config import settings
from src.errors import DimensionMismatchError
from src.exterior.alt_form import AltForm, wedge
from src.exterior.fields import Field, FormField, ScalarField

SmoothMap = Callable[[np.ndarray], np.ndarray]
JacobianRule = Callable[[np.ndarray], np.ndarray]


def central_difference(
    func: Callable[[np.ndarray], np.ndarray],
    x: Sequence[float],
    step: float,
    richardson: bool = False,
) -> np.ndarray:
    """
    Partial derivatives of an array-valued function by central differences.

    Args:
        func: Smooth function of the chart point
        x: Base point
        step: Difference step
        richardson: Combine steps h and h/2 to cancel the O(h²) term

    Returns:
        Array of shape (n, *value.shape) with the m-th partial in slot m
    """
    x = np.asarray(x, dtype=float)
    if step <= 0:
        raise ValueError("step must be positive")

    def _partials(h: float) -> np.ndarray:
        rows = []
        for m in range(x.shape[0]):
            shift = np.zeros_like(x)
            shift[m] = h
            rows.append((np.asarray(func(x + shift)) - np.asarray(func(x - shift))) / (2.0 * h))
        return np.stack(rows)

    coarse = _partials(step)
    if not richardson:
        return coarse
    fine = _partials(step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def _coefficients(field: Field) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(field, ScalarField):
        return lambda y: np.array([field(y)])
    return lambda y: field(y).coefficients


def exterior_derivative(
    field: Union[FormField, ScalarField],
    x: Sequence[float],
    step: Optional[float] = None,
    richardson: Optional[bool] = None,
) -> AltForm:
    """
    Numerical exterior derivative df at x.

    Args:
        field: Form field (scalar fields count as 0-forms)
        x: Chart point farther than 2·step from the excluded set
        step: Difference step, defaults to settings.FD_STEP
        richardson: Use Richardson refinement, defaults to settings.RICHARDSON

    Returns:
        df(x) as a constant form of one degree higher

    Raises:
        SingularityProximityError: If the stencil would come too close to the excluded set
    """
    step = settings.FD_STEP if step is None else step
    richardson = settings.RICHARDSON if richardson is None else richardson
    x = field.point(x)
    field.require_clearance(x, 2.0 * step)

    n = field.dimension
    degree = 0 if isinstance(field, ScalarField) else field.degree
    partials = central_difference(_coefficients(field), x, step, richardson)

    result = AltForm.zero(n, degree + 1)
    for m in range(n):
        # d(a_I e^I) = Σ_m ∂_m a_I e^m ∧ e^I
        result = result + wedge(AltForm.basis(n, (m,)), AltForm(n, degree, partials[m]))
    return result


def gradient(field: ScalarField, x: Sequence[float], step: Optional[float] = None) -> np.ndarray:
    """Coordinate gradient ∂_m f at x."""
    return exterior_derivative(field, x, step).coefficients


def pullback(jacobian: np.ndarray, a: AltForm) -> AltForm:
    """
    Pull back a form along a smooth map with Jacobian Dmap(x).

    Args:
        jacobian: m×n Jacobian of the map ℝⁿ → ℝᵐ at x
        a: Form at map(x)

    Returns:
        (map*a)(X₁, …) = a(Dmap·X₁, …) at x
    """
    return a.pullback(jacobian)


def pullback_metric(jacobian: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Pullback of a quadratic form, Jᵀ g J."""
    jacobian = np.asarray(jacobian, dtype=float)
    g = np.asarray(g, dtype=float)
    if g.shape != (jacobian.shape[0], jacobian.shape[0]):
        raise DimensionMismatchError(f"Metric of shape {g.shape} against Jacobian {jacobian.shape}")
    return jacobian.T @ g @ jacobian


def pullback_field(
    field: Union[FormField, ScalarField],
    smooth_map: SmoothMap,
    jacobian: JacobianRule,
    dimension: int,
    distance: Optional[Callable[[np.ndarray], float]] = None,
) -> Union[FormField, ScalarField]:
    """
    Compose a field with a smooth map ℝⁿ → ℝᵐ.

    Args:
        field: Field on the target chart
        smooth_map: The map
        jacobian: Its Jacobian as a function of the source point
        dimension: Source dimension n
        distance: Distance to the excluded set on the source, defaults to
            the target distance of the image point

    Returns:
        The pulled-back field on ℝⁿ
    """
    if distance is None:
        distance = lambda y: field.distance(np.asarray(smooth_map(y)))
    if isinstance(field, ScalarField):
        return ScalarField(dimension, lambda y: field(smooth_map(y)), distance)
    return FormField(
        dimension,
        lambda y: field(smooth_map(y)).pullback(jacobian(y)),
        distance,
        degree=field.degree,
    )
