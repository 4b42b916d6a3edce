# src/exterior/hodge.py
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from src.errors import DimensionMismatchError, NonPositiveMetricError
from src.exterior.alt_form import AltForm, index_array, index_lookup, multi_indices, sort_with_sign


def check_metric(g: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """
    Validate a Riemannian metric matrix.

    Args:
        g: Candidate n×n matrix
        tol: Symmetry tolerance relative to the largest entry

    Returns:
        g as a float array

    Raises:
        NonPositiveMetricError: If g is not symmetric positive-definite
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NonPositiveMetricError(f"Metric must be square, got shape {g.shape}")
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.max(np.abs(g - g.T)) > tol * scale:
        raise NonPositiveMetricError("Metric is not symmetric")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise NonPositiveMetricError("Metric is not positive-definite")
    return g


def induced_metric(g: np.ndarray, k: int) -> np.ndarray:
    """Gram matrix of the basis k-forms e^I under g, entries det(g⁻¹[I, J])."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if k == 0:
        return np.ones((1, 1))
    base = np.linalg.inv(g)
    idx = index_array(n, k)
    blocks = base[idx][:, :, idx]
    return np.linalg.det(np.transpose(blocks, (0, 2, 1, 3)))


def inner_product(a: AltForm, b: AltForm, g: Optional[np.ndarray] = None) -> float:
    """
    Pointwise inner product, |a|² = (1/k!) a_{i…} a^{i…}.
    """
    if a.dimension != b.dimension or a.degree != b.degree:
        raise DimensionMismatchError("Inner product needs forms of equal type")
    if g is None:
        return float(a.coefficients @ b.coefficients)
    g = check_metric(g)
    return float(a.coefficients @ induced_metric(g, a.degree) @ b.coefficients)


def norm(a: AltForm, g: Optional[np.ndarray] = None) -> float:
    return float(np.sqrt(max(inner_product(a, a, g), 0.0)))


@lru_cache(maxsize=None)
def _complement_signs(n: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    # For each increasing I: position of its complement and sign of (I, Iᶜ)
    lookup = index_lookup(n, n - k)
    positions, signs = [], []
    for I in multi_indices(n, k):
        rest = tuple(m for m in range(n) if m not in I)
        sign, _ = sort_with_sign(I + rest)
        positions.append(lookup[rest])
        signs.append(sign)
    return np.array(positions, dtype=int), np.array(signs, dtype=float)


def hodge_star(g: Optional[np.ndarray], a: AltForm, orientation: int = 1) -> AltForm:
    """
    Riemannian Hodge star, characterized by b∧⋆a = ⟨b, a⟩_g vol_g.

    Args:
        g: Positive-definite metric matrix, None for Euclidean
        a: Form of degree k
        orientation: +1 for the coordinate orientation, −1 for the opposite one

    Returns:
        ⋆a of degree n − k

    Raises:
        NonPositiveMetricError: If g is not positive-definite
    """
    n, k = a.dimension, a.degree
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if g is None:
        raised = a.coefficients
        volume = 1.0
    else:
        g = check_metric(g)
        if g.shape[0] != n:
            raise DimensionMismatchError(f"Metric on R^{g.shape[0]}, form on R^{n}")
        raised = induced_metric(g, k) @ a.coefficients
        volume = float(np.sqrt(np.linalg.det(g)))
    positions, signs = _complement_signs(n, k)
    coefficients = np.zeros(len(multi_indices(n, n - k)))
    coefficients[positions] = orientation * volume * signs * raised
    return AltForm(n, n - k, coefficients)
