# src/quat/hypercomplex.py
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple

import numpy as np

from src.errors import QuaternionDimensionError
from src.quat.quaternion import Quaternion, mul


class ParameterClass(Enum):
    """Smallest subalgebra containing p̄₁p₂ for a tau map."""
    REAL = "real"
    COMPLEX = "complex"
    IMAGINARY = "imaginary"
    QUATERNION = "quaternion"


@dataclass(frozen=True, eq=False)
class HypercomplexTriple:
    """
    Three complex structures J1, J2, J3 on ℝⁿ with J1·J2 = J3.

    The "I" triple acts by left multiplication by i, j, k on each ℚ factor;
    the "J" triple by negated right multiplication.
    """
    name: str
    dimension: int
    matrices: Tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def J1(self) -> np.ndarray:
        return self.matrices[0]

    @property
    def J2(self) -> np.ndarray:
        return self.matrices[1]

    @property
    def J3(self) -> np.ndarray:
        return self.matrices[2]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.matrices)

    def __getitem__(self, index: int) -> np.ndarray:
        return self.matrices[index]


def blockwise(matrix: np.ndarray, n: int) -> np.ndarray:
    """
    Repeat a 4×4 matrix along the diagonal of an n×n matrix.

    Args:
        matrix: Action on a single ℚ factor
        n: Total dimension, a multiple of 4

    Returns:
        The block-diagonal n×n matrix
    """
    _check_dimension(n)
    return np.kron(np.eye(n // 4), matrix)


def left_triple(n: int) -> HypercomplexTriple:
    """
    The I triple: I_r acts blockwise by left multiplication by i, j, k.

    Args:
        n: Dimension, divisible by 4

    Returns:
        The left hypercomplex triple on ℝⁿ
    """
    _check_dimension(n)
    units = (Quaternion.i(), Quaternion.j(), Quaternion.k())
    matrices = tuple(blockwise(u.left_matrix(), n) for u in units)
    return HypercomplexTriple("I", n, matrices)


def right_triple(n: int) -> HypercomplexTriple:
    """
    The J triple: J_r acts blockwise by v ↦ −v·u for u = i, j, k.

    Args:
        n: Dimension, divisible by 4

    Returns:
        The right hypercomplex triple on ℝⁿ
    """
    _check_dimension(n)
    units = (Quaternion.i(), Quaternion.j(), Quaternion.k())
    matrices = tuple(blockwise(-u.right_matrix(), n) for u in units)
    return HypercomplexTriple("J", n, matrices)


def classify_product(p1: Quaternion, p2: Quaternion, tol: float = 1e-12) -> ParameterClass:
    """
    Classify p̄₁p₂ as real, complex (span{1, i}), imaginary or generic.

    Args:
        p1: First coefficient of the tau map
        p2: Second coefficient of the tau map
        tol: Absolute tolerance on the excluded components

    Returns:
        The smallest class containing p̄₁p₂
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = mul(p1.conj(), p2)
    if abs(c.y) <= tol and abs(c.z) <= tol:
        return ParameterClass.REAL if abs(c.x) <= tol else ParameterClass.COMPLEX
    if abs(c.w) <= tol:
        return ParameterClass.IMAGINARY
    return ParameterClass.QUATERNION


def _check_dimension(n: int) -> None:
    if n <= 0 or n % 4 != 0:
        raise QuaternionDimensionError(f"Dimension {n} is not a positive multiple of 4")
