# src/quat/quaternion.py
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import QuaternionDimensionError


@dataclass(frozen=True)
class Quaternion:
    """
    An element w + x i + y j + z k of the quaternions.

    Instances are immutable; all arithmetic returns new values.
    """
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Quaternion":
        """
        Build a quaternion from its coefficients [w, x, y, z].

        Args:
            values: Four real coefficients

        Returns:
            The quaternion
        """
        if len(values) != 4:
            raise QuaternionDimensionError(f"A quaternion needs 4 coefficients, got {len(values)}")
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    @classmethod
    def one(cls) -> "Quaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def i(cls) -> "Quaternion":
        return cls(0.0, 1.0, 0.0, 0.0)

    @classmethod
    def j(cls) -> "Quaternion":
        return cls(0.0, 0.0, 1.0, 0.0)

    @classmethod
    def k(cls) -> "Quaternion":
        return cls(0.0, 0.0, 0.0, 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return mul(self, other)

    def scale(self, factor: float) -> "Quaternion":
        return Quaternion(factor * self.w, factor * self.x, factor * self.y, factor * self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_squared(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol

    def inverse(self) -> "Quaternion":
        """
        Multiplicative inverse q̄/|q|².

        Raises:
            ZeroDivisionError: For the zero quaternion
        """
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise ZeroDivisionError("The zero quaternion has no inverse")
        return self.conj().scale(1.0 / n2)

    def left_matrix(self) -> np.ndarray:
        """Matrix of v ↦ q·v on ℝ⁴ in the basis (1, i, j, k)."""
        return _product_matrix(self, left=True)

    def right_matrix(self) -> np.ndarray:
        """Matrix of v ↦ v·q on ℝ⁴ in the basis (1, i, j, k)."""
        return _product_matrix(self, left=False)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """
    Hamilton product with ij = k.

    Args:
        a: Left factor
        b: Right factor

    Returns:
        The product a·b
    """
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


_BASIS = (Quaternion.one(), Quaternion.i(), Quaternion.j(), Quaternion.k())


def _product_matrix(q: Quaternion, left: bool) -> np.ndarray:
    # Column m is the image of the m-th basis quaternion
    columns = [mul(q, e) if left else mul(e, q) for e in _BASIS]
    return np.column_stack([c.as_array() for c in columns])
