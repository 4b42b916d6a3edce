# src/brane/tau_map.py
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import DegenerateTauError
from src.exterior import Plane
from src.quat import ParameterClass, Quaternion, classify_product, mul


@dataclass(frozen=True)
class TauMap:
    """
    Affine quaternionic map τ(u) = p₁u¹ + p₂u² − a from ℚ² to ℚ with weight r.

    Chart points of ℚ² are 8-vectors (u¹, u²) in the basis (1, i, j, k) per factor.
    """
    p1: Quaternion
    p2: Quaternion
    a: Quaternion = Quaternion()
    r: float = 1.0

    def __post_init__(self):
        if self.p1.is_zero() and self.p2.is_zero():
            raise DegenerateTauError("degenerate tau: p1 = p2 = 0")
        if not self.r > 0:
            raise ValueError(f"Weight r must be positive, got {self.r}")

    @classmethod
    def from_arrays(cls, p1: Sequence[float], p2: Sequence[float], a: Sequence[float], r: float) -> "TauMap":
        return cls(Quaternion.from_array(p1), Quaternion.from_array(p2), Quaternion.from_array(a), float(r))

    def jacobian(self) -> np.ndarray:
        """Constant 4×8 Jacobian [L_{p₁} | L_{p₂}]."""
        return np.hstack([self.p1.left_matrix(), self.p2.left_matrix()])

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.jacobian() @ x - self.a.as_array()

    def scale(self) -> float:
        """√(|p₁|² + |p₂|²), the largest singular value of the Jacobian."""
        return float(np.sqrt(self.p1.norm_squared() + self.p2.norm_squared()))

    def distance(self, x: Sequence[float]) -> float:
        """Euclidean distance from x to the 4-plane τ⁻¹(0)."""
        return float(np.linalg.norm(self(x))) / self.scale()

    def product(self) -> Quaternion:
        return mul(self.p1.conj(), self.p2)

    def parameter_class(self, tol: float = 1e-12) -> ParameterClass:
        return classify_product(self.p1, self.p2, tol)

    def left_multiply(self, u: Quaternion) -> "TauMap":
        """The equivalent map (u p₁, u p₂; u a) with the same weight."""
        return TauMap(mul(u, self.p1), mul(u, self.p2), mul(u, self.a), self.r)


def normalize_tau(t: TauMap) -> TauMap:
    """
    Canonical representative of a tau map under (p₁, p₂; a) → (u p₁, u p₂; u a).

    The first nonzero coefficient becomes 1; the weight is unchanged.
    """
    q = t.p1 if not t.p1.is_zero() else t.p2
    return t.left_multiply(q.inverse())


def kernel_frame(t: TauMap) -> Plane:
    """
    Oriented orthonormal frame of ker dτ.

    The kernel is parametrized as q ↦ (q, c q) with c = −p₂⁻¹p₁, or as
    q ↦ (0, q) when p₂ = 0; the orientation is the one induced by q over
    the basis (1, i, j, k).
    """
    if not t.p2.is_zero():
        c = mul(t.p2.inverse(), t.p1).scale(-1.0)
        vectors = np.vstack([np.eye(4), c.left_matrix()])
    else:
        vectors = np.vstack([np.zeros((4, 4)), np.eye(4)])
    return Plane.from_vectors(vectors)
