# src/exterior/alt_form.py
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError, FormDegreeError

MultiIndex = Tuple[int, ...]

# Frames are evaluated in chunks so minors stay small in memory
EVALUATION_CHUNK = 5000


@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> Tuple[MultiIndex, ...]:
    """Strictly increasing k-tuples of range(n) in lexicographic order."""
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def index_lookup(n: int, k: int) -> Dict[MultiIndex, int]:
    return {idx: pos for pos, idx in enumerate(multi_indices(n, k))}


@lru_cache(maxsize=None)
def index_array(n: int, k: int) -> np.ndarray:
    return np.array(multi_indices(n, k), dtype=int).reshape(-1, k)


def sort_with_sign(indices: Sequence[int]) -> Tuple[int, Optional[MultiIndex]]:
    """
    Sort a tuple of indices, tracking the permutation sign.

    Returns:
        (sign, sorted tuple), or (0, None) if an index repeats
    """
    items = list(indices)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    # Insertion sort; each swap flips the sign
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


class AltForm:
    """
    Constant-coefficient alternating k-form on ℝⁿ.

    Coefficients are stored over strictly increasing multi-indices I in
    lexicographic order, so a = Σ_I a_I e^I and a(e_{i1}, ..., e_{ik}) = a_I.
    """

    __slots__ = ("dimension", "degree", "coefficients")

    def __init__(self, dimension: int, degree: int, coefficients: Optional[np.ndarray] = None):
        if degree < 0 or degree > dimension:
            raise FormDegreeError(f"Degree {degree} is outside 0..{dimension}")
        size = len(multi_indices(dimension, degree))
        if coefficients is None:
            coefficients = np.zeros(size)
        coefficients = np.asarray(coefficients, dtype=float).reshape(-1)
        if coefficients.shape[0] != size:
            raise DimensionMismatchError(
                f"A {degree}-form on R^{dimension} has {size} coefficients, got {coefficients.shape[0]}"
            )
        self.dimension = dimension
        self.degree = degree
        self.coefficients = coefficients

    # Construction helpers

    @classmethod
    def zero(cls, dimension: int, degree: int) -> "AltForm":
        return cls(dimension, degree)

    @classmethod
    def scalar(cls, dimension: int, value: float) -> "AltForm":
        return cls(dimension, 0, np.array([value]))

    @classmethod
    def basis(cls, dimension: int, indices: Sequence[int], coefficient: float = 1.0) -> "AltForm":
        """
        The form coefficient·e^{i1}∧…∧e^{ik}, indices zero-based and in any order.
        """
        sign, ordered = sort_with_sign(indices)
        form = cls(dimension, len(indices))
        if ordered is not None:
            form.coefficients[index_lookup(dimension, len(indices))[ordered]] = sign * coefficient
        return form

    @classmethod
    def volume(cls, dimension: int) -> "AltForm":
        return cls.basis(dimension, range(dimension))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "AltForm":
        """
        2-form with a(X, Y) = Xᵀ M Y for an antisymmetric matrix M.
        """
        matrix = np.asarray(matrix, dtype=float)
        n = matrix.shape[0]
        coeffs = np.array([matrix[a, b] for a, b in multi_indices(n, 2)])
        return cls(n, 2, coeffs)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "AltForm":
        """Restrict a fully antisymmetric tensor to increasing indices."""
        tensor = np.asarray(tensor, dtype=float)
        k = tensor.ndim
        n = tensor.shape[0] if k else 1
        if k == 0:
            return cls(n, 0, np.array([float(tensor)]))
        idx = index_array(n, k)
        return cls(n, k, tensor[tuple(idx.T)])

    def to_matrix(self) -> np.ndarray:
        if self.degree != 2:
            raise FormDegreeError("Only 2-forms have a matrix representation")
        n = self.dimension
        matrix = np.zeros((n, n))
        for (a, b), c in zip(multi_indices(n, 2), self.coefficients):
            matrix[a, b] = c
            matrix[b, a] = -c
        return matrix

    def to_tensor(self) -> np.ndarray:
        """Fully antisymmetric component tensor with a(e_i, …) entries."""
        n, k = self.dimension, self.degree
        if k == 0:
            return np.array(self.coefficients[0])
        tensor = np.zeros((n,) * k)
        perms = _permutations_with_sign(k)
        for idx, c in zip(multi_indices(n, k), self.coefficients):
            if c == 0.0:
                continue
            for perm, sign in perms:
                tensor[tuple(idx[p] for p in perm)] = sign * c
        return tensor

    # Linear structure

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check_compatible(other)
        return AltForm(self.dimension, self.degree, self.coefficients + other.coefficients)

    def __sub__(self, other: "AltForm") -> "AltForm":
        self._check_compatible(other)
        return AltForm(self.dimension, self.degree, self.coefficients - other.coefficients)

    def __neg__(self) -> "AltForm":
        return AltForm(self.dimension, self.degree, -self.coefficients)

    def __mul__(self, factor: float) -> "AltForm":
        return AltForm(self.dimension, self.degree, float(factor) * self.coefficients)

    __rmul__ = __mul__

    def __xor__(self, other: "AltForm") -> "AltForm":
        return wedge(self, other)

    def __repr__(self) -> str:
        terms = [f"{c:+.6g} e{''.join(str(i + 1) for i in idx)}" for idx, c in self.items() if c != 0.0]
        return f"AltForm(n={self.dimension}, k={self.degree}: {' '.join(terms) or '0'})"

    def items(self) -> Iterator[Tuple[MultiIndex, float]]:
        return zip(multi_indices(self.dimension, self.degree), self.coefficients)

    def component(self, indices: Sequence[int]) -> float:
        sign, ordered = sort_with_sign(indices)
        if ordered is None:
            return 0.0
        return sign * float(self.coefficients[index_lookup(self.dimension, self.degree)[ordered]])

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.coefficients))) if self.coefficients.size else 0.0

    def allclose(self, other: "AltForm", atol: float = 1e-12) -> bool:
        self._check_compatible(other)
        return bool(np.allclose(self.coefficients, other.coefficients, rtol=0.0, atol=atol))

    def _check_compatible(self, other: "AltForm") -> None:
        if self.dimension != other.dimension or self.degree != other.degree:
            raise DimensionMismatchError(
                f"Cannot combine a {self.degree}-form on R^{self.dimension} "
                f"with a {other.degree}-form on R^{other.dimension}"
            )

    # Evaluation

    def evaluate(self, frame: np.ndarray) -> float:
        """
        Evaluate on the k vectors given as the columns of an n×k frame.

        Args:
            frame: n×k matrix of column vectors

        Returns:
            a(X₁, …, X_k)
        """
        frame = np.asarray(frame, dtype=float)
        if frame.ndim == 1:
            frame = frame[:, None]
        return float(self.evaluate_many(frame[None, :, :])[0])

    def evaluate_many(self, frames: np.ndarray) -> np.ndarray:
        """
        Evaluate on a batch of frames of shape (B, n, k).
        """
        frames = np.asarray(frames, dtype=float)
        n, k = self.dimension, self.degree
        if frames.shape[1] != n or frames.shape[2] != k:
            raise DimensionMismatchError(
                f"Expected frames of shape (B, {n}, {k}), got {frames.shape}"
            )
        if k == 0:
            return np.full(frames.shape[0], self.coefficients[0])
        idx = index_array(n, k)
        out = np.empty(frames.shape[0])
        for start in range(0, frames.shape[0], EVALUATION_CHUNK):
            chunk = frames[start:start + EVALUATION_CHUNK]
            minors = np.linalg.det(chunk[:, idx, :])
            out[start:start + EVALUATION_CHUNK] = minors @ self.coefficients
        return out

    def pullback(self, jacobian: np.ndarray) -> "AltForm":
        """
        Pull back along a linear map with the given m×n Jacobian.

        Returns:
            The form (A*a)(X₁, …) = a(A X₁, …) on ℝⁿ
        """
        jacobian = np.asarray(jacobian, dtype=float)
        m, n = jacobian.shape
        if m != self.dimension:
            raise DimensionMismatchError(
                f"Jacobian maps into R^{m}, form lives on R^{self.dimension}"
            )
        k = self.degree
        if k == 0:
            return AltForm(n, 0, self.coefficients.copy())
        rows = index_array(m, k)
        cols = index_array(n, k)
        # minors[I, J] = det A[I, J]
        blocks = jacobian[rows][:, :, cols]
        minors = np.linalg.det(np.transpose(blocks, (0, 2, 1, 3)))
        return AltForm(n, k, self.coefficients @ minors)


def wedge(a: AltForm, b: AltForm) -> AltForm:
    """
    Exterior product a∧b.

    Raises:
        DimensionMismatchError: If the forms live on different spaces
    """
    if a.dimension != b.dimension:
        raise DimensionMismatchError(f"Cannot wedge forms on R^{a.dimension} and R^{b.dimension}")
    n, k = a.dimension, a.degree + b.degree
    if k > n:
        raise FormDegreeError(f"Degree {k} exceeds dimension {n}")
    result = AltForm(n, k)
    lookup = index_lookup(n, k)
    for I, ca in a.items():
        if ca == 0.0:
            continue
        for J, cb in b.items():
            if cb == 0.0:
                continue
            sign, ordered = sort_with_sign(I + J)
            if ordered is not None:
                result.coefficients[lookup[ordered]] += sign * ca * cb
    return result


def interior(v: np.ndarray, a: AltForm) -> AltForm:
    """
    Contraction (i_v a)(X₂, …) = a(v, X₂, …).

    Raises:
        FormDegreeError: For a 0-form
    """
    v = np.asarray(v, dtype=float)
    if v.shape[0] != a.dimension:
        raise DimensionMismatchError(f"Vector of length {v.shape[0]} on R^{a.dimension}")
    if a.degree == 0:
        raise FormDegreeError("Interior product of a 0-form is undefined")
    n, k = a.dimension, a.degree
    result = AltForm(n, k - 1)
    lookup = index_lookup(n, k - 1)
    for I, c in a.items():
        if c == 0.0:
            continue
        for p, m in enumerate(I):
            if v[m] != 0.0:
                rest = I[:p] + I[p + 1:]
                result.coefficients[lookup[rest]] += (-1) ** p * v[m] * c
    return result


def j_derivation(J: np.ndarray, a: AltForm) -> AltForm:
    """
    Extend an endomorphism J to forms as a derivation:
    (i_J a)(X₁, …, X_k) = Σ_m a(X₁, …, J X_m, …, X_k).

    Args:
        J: n×n matrix
        a: Form on ℝⁿ

    Returns:
        i_J a, of the same degree
    """
    J = np.asarray(J, dtype=float)
    n, k = a.dimension, a.degree
    if J.shape != (n, n):
        raise DimensionMismatchError(f"Endomorphism of shape {J.shape} on R^{n}")
    result = AltForm(n, k)
    lookup = index_lookup(n, k)
    for I, c in a.items():
        if c == 0.0:
            continue
        for p, m in enumerate(I):
            # i_J e^m = Σ_q J[m, q] e^q
            for q in np.nonzero(J[m])[0]:
                sign, ordered = sort_with_sign(I[:p] + (int(q),) + I[p + 1:])
                if ordered is not None:
                    result.coefficients[lookup[ordered]] += sign * J[m, q] * c
    return result


def kahler_form(J: np.ndarray, g: Optional[np.ndarray] = None) -> AltForm:
    """
    The 2-form ω(X, Y) = g(J X, Y), with matrix Jᵀg.
    """
    J = np.asarray(J, dtype=float)
    g = np.eye(J.shape[0]) if g is None else np.asarray(g, dtype=float)
    return AltForm.from_matrix(J.T @ g)


@lru_cache(maxsize=None)
def _permutations_with_sign(k: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    result = []
    for perm in permutations(range(k)):
        sign, _ = sort_with_sign(perm)
        result.append((perm, sign))
    return tuple(result)
