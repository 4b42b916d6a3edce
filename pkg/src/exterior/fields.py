# src/exterior/fields.py
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from src.errors import DimensionMismatchError, FormDegreeError, SingularityProximityError
from src.exterior.alt_form import AltForm
from src.exterior.hodge import check_metric

DistanceRule = Callable[[np.ndarray], float]


def _no_exclusion(x: np.ndarray) -> float:
    return float("inf")


@dataclass(frozen=True)
class Field:
    """
    A smooth field on a single chart of ℝⁿ minus an excluded set.

    The excluded set is described by a distance function; points at
    distance zero are excluded.
    """
    dimension: int
    rule: Callable[[np.ndarray], object]
    distance: DistanceRule = field(default=_no_exclusion)

    def point(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise DimensionMismatchError(f"Expected a point in R^{self.dimension}, got shape {x.shape}")
        return x

    def distance_to_excluded(self, x: Sequence[float]) -> float:
        return float(self.distance(self.point(x)))

    def is_excluded(self, x: Sequence[float]) -> bool:
        return self.distance_to_excluded(x) <= 0.0

    def require_clearance(self, x: Sequence[float], clearance: float) -> None:
        """
        Raises:
            SingularityProximityError: If x is within clearance of the excluded set
        """
        d = self.distance_to_excluded(x)
        if d <= clearance:
            raise SingularityProximityError(
                f"Point is {d:.3g} from the excluded set, needs more than {clearance:.3g}", distance=d
            )

    def _checked(self, x: Sequence[float]) -> np.ndarray:
        x = self.point(x)
        if self.distance(x) <= 0.0:
            raise SingularityProximityError("Field evaluated on its excluded set", distance=0.0)
        return x


@dataclass(frozen=True)
class ScalarField(Field):
    """A real-valued field."""

    def __call__(self, x: Sequence[float]) -> float:
        return float(self.rule(self._checked(x)))


@dataclass(frozen=True)
class FormField(Field):
    """A field whose values are constant-coefficient k-forms."""
    degree: int = 0

    def __call__(self, x: Sequence[float]) -> AltForm:
        value = self.rule(self._checked(x))
        if value.degree != self.degree or value.dimension != self.dimension:
            raise FormDegreeError(
                f"Rule returned a {value.degree}-form on R^{value.dimension}, "
                f"field declares a {self.degree}-form on R^{self.dimension}"
            )
        return value


@dataclass(frozen=True)
class MetricField(Field):
    """A field of symmetric positive-definite matrices."""

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        return check_metric(self.rule(self._checked(x)))


def constant_metric(matrix: np.ndarray) -> MetricField:
    matrix = check_metric(matrix)
    return MetricField(matrix.shape[0], lambda x: matrix)


def zero_form_field(dimension: int, degree: int) -> FormField:
    return FormField(dimension, lambda x: AltForm.zero(dimension, degree), degree=degree)


@dataclass(frozen=True, eq=False)
class Plane:
    """An oriented k-plane in ℝⁿ given by an orthonormal n×k frame."""
    frame: np.ndarray
    tolerance: float = 1e-12

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        if frame.ndim != 2 or frame.shape[1] > frame.shape[0]:
            raise DimensionMismatchError(f"Frame must be n×k with k ≤ n, got shape {frame.shape}")
        gram_error = np.max(np.abs(frame.T @ frame - np.eye(frame.shape[1])))
        if gram_error > self.tolerance:
            raise ValueError(f"Frame columns are not orthonormal (error {gram_error:.2e})")
        object.__setattr__(self, "frame", frame)

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> "Plane":
        """
        Orthonormalize the columns of an n×k matrix, keeping their orientation.
        """
        q, r = np.linalg.qr(np.asarray(vectors, dtype=float))
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        return cls(q * signs)

    @property
    def dimension(self) -> int:
        return self.frame.shape[0]

    @property
    def degree(self) -> int:
        return self.frame.shape[1]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    def principal_angles(self, other: "Plane") -> np.ndarray:
        singular = np.linalg.svd(self.frame.T @ other.frame, compute_uv=False)
        return np.arccos(np.clip(singular, -1.0, 1.0))

    def max_angle(self, other: "Plane") -> float:
        """Largest principal angle; zero iff the planes coincide as subspaces."""
        return float(np.max(self.principal_angles(other)))

    def reversed(self) -> "Plane":
        frame = self.frame.copy()
        frame[:, [0, 1]] = frame[:, [1, 0]]
        return Plane(frame)
