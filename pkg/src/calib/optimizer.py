# src/calib/optimizer.py
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config import settings
from src.errors import DimensionMismatchError, FormDegreeError
from src.exterior import AltForm, Plane
from static.constants import logger

ARMIJO = 1e-4
MAX_STEP = 1.0
MIN_STEP = 1e-14
# Restarts within this distance of the best value count as maximizers
VALUE_TOLERANCE = 1e-6


@dataclass
class AscentResult:
    """Outcome of a single projected-gradient ascent."""
    frame: np.ndarray
    value: float
    iterations: int
    converged: bool


@dataclass
class ContactReport:
    """
    Result of maximizing a form over oriented k-planes.

    Attributes:
        max_value: Best value found
        maximizers: Distinct planes attaining max_value within tolerance
        form: The maximized form
        dimension: Contact-set dimension, once estimated
        diagnostics: Optimizer statistics
    """
    max_value: float
    maximizers: List[Plane]
    form: AltForm
    dimension: Optional[int] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def _contract(tensor: np.ndarray, frame: np.ndarray, skip: Optional[int] = None) -> np.ndarray:
    # Contract slots in order with frame columns, leaving slot `skip` free
    k = frame.shape[1]
    t = tensor if skip is None else np.moveaxis(tensor, skip, 0)
    axis = 0 if skip is None else 1
    for j in range(k):
        if j == skip:
            continue
        t = np.tensordot(t, frame[:, j], axes=([axis], [0]))
    return t


def form_value(tensor: np.ndarray, frame: np.ndarray) -> float:
    return float(_contract(tensor, frame))


def form_gradient(tensor: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Euclidean gradient of X ↦ w(X₁, …, X_k) with respect to the frame."""
    return np.column_stack([_contract(tensor, frame, skip=i) for i in range(frame.shape[1])])


def retract(frame: np.ndarray) -> np.ndarray:
    """QR retraction onto the Stiefel manifold, orientation kept."""
    q, r = np.linalg.qr(frame)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def ascend(
    tensor: np.ndarray,
    frame: np.ndarray,
    iterations: int,
    tol: float,
    initial_step: float,
) -> AscentResult:
    """
    Projected-gradient ascent on orthonormal frames.

    Args:
        tensor: Full antisymmetric tensor of the form
        frame: Starting orthonormal n×k frame
        iterations: Iteration cap
        tol: Stop when the frame update or the projected gradient is below tol
        initial_step: First trial step of the backtracking search

    Returns:
        AscentResult; converged is False if the cap was reached
    """
    X = retract(frame)
    value = form_value(tensor, X)
    for iteration in range(1, iterations + 1):
        G = form_gradient(tensor, X)
        S = X.T @ G
        xi = G - X @ (0.5 * (S + S.T))
        slope = float(np.sum(xi * xi))
        if np.sqrt(slope) < tol:
            return AscentResult(X, value, iteration, True)

        step = initial_step
        candidate, candidate_value = None, value
        while step > MIN_STEP:
            Y = retract(X + step * xi)
            fy = form_value(tensor, Y)
            if fy >= value + ARMIJO * step * slope:
                candidate, candidate_value = Y, fy
                break
            step *= 0.5
        if candidate is None:
            return AscentResult(X, value, iteration, True)

        while 2.0 * step <= MAX_STEP:
            Y = retract(X + 2.0 * step * xi)
            fy = form_value(tensor, Y)
            if fy <= candidate_value:
                break
            step *= 2.0
            candidate, candidate_value = Y, fy

        update = float(np.linalg.norm(candidate - X))
        X, value = candidate, candidate_value
        if update < tol:
            return AscentResult(X, value, iteration, True)
    return AscentResult(X, value, iterations, False)


def random_frame(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Uniform random orthonormal n×k frame."""
    return retract(rng.normal(size=(n, k)))


def deduplicate(planes: List[Plane], angle: float) -> List[Plane]:
    """Keep planes whose largest principal angle to all kept planes is ≥ angle."""
    kept: List[Plane] = []
    for plane in planes:
        if all(plane.max_angle(other) >= angle for other in kept):
            kept.append(plane)
    return kept


def maximize(
    w: AltForm,
    k: int,
    restarts: Optional[int] = None,
    iterations: Optional[int] = None,
    tol: Optional[float] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    initial_step: Optional[float] = None,
    dedup_angle: Optional[float] = None,
) -> ContactReport:
    """
    Multi-start maximization of a k-form over oriented k-planes.

    Args:
        w: Form to maximize
        k: Plane degree, equal to deg w
        restarts: Number of random starts
        iterations: Iteration cap per start
        tol: Convergence tolerance
        seed: Seed of the start frames
        threads: Worker threads; results do not depend on it
        initial_step: First step of the line search
        dedup_angle: Principal-angle threshold for identifying planes

    Returns:
        ContactReport with the best value and distinct maximizers
    """
    if w.degree != k:
        raise FormDegreeError(f"Cannot maximize a {w.degree}-form over {k}-planes")
    if k > w.dimension:
        raise DimensionMismatchError(f"No {k}-planes in R^{w.dimension}")
    restarts = settings.RESTARTS if restarts is None else restarts
    iterations = settings.OPT_ITERATIONS if iterations is None else iterations
    tol = settings.OPT_TOLERANCE if tol is None else tol
    seed = settings.SEED if seed is None else seed
    threads = settings.NUM_THREADS if threads is None else threads
    initial_step = settings.OPT_INITIAL_STEP if initial_step is None else initial_step
    dedup_angle = settings.DEDUP_ANGLE if dedup_angle is None else dedup_angle

    tensor = w.to_tensor()
    children = np.random.SeedSequence(seed).spawn(restarts)

    def run(index: int) -> AscentResult:
        rng = np.random.default_rng(children[index])
        return ascend(tensor, random_frame(rng, w.dimension, k), iterations, tol, initial_step)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(run, range(restarts)))

    best = max(r.value for r in results)
    order = sorted(range(restarts), key=lambda i: -results[i].value)
    near_best = [Plane(results[i].frame, tolerance=1e-10) for i in order
                 if results[i].value >= best - VALUE_TOLERANCE]
    maximizers = deduplicate(near_best, dedup_angle)
    unconverged = sum(1 for r in results if not r.converged)
    if unconverged:
        logger.warning(f"{unconverged} of {restarts} restarts hit the iteration cap")
    logger.info(f"Maximized {k}-form: max {best:.9f}, {len(maximizers)} distinct maximizers")

    return ContactReport(
        max_value=float(best),
        maximizers=maximizers,
        form=w,
        diagnostics={
            "restarts": restarts,
            "iterations": iterations,
            "tolerance": tol,
            "seed": seed,
            "converged": restarts - unconverged,
            "mean_iterations": float(np.mean([r.iterations for r in results])),
            "near_best": len(near_best),
        },
    )


def sample_comass(w: AltForm, samples: Optional[int] = None, seed: Optional[int] = None) -> float:
    """
    Largest |w| over uniformly random oriented planes.

    Args:
        w: Form of degree k
        samples: Number of random planes
        seed: Sampling seed

    Returns:
        The sampled lower bound on the comass
    """
    samples = settings.COMASS_SAMPLES if samples is None else samples
    seed = settings.SEED if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    frames, _ = np.linalg.qr(rng.normal(size=(samples, w.dimension, w.degree)))
    values = w.evaluate_many(frames)
    return float(np.max(np.abs(values)))
