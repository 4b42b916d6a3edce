# src/cli/sampling.py
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.stats import qmc

from config import settings
from static.constants import logger

# Candidates drawn per requested point before giving up
MAX_ATTEMPTS_FACTOR = 50


def halton(count: int, dimension: int, start: int = 1) -> np.ndarray:
    """Points start, ..., start + count − 1 of the unscrambled Halton sequence in [0, 1)^dimension."""
    sequence = qmc.Halton(d=dimension, scramble=False)
    sequence.fast_forward(start)
    return sequence.random(count)


def sample_points(
    count: int,
    dimension: int,
    box: Tuple[float, float],
    distance: Callable[[np.ndarray], float],
    step: float,
    seed: Optional[int] = None,
    clearance: Optional[float] = None,
) -> List[np.ndarray]:
    """
    Low-discrepancy points of the chart box away from the singular set.

    The Halton sequence is shifted modulo 1 by a seeded random offset, and
    candidates closer than max(CLEARANCE_FACTOR·step, SAMPLE_CLEARANCE) to the
    excluded set are dropped.

    Args:
        count: Points requested
        dimension: Chart dimension
        box: Coordinate range [lo, hi] per axis
        distance: Distance to the excluded set
        step: Difference step the points must accommodate
        seed: Shift seed
        clearance: Override of the minimum distance to the excluded set

    Returns:
        Up to count points, in sequence order
    """
    seed = settings.SEED if seed is None else seed
    if clearance is None:
        clearance = max(settings.CLEARANCE_FACTOR * step, settings.SAMPLE_CLEARANCE)
    shift = np.random.default_rng(np.random.SeedSequence(seed)).random(dimension)
    lo, hi = box
    points: List[np.ndarray] = []
    index = 1
    batch = max(count, 16)
    while len(points) < count and index <= MAX_ATTEMPTS_FACTOR * max(count, 1):
        unit = np.mod(halton(batch, dimension, index) + shift, 1.0)
        index += batch
        for u in unit:
            x = lo + (hi - lo) * u
            if distance(x) > clearance:
                points.append(x)
                if len(points) == count:
                    break
    if len(points) < count:
        logger.warning(f"Only {len(points)} of {count} sample points clear the singular set")
    return points
