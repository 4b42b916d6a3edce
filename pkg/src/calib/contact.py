# src/calib/contact.py
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from config import settings
from src.calib.optimizer import ContactReport, ascend, deduplicate, retract
from src.errors import InsufficientMaximizersError
from src.exterior import Plane
from static.constants import logger


def _neighbours(
    report: ContactReport,
    anchor: Plane,
    rng: np.random.Generator,
    count: int,
    radius: float,
) -> List[Plane]:
    # Push the anchor off in random normal directions and climb back
    tensor = report.form.to_tensor()
    X = anchor.frame
    complement = np.eye(X.shape[0]) - X @ X.T
    iterations = int(report.diagnostics.get("iterations", settings.OPT_ITERATIONS))
    tol = float(report.diagnostics.get("tolerance", settings.OPT_TOLERANCE))
    planes = []
    for _ in range(count):
        direction = complement @ rng.normal(size=X.shape)
        direction *= radius / np.linalg.norm(direction)
        result = ascend(tensor, retract(X + direction), iterations, tol, settings.OPT_INITIAL_STEP)
        if result.value >= report.max_value - 1e-6:
            planes.append(Plane(result.frame, tolerance=1e-10))
    return planes


def local_rank(anchor: Plane, neighbours: List[Plane], threshold: float) -> int:
    """
    Rank of the neighbourhood of a plane in the projector embedding.

    Singular values of the differences P − P_anchor at or above
    threshold·(largest singular value) are counted.
    """
    if not neighbours:
        return 0
    base = anchor.projector()
    differences = np.array([(p.projector() - base).ravel() for p in neighbours])
    singular = np.linalg.svd(differences, compute_uv=False)
    if singular[0] <= 1e-9:
        return 0
    return int(np.sum(singular >= threshold * singular[0]))


def contact_dimension(
    report: ContactReport,
    anchors: Optional[int] = None,
    neighbours: Optional[int] = None,
    radius: Optional[float] = None,
    threshold: Optional[float] = None,
    min_maximizers: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> int:
    """
    Estimate the dimension of the contact set of a maximized form.

    Each anchor maximizer is perturbed in random normal directions and the
    perturbed planes are re-ascended; the local rank of the resulting
    cloud in the projector embedding is the local dimension. The most
    frequent local rank is reported.

    Args:
        report: Result of maximize
        anchors: Number of maximizers used as anchors
        neighbours: Perturbations per anchor
        radius: Perturbation size
        threshold: Relative singular-value threshold
        min_maximizers: Minimum number of distinct maximizers pooled
        seed: Seed of the perturbations
        threads: Worker threads

    Returns:
        The estimated dimension

    Raises:
        InsufficientMaximizersError: If too few distinct maximizers exist
    """
    anchors = settings.CONTACT_ANCHORS if anchors is None else anchors
    neighbours = settings.CONTACT_NEIGHBOURS if neighbours is None else neighbours
    radius = settings.CONTACT_RADIUS if radius is None else radius
    threshold = settings.CONTACT_RANK_THRESHOLD if threshold is None else threshold
    min_maximizers = settings.CONTACT_MIN_MAXIMIZERS if min_maximizers is None else min_maximizers
    seed = settings.SEED if seed is None else seed
    threads = settings.NUM_THREADS if threads is None else threads

    if not report.maximizers:
        raise InsufficientMaximizersError("The report holds no maximizers")
    chosen = report.maximizers[:anchors]
    children = np.random.SeedSequence([seed, 1]).spawn(len(chosen))

    def explore(index: int) -> List[Plane]:
        rng = np.random.default_rng(children[index])
        return _neighbours(report, chosen[index], rng, neighbours, radius)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        clouds = list(executor.map(explore, range(len(chosen))))

    pooled = deduplicate(list(report.maximizers) + [p for cloud in clouds for p in cloud],
                         settings.DEDUP_ANGLE)
    if len(pooled) < min_maximizers:
        raise InsufficientMaximizersError(
            f"Only {len(pooled)} distinct maximizers, at least {min_maximizers} are needed"
        )

    ranks = [local_rank(anchor, cloud, threshold) for anchor, cloud in zip(chosen, clouds)]
    # Ties go to the smaller rank
    counts = Counter(ranks)
    dimension = min(counts, key=lambda r: (-counts[r], r))
    logger.info(f"Local ranks {ranks}, contact dimension {dimension} from {len(pooled)} maximizers")
    report.dimension = dimension
    report.diagnostics["local_ranks"] = ranks
    report.diagnostics["pooled_maximizers"] = len(pooled)
    return dimension
