"""Seeded synthetic citation matrices for demos, tests, and calibration.

Real aggregated citation data is licensed and not shipped; these
generators produce matrices with the same kind of structure (nested
disciplinary blocks, skewed activity) so the whole pipeline can be
exercised end to end.
"""

from __future__ import annotations

import numpy as np

from .model import CategoryRegistry, CitationMatrix
from .shipped import default_registry

__all__ = ["synthetic_citation_matrix", "block_citation_matrix"]

# nesting of the 19 fine groups into 6 mid groups into 4 top groups
_MID_OF_FINE = np.repeat(np.arange(6), [4, 3, 3, 3, 3, 3])
_TOP_OF_MID = np.array([0, 0, 1, 1, 2, 3])


def _split_sizes(n: int, k: int, rng: np.random.Generator, min_size: int) -> np.ndarray:
    weights = rng.uniform(0.75, 1.25, size=k)
    sizes = np.maximum(min_size, np.floor(n * weights / weights.sum()).astype(int))
    while sizes.sum() > n:
        sizes[int(np.argmax(sizes))] -= 1
    while sizes.sum() < n:
        sizes[int(np.argmin(sizes))] += 1
    return sizes


def synthetic_citation_matrix(
    registry: CategoryRegistry | None = None, seed: int = 0
) -> CitationMatrix:
    """Hierarchically structured citation counts over a registry.

    Categories sit in 19 fine groups nested into 6 and then 4 coarser
    ones; citing rates rise with every level shared, plus a strong
    self-citation diagonal and skewed per-category activity.  Needs a
    registry of at least 96 categories (default: the shipped one).
    """
    registry = registry or default_registry()
    n = len(registry)
    if n < 96:
        raise ValueError(f"hierarchical synthetic data needs n >= 96, got {n}")
    rng = np.random.default_rng(seed)

    fine_sizes = _split_sizes(n, 19, rng, min_size=5)
    fine = np.repeat(np.arange(19), fine_sizes)
    mid = _MID_OF_FINE[fine]
    top = _TOP_OF_MID[mid]

    rate = (
        0.3
        + 2.0 * (top[:, None] == top[None, :])
        + 8.0 * (mid[:, None] == mid[None, :])
        + 40.0 * (fine[:, None] == fine[None, :])
    )
    activity = rng.lognormal(mean=0.0, sigma=0.4, size=n)
    counts = rng.poisson(rate * activity[:, None]).astype(float)
    counts[np.diag_indices(n)] += rng.poisson(60.0 * activity)
    return CitationMatrix(counts, registry)


def block_citation_matrix(
    registry: CategoryRegistry,
    block_sizes: list[int],
    seed: int = 0,
    intra_rate: float = 30.0,
) -> CitationMatrix:
    """Citation counts with disjoint citing blocks (zero between blocks).

    Rows of different blocks have disjoint support, so their cosine
    similarity is exactly zero: the planted partition is recoverable by
    construction.
    """
    n = len(registry)
    if sum(block_sizes) != n:
        raise ValueError(f"block sizes sum to {sum(block_sizes)}, registry has {n}")
    rng = np.random.default_rng(seed)
    counts = np.zeros((n, n))
    start = 0
    for size in block_sizes:
        stop = start + size
        counts[start:stop, start:stop] = rng.poisson(intra_rate, size=(size, size))
        start = stop
    counts[np.diag_indices(n)] += 10.0
    return CitationMatrix(counts, registry)
