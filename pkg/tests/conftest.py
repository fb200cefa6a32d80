from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from sciomap import CategoryRegistry, block_citation_matrix

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


@pytest.fixture
def small_registry() -> CategoryRegistry:
    return CategoryRegistry([f"Field {i:02d}" for i in range(1, 11)])


@pytest.fixture
def block_matrix(small_registry):
    return block_citation_matrix(small_registry, [4, 3, 3], seed=7)


def random_similarity(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random symmetric similarity values in [0, 1] with unit diagonal."""
    s = rng.uniform(0.0, 1.0, size=(n, n))
    s = (s + s.T) / 2.0
    np.fill_diagonal(s, 1.0)
    return s


def block_similarity(rng: np.random.Generator, sizes: list[int], lo: float = 0.55, hi: float = 0.95) -> np.ndarray:
    """Block-diagonal similarity: intra-block values in [lo, hi], zero between."""
    n = sum(sizes)
    s = np.zeros((n, n))
    start = 0
    for size in sizes:
        stop = start + size
        block = rng.uniform(lo, hi, size=(size, size))
        block = (block + block.T) / 2.0
        s[start:stop, start:stop] = block
        start = stop
    np.fill_diagonal(s, 1.0)
    return s
