from __future__ import annotations

import math

import numpy as np
import pytest

from sciomap import (
    BaseMapConfig,
    CategoryRegistry,
    DimensionMismatch,
    DiversityInput,
    OverlayVector,
    block_citation_matrix,
    build_base_map,
    overlay_diversity,
    rao_stirling,
)


def oracle_rao(p, d, alpha=1.0, beta=1.0) -> float:
    """Explicit double loop over ordered pairs; exact accumulation."""
    n = len(p)
    terms = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            pp = p[i] * p[j]
            if pp > 0 and d[i][j] > 0:
                terms.append(pp**alpha * d[i][j] ** beta)
    return math.fsum(terms)


def random_instance(rng, n):
    p = rng.dirichlet(np.ones(n))
    d = rng.uniform(0, 1, size=(n, n))
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    return p, d


def test_single_category_is_zero():
    assert rao_stirling(DiversityInput([1.0], np.zeros((1, 1)))) == 0.0


def test_two_categories_hand_value():
    inp = DiversityInput([0.5, 0.5], [[0.0, 0.4], [0.4, 0.0]])
    # ordered pairs: 2 * (0.5 * 0.5 * 0.4) = 0.2
    assert rao_stirling(inp) == pytest.approx(0.2, abs=1e-15)


@pytest.mark.parametrize("seed", range(6))
def test_matches_double_loop_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 120))
    p, d = random_instance(rng, n)
    inp = DiversityInput(p, d)
    assert rao_stirling(inp) == pytest.approx(
        oracle_rao(p.tolist(), d.tolist()), abs=1e-12
    )


@pytest.mark.parametrize("seed", range(3))
def test_general_exponents_match_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 40))
    p, d = random_instance(rng, n)
    alpha, beta = float(rng.uniform(0, 2)), float(rng.uniform(0, 2))
    inp = DiversityInput(p, d)
    assert rao_stirling(inp, alpha, beta) == pytest.approx(
        oracle_rao(p.tolist(), d.tolist(), alpha, beta), abs=1e-12
    )


def test_zero_exponents_count_co_occurring_pairs():
    p = np.array([0.5, 0.3, 0.2, 0.0])
    d = np.ones((4, 4)) - np.eye(4)
    inp = DiversityInput(p, d)
    n_nz = 3
    assert rao_stirling(inp, alpha=0.0, beta=0.0) == pytest.approx(n_nz * (n_nz - 1))


def test_zero_exponents_skip_zero_distances():
    p = np.array([0.5, 0.25, 0.25])
    d = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    inp = DiversityInput(p, d)
    # pairs (1,3),(3,1),(2,3),(3,2) have d > 0; (1,2),(2,1) do not
    assert rao_stirling(inp, alpha=0.0, beta=0.0) == pytest.approx(4.0)


@pytest.mark.parametrize("seed", range(5))
def test_bounds(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(2, 100))
    p, d = random_instance(rng, n)
    value = rao_stirling(DiversityInput(p, d))
    assert 0.0 <= value <= 1.0 - float(np.sum(p * p)) + 1e-12


def test_zero_iff_concentrated():
    n = 6
    p = np.zeros(n)
    p[2] = 1.0
    d = 1.0 - np.eye(n)
    assert rao_stirling(DiversityInput(p, d)) == 0.0
    # spread mass with all distances positive -> strictly positive
    q = np.full(n, 1.0 / n)
    assert rao_stirling(DiversityInput(q, d)) > 0.0


def test_permutation_symmetry():
    rng = np.random.default_rng(300)
    p, d = random_instance(rng, 12)
    perm = rng.permutation(12)
    a = rao_stirling(DiversityInput(p, d))
    b = rao_stirling(DiversityInput(p[perm], d[np.ix_(perm, perm)]))
    assert a == pytest.approx(b, abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        DiversityInput([0.5, 0.5], np.zeros((3, 3)))


def test_negative_exponents_rejected():
    inp = DiversityInput([0.5, 0.5], [[0.0, 0.4], [0.4, 0.0]])
    with pytest.raises(ValueError):
        rao_stirling(inp, alpha=-1.0)


def test_overlay_diversity_matches_manual():
    registry = CategoryRegistry([f"Field {i:02d}" for i in range(1, 11)])
    matrix = block_citation_matrix(registry, [4, 3, 3], seed=5)
    base = build_base_map(matrix, config=BaseMapConfig(k_factors=3))
    counts = np.zeros(10, dtype=np.int64)
    counts[0], counts[5], counts[9] = 4, 3, 3
    ov = OverlayVector(counts, registry)
    value = overlay_diversity(base, ov)
    d = base.similarity.distances()
    assert value == pytest.approx(
        oracle_rao(ov.proportions.tolist(), d.tolist()), abs=1e-12
    )
