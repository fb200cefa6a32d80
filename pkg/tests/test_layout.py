from __future__ import annotations

import numpy as np
import pytest

from sciomap import vos_layout
from sciomap.model import mean_pairwise_distance

from conftest import block_similarity, random_similarity


def pair_distances(coords: np.ndarray) -> list[float]:
    n = len(coords)
    return [
        float(np.linalg.norm(coords[i] - coords[j]))
        for i in range(n)
        for j in range(i + 1, n)
    ]


def constrained_objective(coords: np.ndarray, s: np.ndarray) -> float:
    """Oracle objective: rescale to the unit-mean-distance constraint, then
    sum similarity-weighted squared distances."""
    d = pair_distances(coords)
    scale = (len(d) / sum(d)) if sum(d) else 1.0
    n = len(coords)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dij = float(np.linalg.norm(coords[i] - coords[j])) * scale
            total += s[i, j] * dij * dij
    return total


def test_two_nodes_distance_exactly_one():
    res = vos_layout(np.array([[1.0, 0.7], [0.7, 1.0]]), seed=0)
    d = float(np.linalg.norm(res.coords[0] - res.coords[1]))
    assert abs(d - 1.0) <= 1e-9


def test_three_equal_similarities_equilateral():
    s = np.full((3, 3), 0.6)
    np.fill_diagonal(s, 1.0)
    res = vos_layout(s, seed=1)
    sides = pair_distances(res.coords)
    for side in sides:
        assert abs(side - 1.0) <= 1e-6


def test_three_node_objective_matches_scipy_oracle():
    scipy_optimize = pytest.importorskip("scipy.optimize")
    rng = np.random.default_rng(42)
    s = np.array([[1.0, 0.9, 0.2], [0.9, 1.0, 0.4], [0.2, 0.4, 1.0]])

    def penalized(flat):
        coords = flat.reshape(3, 2)
        dists = pair_distances(coords)
        mean = sum(dists) / len(dists)
        total = sum(
            s[i, j] * (np.linalg.norm(coords[i] - coords[j]) / mean) ** 2
            for i in range(3)
            for j in range(i + 1, 3)
        )
        return total

    best = np.inf
    for _ in range(8):
        start = rng.uniform(-1, 1, size=6)
        out = scipy_optimize.minimize(penalized, start, method="Nelder-Mead",
                                      options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 5000})
        best = min(best, out.fun)

    ours = constrained_objective(vos_layout(s, seed=3).coords, s)
    assert ours <= best * (1 + 1e-6) + 1e-9


@pytest.mark.parametrize("seed,n", [(0, 5), (1, 12), (2, 30)])
def test_constraint_and_monotone_history(seed, n):
    rng = np.random.default_rng(seed)
    s = random_similarity(rng, n)
    res = vos_layout(s, seed=seed)
    assert abs(mean_pairwise_distance(res.coords) - 1.0) <= 1e-6
    history = res.objective_history
    assert all(b <= a for a, b in zip(history, history[1:]))


def test_deterministic_given_seed():
    rng = np.random.default_rng(11)
    s = random_similarity(rng, 15)
    a = vos_layout(s, seed=4)
    b = vos_layout(s, seed=4)
    assert np.array_equal(a.coords, b.coords)
    assert a.objective_history == b.objective_history


def test_all_zero_similarity_gives_seeded_circle():
    res = vos_layout(np.zeros((6, 6)), seed=5)
    assert res.degenerate
    assert abs(mean_pairwise_distance(res.coords) - 1.0) <= 1e-9
    radii = np.linalg.norm(res.coords - res.coords.mean(axis=0), axis=1)
    assert np.allclose(radii, radii[0])


def test_disconnected_blocks_packed_apart():
    rng = np.random.default_rng(6)
    s = block_similarity(rng, [4, 3])
    res = vos_layout(s, seed=6)
    assert res.disconnected
    assert abs(mean_pairwise_distance(res.coords) - 1.0) <= 1e-6
    # the two blocks should not overlap
    a, b = res.coords[:4], res.coords[4:]
    gap = min(np.linalg.norm(p - q) for p in a for q in b)
    intra = max(pair_distances(a))
    assert gap > intra / 4


def test_single_node():
    res = vos_layout(np.array([[1.0]]), seed=0)
    assert res.coords.shape == (1, 2)
    assert res.degenerate


def test_centered_and_axis_aligned():
    rng = np.random.default_rng(13)
    s = random_similarity(rng, 9)
    coords = vos_layout(s, seed=13).coords
    assert np.allclose(coords.mean(axis=0), 0.0, atol=1e-9)
    cov = coords.T @ coords
    assert abs(cov[0, 1]) <= 1e-8 * max(cov[0, 0], 1.0)
    assert cov[0, 0] >= cov[1, 1] - 1e-12
