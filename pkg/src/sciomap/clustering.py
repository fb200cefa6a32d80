"""Similarity clustering by greedy local moving with a resolution parameter.

The objective is sum over same-group pairs of (s_ij - resolution): raising
the resolution makes small tight groups win over large loose ones.  The
optimizer starts from singletons, repeatedly sweeps nodes in seeded random
order moving each to its best group, interleaves whole-group merges, and
keeps the best of several restarts.
"""

from __future__ import annotations

import numpy as np

from .model import Partition, SimilarityMatrix

__all__ = ["vos_clustering", "clustering_objective"]

#: smallest gain treated as a real improvement (guards float noise loops)
GAIN_EPS = 1e-12


def _weights(s) -> np.ndarray:
    values = s.values if isinstance(s, SimilarityMatrix) else np.asarray(s, dtype=float)
    w = np.array(values, dtype=float, copy=True)
    np.fill_diagonal(w, 0.0)
    return w


def clustering_objective(s, assignment, resolution: float) -> float:
    """sum_{i<j, same group} (s_ij - resolution) for a given assignment."""
    w = _weights(s)
    labels = np.asarray(
        assignment.assignment if isinstance(assignment, Partition) else assignment
    )
    same = labels[:, None] == labels[None, :]
    iu = np.triu_indices(w.shape[0], k=1)
    return float(((w - resolution) * same)[iu].sum())


def _local_move_pass(w: np.ndarray, labels: np.ndarray, order: np.ndarray, resolution: float) -> bool:
    n = w.shape[0]
    moved = False
    for i in order:
        li = labels[i]
        sizes = np.bincount(labels, minlength=n)
        comm_w = np.bincount(labels, weights=w[i], minlength=n)
        # gain of joining each group, relative to staying put; an empty
        # group slot doubles as the "split off alone" option (gain 0 there)
        stay = comm_w[li] - resolution * (sizes[li] - 1)
        delta = (comm_w - resolution * sizes) - stay
        delta[li] = 0.0
        best = int(np.argmax(delta))
        if delta[best] > GAIN_EPS:
            labels[i] = best
            moved = True
    return moved


def _merge_pass(w: np.ndarray, labels: np.ndarray, resolution: float) -> bool:
    """Greedily merge whole groups while any pairwise merge gain is positive."""
    merged_any = False
    used = np.unique(labels)
    k = used.size
    if k < 2:
        return False
    onehot = (labels[:, None] == used[None, :]).astype(float)
    between = onehot.T @ w @ onehot
    sizes = onehot.sum(axis=0)
    alive = np.ones(k, dtype=bool)
    gains = between - resolution * np.outer(sizes, sizes)
    np.fill_diagonal(gains, -np.inf)
    while True:
        masked = np.where(alive[:, None] & alive[None, :], gains, -np.inf)
        flat = int(np.argmax(masked))
        a, b = divmod(flat, k)
        if masked[a, b] <= GAIN_EPS:
            break
        keep, drop = min(a, b), max(a, b)
        labels[labels == used[drop]] = used[keep]
        between[keep, :] += between[drop, :]
        between[:, keep] += between[:, drop]
        sizes[keep] += sizes[drop]
        alive[drop] = False
        gains[keep, :] = between[keep, :] - resolution * sizes[keep] * sizes
        gains[:, keep] = gains[keep, :]
        gains[keep, keep] = -np.inf
        merged_any = True
    return merged_any


def _compact(labels: np.ndarray) -> Partition:
    """Renumber groups 1..k in decreasing size order (ties: earliest member)."""
    groups: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(idx)
    ordered = sorted(groups.values(), key=lambda members: (-len(members), members[0]))
    assignment = [0] * len(labels)
    for gid, members in enumerate(ordered, start=1):
        for idx in members:
            assignment[idx] = gid
    return Partition(assignment)


def _converge(w: np.ndarray, labels: np.ndarray, rng: np.random.Generator, resolution: float) -> None:
    for _ in range(200):  # safety bound; each cycle strictly improves
        moved = False
        while _local_move_pass(w, labels, rng.permutation(len(labels)), resolution):
            moved = True
        if _merge_pass(w, labels, resolution):
            moved = True
        if not moved:
            break


def vos_clustering(
    s, resolution: float, seed: int = 0, restarts: int = 10, kicks: int = 3
) -> Partition:
    """Cluster categories by similarity at the given resolution.

    Each restart converges local moves and merges from a fresh start:
    singletons first, then random assignments alternating between a few
    coarse groups and many scattered ones (coarse starts reach optima
    that need several nodes to move together).  After each restart,
    `kicks` perturbations of the best solution so far re-converge.
    Deterministic for a given seed; group ids come back compacted to 1..k
    in decreasing group-size order.
    """
    if resolution <= 0:
        raise ValueError(f"resolution must be > 0, got {resolution}")
    w = _weights(s)
    n = w.shape[0]
    if n == 0:
        raise ValueError("cannot cluster an empty similarity matrix")
    if n == 1:
        return Partition([1])

    rng = np.random.default_rng(seed)
    best_labels: np.ndarray | None = None
    best_q = -np.inf
    for r in range(max(1, restarts)):
        if r == 0:
            labels = np.arange(n)
        elif r % 2 == 1:
            k = int(rng.integers(2, min(n, 6) + 1)) if n > 2 else n
            labels = rng.integers(0, k, n)
        else:
            labels = rng.integers(0, n, n)
        _converge(w, labels, rng, resolution)
        q = clustering_objective(w, labels, resolution)
        if q > best_q + GAIN_EPS:
            best_labels, best_q = labels.copy(), q
        for _ in range(kicks):
            assert best_labels is not None
            candidate = best_labels.copy()
            m = int(rng.integers(1, max(2, n // 2 + 1)))
            idx = rng.choice(n, size=m, replace=False)
            candidate[idx] = rng.integers(0, n, m)
            _converge(w, candidate, rng, resolution)
            q = clustering_objective(w, candidate, resolution)
            if q > best_q + GAIN_EPS:
                best_labels, best_q = candidate.copy(), q
    assert best_labels is not None
    return _compact(best_labels)
