"""Principal-component factor extraction with varimax rotation.

The similarity matrix is treated as the correlation structure of the
citing patterns: loadings come from its leading eigenpairs and are then
rotated to simple structure, and each category is assigned to the factor
on which it loads most heavily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CitationMatrix, Partition, SimilarityMatrix
from .similarity import cosine_similarity

__all__ = ["FactorModel", "factor_analysis", "varimax"]

#: eigenvalues at or below this are treated as numerically zero rank
RANK_EPS = 1e-10


@dataclass(frozen=True)
class FactorModel:
    """Rotated loadings plus the per-category factor assignment.

    `k` is the number of factors actually extracted; when the input has
    fewer than the requested number of informative components, `k` is
    reduced and `rank_deficient` is set instead of failing.
    """

    k: int
    requested_k: int
    loadings: np.ndarray
    explained_variance_ratio: tuple[float, ...]
    assignment: Partition
    rank_deficient: bool

    @property
    def total_variance_ratio(self) -> float:
        return float(sum(self.explained_variance_ratio))


def varimax(loadings: np.ndarray, tol: float = 1e-8, max_sweeps: int = 200) -> np.ndarray:
    """Rotate loading columns pairwise until the varimax criterion stalls.

    Plain (un-normalized) varimax: repeated 2-column rotations, each by the
    closed-form optimal angle, sweeping all column pairs until one full
    sweep improves the criterion by less than `tol` or `max_sweeps` sweeps
    have run.  The rotation is orthogonal, so the total sum of squared
    loadings is preserved.
    """
    L = np.array(loadings, dtype=float, copy=True)
    n, k = L.shape
    if k < 2 or n == 0:
        return L
    crit = _varimax_criterion(L)
    for _ in range(max_sweeps):
        for p in range(k - 1):
            for q in range(p + 1, k):
                x = L[:, p].copy()
                y = L[:, q].copy()
                u = x * x - y * y
                v = 2.0 * x * y
                numer = 2.0 * (u @ v) - 2.0 * u.sum() * v.sum() / n
                denom = (u @ u) - (v @ v) - (u.sum() ** 2 - v.sum() ** 2) / n
                theta = 0.25 * np.arctan2(numer, denom)
                if abs(theta) < 1e-15:
                    continue
                c, s = np.cos(theta), np.sin(theta)
                L[:, p] = c * x + s * y
                L[:, q] = -s * x + c * y
        new_crit = _varimax_criterion(L)
        if new_crit - crit < tol:
            break
        crit = new_crit
    return L


def _varimax_criterion(L: np.ndarray) -> float:
    n = L.shape[0]
    sq = L * L
    return float(np.sum(sq * sq) - np.sum(sq.sum(axis=0) ** 2) / n)


def _canonical_signs(L: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if L.size == 0:
        return L
    idx = np.argmax(np.abs(L), axis=0)
    signs = np.sign(L[idx, np.arange(L.shape[1])])
    signs[signs == 0] = 1.0
    return L * signs


def factor_analysis(x, k: int = 19) -> FactorModel:
    """Extract the top `k` components of a similarity matrix and rotate them.

    Steps: eigendecomposition of the (symmetric) input, loadings =
    eigenvector * sqrt(eigenvalue) for the `k` largest eigenvalues, varimax
    rotation, then per-row assignment to the factor with the largest
    absolute rotated loading (ties break toward the lower factor index).
    Factors that end up with no categories are dropped and the assignment
    ids are compacted.

    Accepts a SimilarityMatrix, a CitationMatrix (its cosine similarity is
    used), or a plain square array.
    """
    if isinstance(x, CitationMatrix):
        x = cosine_similarity(x)
    values = x.values if isinstance(x, SimilarityMatrix) else np.asarray(x, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"factor analysis needs a square matrix, got shape {values.shape}")
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")

    sym = (values + values.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    usable = int(np.sum(eigvals > RANK_EPS))
    k_eff = min(k, usable)
    rank_deficient = k_eff < k
    if k_eff == 0:
        # nothing to extract: degenerate all-zero structure
        assignment = Partition([1] * n) if n else Partition([1])
        return FactorModel(
            k=0,
            requested_k=k,
            loadings=np.zeros((n, 0)),
            explained_variance_ratio=(),
            assignment=assignment,
            rank_deficient=True,
        )

    loadings = eigvecs[:, :k_eff] * np.sqrt(eigvals[:k_eff])
    rotated = varimax(loadings)
    rotated = _canonical_signs(rotated)

    total_variance = float(np.trace(sym))
    ss = (rotated * rotated).sum(axis=0)
    col_order = np.argsort(-ss, kind="stable")
    rotated = rotated[:, col_order]
    ss = ss[col_order]
    ratios = ss / total_variance if total_variance > 0 else np.zeros_like(ss)

    raw_assignment = np.argmax(np.abs(rotated), axis=1)  # argmax takes the first max
    used = sorted(set(int(f) for f in raw_assignment))
    remap = {f: i + 1 for i, f in enumerate(used)}
    assignment = Partition([remap[int(f)] for f in raw_assignment])

    rotated = np.ascontiguousarray(rotated)
    rotated.flags.writeable = False
    return FactorModel(
        k=k_eff,
        requested_k=k,
        loadings=rotated,
        explained_variance_ratio=tuple(float(r) for r in ratios),
        assignment=assignment,
        rank_deficient=rank_deficient,
    )
