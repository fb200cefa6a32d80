"""Cosine similarity between citing patterns."""

from __future__ import annotations

import numpy as np

from .model import CitationMatrix, SimilarityMatrix

__all__ = ["cosine_similarity"]


def cosine_similarity(m: CitationMatrix | np.ndarray) -> SimilarityMatrix:
    """Cosine similarity of every pair of citing-pattern rows.

    s_ij = <row_i, row_j> / (|row_i| |row_j|), clamped to [0, 1].  A row of
    all zeros gets similarity 0 to everything, itself included, so zero
    rows stay visible as isolated categories rather than failing the build.
    """
    a = m.values if isinstance(m, CitationMatrix) else np.asarray(m, dtype=float)
    norms = np.linalg.norm(a, axis=1)
    nonzero = norms > 0
    safe = np.where(nonzero, norms, 1.0)
    unit = a / safe[:, None]
    unit[~nonzero] = 0.0
    s = unit @ unit.T
    s = (s + s.T) / 2.0
    np.clip(s, 0.0, 1.0, out=s)
    np.fill_diagonal(s, np.where(nonzero, 1.0, 0.0))
    return SimilarityMatrix(s)
