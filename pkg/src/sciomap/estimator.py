"""Sklearn-style estimator facade over the mapping pipeline.

fit() learns a base map from a square category-citation matrix;
transform() turns document-set category counts into overlay proportions;
score() reports mean Rao-Stirling diversity.  Parameters follow the
scikit-learn contract (stored verbatim, so clone() and grid search work).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .basemap import BaseMapConfig, build_base_map
from .diversity import overlay_diversity
from .model import CategoryRegistry, CitationMatrix, OverlayVector
from .overlay import DEFAULT_SIZE_MAX, DEFAULT_SIZE_MIN, OverlayMap, project

__all__ = ["OverlayMapper"]


class OverlayMapper(BaseEstimator, TransformerMixin):
    """Learn a base map of science and project document sets onto it.

    Parameters mirror the base-map build configuration plus the display
    size range used by :meth:`project`.
    """

    def __init__(
        self,
        k_factors: int = 19,
        threshold: float = 0.15,
        resolution6: float = BaseMapConfig.resolution6,
        resolution4: float = BaseMapConfig.resolution4,
        seed: int = 0,
        restarts: int = 10,
        size_min: float = DEFAULT_SIZE_MIN,
        size_max: float = DEFAULT_SIZE_MAX,
    ):
        self.k_factors = k_factors
        self.threshold = threshold
        self.resolution6 = resolution6
        self.resolution4 = resolution4
        self.seed = seed
        self.restarts = restarts
        self.size_min = size_min
        self.size_max = size_max

    def fit(self, X, y=None, labels=None):
        """Build the base map from a square citation-count matrix.

        `X` may be a CitationMatrix (already bound to a registry) or a
        square array; for arrays, `labels` names the categories (generated
        names are used when omitted).
        """
        if isinstance(X, CitationMatrix):
            cm = X
        else:
            a = check_array(X, dtype=float)
            if a.shape[0] != a.shape[1]:
                raise ValueError(f"citation matrix must be square, got {a.shape}")
            if labels is None:
                labels = [f"category {i + 1:03d}" for i in range(a.shape[0])]
            cm = CitationMatrix(a, CategoryRegistry(labels))
        config = BaseMapConfig(
            k_factors=self.k_factors,
            threshold=self.threshold,
            resolution6=self.resolution6,
            resolution4=self.resolution4,
            seed=self.seed,
            restarts=self.restarts,
        )
        self.basemap_ = build_base_map(cm, config=config)
        self.registry_ = cm.registry
        self.n_features_in_ = cm.n
        self.coords_ = self.basemap_.coords
        self.weights_ = self.basemap_.weights
        self.similarity_ = self.basemap_.similarity.values
        self.partitions_ = {
            19: self.basemap_.partition19,
            6: self.basemap_.partition6,
            4: self.basemap_.partition4,
        }
        self.explained_variance_ratio_ = np.asarray(
            self.basemap_.factor_model.explained_variance_ratio
        )
        return self

    def _overlay(self, counts) -> OverlayVector:
        c = np.asarray(counts)
        if c.shape != (self.n_features_in_,):
            raise ValueError(
                f"expected {self.n_features_in_} counts, got shape {c.shape}"
            )
        if np.any(c < 0):
            raise ValueError("counts must be non-negative")
        return OverlayVector(np.rint(c).astype(np.int64), self.registry_)

    def transform(self, X):
        """Counts -> overlay proportions, row-wise; shape follows the input."""
        check_is_fitted(self, "basemap_")
        a = check_array(X, dtype=float, ensure_2d=False)
        single = a.ndim == 1
        rows = a.reshape(1, -1) if single else a
        if rows.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} count columns, got {rows.shape[1]}"
            )
        if np.any(rows < 0):
            raise ValueError("counts must be non-negative")
        totals = rows.sum(axis=1)
        if np.any(totals <= 0):
            raise ValueError("every row needs a positive total count")
        props = rows / totals[:, None]
        return props[0] if single else props

    def project(self, counts) -> OverlayMap:
        """Counts for one document set -> sized overlay map."""
        check_is_fitted(self, "basemap_")
        return project(
            self.basemap_, self._overlay(counts), self.size_min, self.size_max
        )

    def diversity(self, counts, alpha: float = 1.0, beta: float = 1.0) -> float:
        """Rao-Stirling diversity of one document set on the fitted map."""
        check_is_fitted(self, "basemap_")
        return overlay_diversity(self.basemap_, self._overlay(counts), alpha, beta)

    def score(self, X, y=None) -> float:
        """Mean Rao-Stirling diversity over the given count rows."""
        check_is_fitted(self, "basemap_")
        a = np.asarray(X, dtype=float)
        rows = a.reshape(1, -1) if a.ndim == 1 else a
        return float(np.mean([self.diversity(row) for row in rows]))
