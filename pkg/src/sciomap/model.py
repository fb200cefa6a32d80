"""Core domain types shared by every stage of the pipeline.

All types here are immutable after construction (ndarrays are marked
read-only), so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    NegativeCell,
    NotSquare,
)

__all__ = [
    "normalize_label",
    "CategoryRegistry",
    "CitationMatrix",
    "SimilarityMatrix",
    "Partition",
    "BaseMap",
    "OverlayVector",
    "DiversityInput",
]


def normalize_label(raw: str) -> str:
    """Collapse a category label to its canonical lookup form.

    Case-folds, trims, collapses internal whitespace, and unifies the
    standalone word "and" with "&" so that differently capitalized or
    punctuated spellings of the same category compare equal.  Commas are
    preserved.
    """
    tokens = raw.casefold().split()
    return " ".join("&" if t == "and" else t for t in tokens)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


class CategoryRegistry:
    """Ordered list of canonical category labels with contiguous 1-based ids."""

    def __init__(self, labels: Sequence[str]):
        cleaned = tuple(" ".join(str(lb).split()) for lb in labels)
        index: dict[str, int] = {}
        for i, label in enumerate(cleaned, start=1):
            key = normalize_label(label)
            if not key:
                raise DuplicateLabel(f"entry {i} is empty after normalization")
            if key in index:
                raise DuplicateLabel(
                    f"label {label!r} (id {i}) collides with id {index[key]} "
                    f"after normalization"
                )
            index[key] = i
        self._labels = cleaned
        self._index = index

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def entries(self) -> tuple[tuple[int, str], ...]:
        return tuple(enumerate(self._labels, start=1))

    def label(self, category_id: int) -> str:
        if not 1 <= category_id <= len(self._labels):
            raise KeyError(f"category id {category_id} out of range 1..{len(self._labels)}")
        return self._labels[category_id - 1]

    def lookup(self, raw: str) -> Optional[int]:
        """Return the id whose canonical label normalizes equal to `raw`, or None."""
        return self._index.get(normalize_label(raw))

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CategoryRegistry) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"CategoryRegistry({len(self._labels)} categories)"


def lookup(registry: CategoryRegistry, raw: str) -> Optional[int]:
    """Module-level alias for :meth:`CategoryRegistry.lookup`."""
    return registry.lookup(raw)


class CitationMatrix:
    """Square non-negative matrix of aggregated citations among categories.

    Rows are citing categories, columns are cited categories; both run in
    registry id order.  Rows of all zeros are permitted (categories that are
    cited but never cite) and are reported via :attr:`zero_rows`.
    """

    def __init__(self, values, registry: CategoryRegistry):
        a = np.asarray(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSquare(f"citation matrix must be square, got shape {a.shape}")
        if a.shape[0] != len(registry):
            raise DimensionMismatch(
                f"matrix is {a.shape[0]}x{a.shape[0]} but registry has "
                f"{len(registry)} categories"
            )
        if not np.all(np.isfinite(a)):
            raise NegativeCell("citation matrix contains non-finite cells")
        if np.any(a < 0):
            i, j = np.argwhere(a < 0)[0]
            raise NegativeCell(f"negative citation count at row {i + 1}, column {j + 1}")
        self.values = _readonly(a.copy())
        self.registry = registry

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def zero_rows(self) -> tuple[int, ...]:
        """1-based ids of categories whose citing pattern is all zeros."""
        return tuple(int(i) + 1 for i in np.flatnonzero(~self.values.any(axis=1)))


class SimilarityMatrix:
    """Symmetric matrix of cosine similarities clamped to [0, 1].

    The diagonal is exactly 1 for categories with a nonzero citing pattern
    and 0 for all-zero rows.
    """

    #: tolerated asymmetry before construction fails
    SYMMETRY_TOL = 1e-12

    def __init__(self, values):
        a = np.asarray(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSquare(f"similarity matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DimensionMismatch("similarity matrix contains non-finite values")
        if a.size and np.max(np.abs(a - a.T)) > self.SYMMETRY_TOL:
            raise DimensionMismatch("similarity matrix is not symmetric within 1e-12")
        a = (a + a.T) / 2.0
        self.values = _readonly(np.clip(a, 0.0, 1.0))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def distances(self) -> np.ndarray:
        """Pairwise distance matrix d = 1 - s with an exactly zero diagonal."""
        d = 1.0 - self.values
        np.fill_diagonal(d, 0.0)
        return _readonly(d)


class Partition:
    """Assignment of every category to exactly one of k groups (ids 1..k)."""

    def __init__(self, assignment: Sequence[int], group_names: Optional[Sequence[str]] = None):
        groups = tuple(int(g) for g in assignment)
        if not groups:
            raise DimensionMismatch("partition over zero categories")
        k = max(groups)
        if min(groups) < 1:
            raise DimensionMismatch("group ids must be >= 1")
        present = set(groups)
        missing = [g for g in range(1, k + 1) if g not in present]
        if missing:
            raise DimensionMismatch(f"group ids not contiguous, missing {missing}")
        names: Optional[tuple[str, ...]] = None
        if group_names is not None:
            names = tuple(str(nm) for nm in group_names)
            if len(names) != k:
                raise DimensionMismatch(f"expected {k} group names, got {len(names)}")
        self.assignment = groups
        self.k = k
        self.group_names = names

    @property
    def n(self) -> int:
        return len(self.assignment)

    def group_of(self, category_id: int) -> int:
        return self.assignment[category_id - 1]

    def members(self, group: int) -> tuple[int, ...]:
        return tuple(i + 1 for i, g in enumerate(self.assignment) if g == group)

    def sizes(self) -> tuple[int, ...]:
        counts = [0] * self.k
        for g in self.assignment:
            counts[g - 1] += 1
        return tuple(counts)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Partition)
            and self.assignment == other.assignment
            and self.group_names == other.group_names
        )

    def __hash__(self) -> int:
        return hash((self.assignment, self.group_names))

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, k={self.k})"


@dataclass(frozen=True)
class BaseMap:
    """A fixed global map of science over one registry.

    Carries 2-D coordinates (mean pairwise distance 1), the three default
    partitions, node weights in [0, 1], the similarity edges kept for
    display, and the full similarity matrix the distances derive from.
    """

    registry: CategoryRegistry
    coords: np.ndarray
    partition19: Partition
    partition6: Partition
    partition4: Partition
    weights: np.ndarray
    edges: tuple[tuple[int, int, float], ...]
    similarity: SimilarityMatrix
    factor_model: Optional[object] = None
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.registry)
        coords = _readonly(np.asarray(self.coords, dtype=float))
        weights = _readonly(np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", weights)
        if coords.shape != (n, 2):
            raise DimensionMismatch(f"expected {n}x2 coordinates, got {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise DimensionMismatch("coordinates contain non-finite values")
        if weights.shape != (n,):
            raise DimensionMismatch(f"expected {n} node weights, got {weights.shape}")
        if np.any(weights < 0) or np.any(weights > 1 + 1e-12):
            raise DimensionMismatch("node weights must lie in [0, 1]")
        for part in (self.partition19, self.partition6, self.partition4):
            if part.n != n:
                raise DimensionMismatch("partition size does not match registry")
        if self.similarity.n != n:
            raise DimensionMismatch("similarity size does not match registry")
        if n >= 2:
            mean = mean_pairwise_distance(coords)
            if abs(mean - 1.0) > 1e-6:
                raise DimensionMismatch(
                    f"mean pairwise coordinate distance is {mean:.9f}, expected 1"
                )
        for i, j, s in self.edges:
            if not (1 <= i < j <= n):
                raise DimensionMismatch(f"edge ({i}, {j}) out of range")

    @property
    def n(self) -> int:
        return len(self.registry)

    def partition(self, choice: int) -> Partition:
        try:
            return {19: self.partition19, 6: self.partition6, 4: self.partition4}[choice]
        except KeyError:
            raise KeyError(f"partition choice must be 4, 6 or 19, got {choice}") from None


def mean_pairwise_distance(coords: np.ndarray) -> float:
    """Average Euclidean distance over all unordered point pairs."""
    x = np.asarray(coords, dtype=float)
    n = x.shape[0]
    if n < 2:
        return 0.0
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    iu = np.triu_indices(n, k=1)
    return float(dist[iu].mean())


class OverlayVector:
    """Per-category counts of one document set plus derived proportions.

    Proportions are taken over the matched counts only; rows that failed
    registry matching are kept in :attr:`unmatched` so callers can report
    them.
    """

    def __init__(
        self,
        counts,
        registry: CategoryRegistry,
        unmatched: Sequence[tuple[str, int]] = (),
    ):
        c = np.asarray(counts, dtype=np.int64)
        if c.ndim != 1 or c.shape[0] != len(registry):
            raise DimensionMismatch(
                f"expected {len(registry)} counts, got shape {c.shape}"
            )
        if np.any(c < 0):
            raise NegativeCell("overlay counts must be non-negative")
        self.counts = _readonly(c.copy())
        self.registry = registry
        self.unmatched = tuple((str(lb), int(ct)) for lb, ct in unmatched)
        total = int(c.sum())
        if total > 0:
            self.proportions = _readonly(c / float(total))
        else:
            self.proportions = _readonly(np.zeros(len(registry)))

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def total_matched(self) -> int:
        return int(self.counts.sum())

    @property
    def total_unmatched(self) -> int:
        return sum(ct for _, ct in self.unmatched)


class DiversityInput:
    """Proportion vector plus pairwise distance matrix for diversity measures."""

    def __init__(self, p, d):
        pv = np.asarray(p, dtype=float)
        dm = np.asarray(d, dtype=float)
        if pv.ndim != 1:
            raise DimensionMismatch("proportions must be a vector")
        if dm.shape != (pv.size, pv.size):
            raise DimensionMismatch(
                f"distance matrix shape {dm.shape} does not match {pv.size} proportions"
            )
        if np.any(pv < 0):
            raise DimensionMismatch("proportions must be non-negative")
        if abs(float(pv.sum()) - 1.0) > 1e-9:
            raise DimensionMismatch(f"proportions sum to {pv.sum():.12f}, expected 1")
        if dm.size:
            if np.max(np.abs(dm - dm.T)) > 1e-12:
                raise DimensionMismatch("distance matrix is not symmetric")
            if np.max(np.abs(np.diagonal(dm))) > 1e-12:
                raise DimensionMismatch("distance matrix diagonal must be zero")
            if np.min(dm) < -1e-12 or np.max(dm) > 1 + 1e-12:
                raise DimensionMismatch("distances must lie in [0, 1]")
        dm = (dm + dm.T) / 2.0
        np.fill_diagonal(dm, 0.0)
        self.p = _readonly(pv.copy())
        self.d = _readonly(np.clip(dm, 0.0, 1.0))

    @property
    def n(self) -> int:
        return self.p.shape[0]
