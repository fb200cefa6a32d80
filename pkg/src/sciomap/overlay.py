"""Projection of a document set onto a base map as sized overlay nodes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegistryMismatch
from .model import BaseMap, OverlayVector

__all__ = ["OverlayMap", "project", "DEFAULT_SIZE_MIN", "DEFAULT_SIZE_MAX"]

DEFAULT_SIZE_MIN = 2.0
DEFAULT_SIZE_MAX = 40.0


@dataclass(frozen=True)
class OverlayMap:
    """A base map plus per-node display sizes for one document set.

    A size of 0 means the category had no documents and is hidden;
    coordinates and partitions are those of the base map, untouched.
    """

    base: BaseMap
    overlay: OverlayVector
    sizes: np.ndarray

    @property
    def visible(self) -> np.ndarray:
        return self.sizes > 0


def project(
    base: BaseMap,
    ov: OverlayVector,
    size_min: float = DEFAULT_SIZE_MIN,
    size_max: float = DEFAULT_SIZE_MAX,
) -> OverlayMap:
    """Size each base-map node by the document set's share of its category.

    size_i = size_min + (size_max - size_min) * sqrt(p_i / max_j p_j), so
    node area tracks proportion; zero-count categories get size 0.
    """
    if ov.registry != base.registry:
        raise RegistryMismatch(
            "overlay was built against a different registry than the base map"
        )
    if size_min < 0 or size_max < size_min:
        raise ValueError("need 0 <= size_min <= size_max")
    p = ov.proportions
    sizes = np.zeros(len(p))
    top = float(p.max()) if p.size else 0.0
    if top > 0:
        nz = p > 0
        sizes[nz] = size_min + (size_max - size_min) * np.sqrt(p[nz] / top)
    sizes = np.ascontiguousarray(sizes)
    sizes.flags.writeable = False
    return OverlayMap(base, ov, sizes)
