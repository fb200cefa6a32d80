"""Rao-Stirling diversity of a proportion vector over a distance matrix."""

from __future__ import annotations

import numpy as np

from .errors import RegistryMismatch
from .model import BaseMap, DiversityInput, OverlayVector

__all__ = ["rao_stirling", "overlay_diversity"]


def rao_stirling(inp: DiversityInput, alpha: float = 1.0, beta: float = 1.0) -> float:
    """delta = sum over ordered pairs i != j of (p_i p_j)^alpha * d_ij^beta.

    With alpha = beta = 1 this is the Rao-Stirling index (each unordered
    pair counted twice).  Zero factors contribute nothing for any exponent,
    so alpha = beta = 0 counts the ordered pairs of co-occurring categories
    at nonzero distance rather than treating 0^0 as 1.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    p, d = inp.p, inp.d
    if alpha == 1.0 and beta == 1.0:
        return float(p @ d @ p)  # zero diagonal kills the i == j terms
    pp = np.outer(p, p)
    active = (pp > 0) & (d > 0)
    return float(np.sum(pp[active] ** alpha * d[active] ** beta))


def overlay_diversity(
    base: BaseMap, ov: OverlayVector, alpha: float = 1.0, beta: float = 1.0
) -> float:
    """Rao-Stirling diversity of an overlay using the base map's distances."""
    if ov.registry != base.registry:
        raise RegistryMismatch(
            "overlay was built against a different registry than the base map"
        )
    inp = DiversityInput(ov.proportions, base.similarity.distances())
    return rao_stirling(inp, alpha, beta)
