"""Map layout: minimize similarity-weighted squared distances subject to a
unit mean pairwise distance.

The constrained problem (minimize sum_ij s_ij * |x_i - x_j|^2 with the mean
of all pairwise distances fixed at 1) shares its stationary points, up to
scale, with the unconstrained V(X) = sum s_ij d_ij^2 - sum d_ij, so the
optimizer majorizes V: each step solves a Laplacian system against the
standard distance-majorizing bound, then applies the closed-form optimal
rescale.  The reported objective is the constrained one (at constraint
scale); every accepted step decreases it, and the final configuration is
rescaled so the constraint holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SimilarityMatrix

__all__ = ["LayoutResult", "vos_layout"]


@dataclass(frozen=True)
class LayoutResult:
    """Coordinates plus diagnostics from the layout optimizer."""

    coords: np.ndarray
    objective_history: tuple[float, ...]
    degenerate: bool = False
    disconnected: bool = False

    @property
    def objective(self) -> float:
        return self.objective_history[-1]


def _weights(s) -> np.ndarray:
    values = s.values if isinstance(s, SimilarityMatrix) else np.asarray(s, dtype=float)
    w = np.array(values, dtype=float, copy=True)
    np.fill_diagonal(w, 0.0)
    return w


def _distances(x: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def _pair_sums(x: np.ndarray, w: np.ndarray, iu) -> tuple[float, float]:
    d = _distances(x)[iu]
    return float((w[iu] * d * d).sum()), float(d.sum())


def _constrained_objective(g: float, h: float, target: float) -> float:
    # objective after rescaling the configuration so sum of distances == target
    if h <= 0:
        return np.inf
    return g * (target / h) ** 2


def _postprocess(x: np.ndarray) -> np.ndarray:
    """Center at the origin, rotate to principal axes, canonicalize signs."""
    x = x - x.mean(axis=0)
    cov = x.T @ x
    eigvals, eigvecs = np.linalg.eigh(cov)
    x = x @ eigvecs[:, ::-1]
    for col in range(x.shape[1]):
        pivot = int(np.argmax(np.abs(x[:, col])))
        if x[pivot, col] < 0:
            x[:, col] = -x[:, col]
    return x


def _rescale_to_constraint(x: np.ndarray, target: float) -> np.ndarray:
    iu = np.triu_indices(x.shape[0], k=1)
    h = float(_distances(x)[iu].sum())
    if h > 0:
        x = x * (target / h)
    return x


def _components(w: np.ndarray) -> list[list[int]]:
    n = w.shape[0]
    seen = [False] * n
    comps: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(w[i] > 0):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(sorted(comp))
    return comps


def _layout_connected(
    w: np.ndarray,
    rng: np.random.Generator,
    restarts: int,
    max_iter: int,
    tol: float,
) -> tuple[np.ndarray, list[float]]:
    """Majorization descent on one connected component; returns the best of
    `restarts` seeded starts together with its objective history."""
    n = w.shape[0]
    target = n * (n - 1) / 2.0
    iu = np.triu_indices(n, k=1)
    laplacian = np.diag(w.sum(axis=1)) - w
    p = np.linalg.pinv(2.0 * laplacian)

    best_x: np.ndarray | None = None
    best_history: list[float] | None = None
    for _ in range(restarts):
        x = rng.uniform(-0.5, 0.5, size=(n, 2))
        g, h = _pair_sums(x, w, iu)
        if g > 0 and h > 0:
            x = x * (h / (2.0 * g))
        history = [_constrained_objective(g, h, target)]
        for _ in range(max_iter):
            d = _distances(x)
            with np.errstate(divide="ignore"):
                invd = np.where(d > 0, 1.0 / np.where(d > 0, d, 1.0), 0.0)
            np.fill_diagonal(invd, 0.0)
            bx = x * invd.sum(axis=1)[:, None] - invd @ x
            step = p @ bx - x
            # over-relaxed step first; plain majorization as fallback keeps
            # the monotone guarantee
            accepted = None
            for factor in (1.7, 1.0):
                xn = x + factor * step
                g, h = _pair_sums(xn, w, iu)
                obj = _constrained_objective(g, h, target)
                if np.isfinite(obj) and obj < history[-1]:
                    accepted = (xn, g, h, obj)
                    break
            if accepted is None:
                break
            xn, g, h, obj = accepted
            if g > 0 and h > 0:
                xn = xn * (h / (2.0 * g))
            improvement = history[-1] - obj
            x = xn
            history.append(obj)
            if improvement < tol * max(1.0, abs(history[-1])):
                break
        if best_history is None or history[-1] < best_history[-1]:
            best_x, best_history = x, history
    assert best_x is not None and best_history is not None
    return _rescale_to_constraint(best_x, target), best_history


def _circle(n: int, rng: np.random.Generator) -> np.ndarray:
    phase = rng.uniform(0.0, 2.0 * np.pi)
    angles = phase + 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(angles), np.sin(angles)])


def _pack_components(parts: list[tuple[list[int], np.ndarray]], n: int) -> np.ndarray:
    """Place separately laid out components around a ring, largest first;
    ring radius and spacing keep neighboring components clear."""
    coords = np.zeros((n, 2))
    radii = [float(np.linalg.norm(xy, axis=1).max()) if len(xy) else 0.0 for _, xy in parts]
    k = len(parts)
    if k == 1:
        members, xy = parts[0]
        coords[members] = xy
        return coords
    gap = max(0.5, 0.5 * max(radii))
    circumference = 2.0 * sum(radii) + k * gap
    radius = max(
        circumference / (2.0 * np.pi),
        (2.0 * max(radii) + gap) / (2.0 * np.sin(np.pi / k)),
    )
    arc = 0.0
    for (members, xy), r in zip(parts, radii):
        arc += r + gap / 2.0
        theta = 2.0 * np.pi * arc / circumference
        center = radius * np.array([np.cos(theta), np.sin(theta)])
        coords[members] = xy + center
        arc += r + gap / 2.0
    return coords


def vos_layout(
    s,
    seed: int = 0,
    restarts: int = 10,
    max_iter: int = 2000,
    tol: float = 1e-13,
) -> LayoutResult:
    """Lay out categories so similar ones sit close together.

    Deterministic for a given seed: restarts draw from one seeded generator
    and the best final objective wins (earlier restart on ties).  When the
    similarity has no positive off-diagonal entries the result is a seeded
    circle (degenerate); when it splits into several connected components,
    each component is laid out on its own and the components are packed on
    a ring, since the joint objective does not tie them together.
    """
    w = _weights(s)
    n = w.shape[0]
    rng = np.random.default_rng(seed)
    if n == 0:
        raise ValueError("cannot lay out an empty map")
    if n == 1:
        return LayoutResult(np.zeros((1, 2)), (0.0,), degenerate=True)
    target = n * (n - 1) / 2.0

    if not np.any(w > 0):
        x = _rescale_to_constraint(_circle(n, rng), target)
        x = _postprocess(x)
        return LayoutResult(_freeze(x), (0.0,), degenerate=True)

    comps = _components(w)
    if len(comps) == 1:
        x, history = _layout_connected(w, rng, restarts, max_iter, tol)
        x = _postprocess(x)
        return LayoutResult(_freeze(x), tuple(history))

    parts: list[tuple[list[int], np.ndarray]] = []
    for members in comps:
        if len(members) == 1:
            parts.append((members, np.zeros((1, 2))))
            continue
        sub = w[np.ix_(members, members)]
        xy, _ = _layout_connected(sub, rng, restarts, max_iter, tol)
        parts.append((members, xy - xy.mean(axis=0)))
    parts.sort(key=lambda item: (-len(item[0]), item[0][0]))
    x = _pack_components(parts, n)
    x = _rescale_to_constraint(x, target)
    x = _postprocess(x)
    iu = np.triu_indices(n, k=1)
    g, h = _pair_sums(x, w, iu)
    return LayoutResult(
        _freeze(x),
        (_constrained_objective(g, h, target),),
        disconnected=True,
    )


def _freeze(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x)
    x.flags.writeable = False
    return x
