"""Base-map construction and directory persistence.

Building composes the pipeline stages: cosine similarity over citing
patterns, factor extraction for the fine partition, similarity clustering
at two resolutions for the coarse partitions, and the constrained layout.
A built map persists as a plain-text directory so later overlay and
diversity runs need neither the citation data nor any recomputation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .clustering import vos_clustering
from .errors import MalformedRow, RegistryMismatch
from .factors import factor_analysis
from .ingest import read_labeled_matrix, read_pajek_clu, parse_registry_file
from .layout import vos_layout
from .model import BaseMap, CategoryRegistry, CitationMatrix, Partition, SimilarityMatrix
from .similarity import cosine_similarity
from .emit import write_labeled_matrix, write_pajek_clu, _quote_csv

__all__ = ["BaseMapConfig", "build_base_map", "save_base_map", "load_base_map"]

#: reference share of variance the 19-factor solution explained on the
#: 2010 category-citation data; stored in meta for comparison on real data
REFERENCE_VARIANCE_19_FACTORS = 0.543


@dataclass(frozen=True)
class BaseMapConfig:
    """Tunable parameters of a base-map build.

    The two resolutions are starting points calibrated on the shipped
    synthetic example; the builder backs each one off geometrically until
    the requested group-count cap is met.
    """

    k_factors: int = 19
    threshold: float = 0.15
    resolution6: float = 0.25
    resolution4: float = 0.05
    seed: int = 0
    restarts: int = 10

    _KEYS = ("k_factors", "threshold", "resolution6", "resolution4", "seed", "restarts")

    @classmethod
    def from_text(cls, text: str) -> "BaseMapConfig":
        """Parse `key=value` lines; '#' starts a comment, blanks ignored."""
        values: dict[str, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise MalformedRow(f"expected key=value, got {stripped!r}", lineno)
            key, _, raw = stripped.partition("=")
            key = key.strip()
            if key not in cls._KEYS:
                raise MalformedRow(f"unknown config key {key!r}", lineno)
            try:
                values[key] = float(raw.strip())
            except ValueError:
                raise MalformedRow(f"bad value {raw.strip()!r} for {key}", lineno) from None
        cfg = cls()
        for key in ("k_factors", "seed", "restarts"):
            if key in values:
                cfg = replace(cfg, **{key: int(values.pop(key))})
        return replace(cfg, **values)

    def to_text(self) -> str:
        return "".join(f"{k}={getattr(self, k)}\n" for k in self._KEYS)


def _cluster_capped(
    s: SimilarityMatrix, resolution: float, max_groups: int, seed: int, restarts: int
) -> tuple[Partition, float]:
    """Cluster, backing the resolution off until at most max_groups remain.

    Lower resolutions merge more; if the similarity graph has more than
    max_groups disconnected components no resolution can merge them, so
    the smallest groups are folded together as a last resort.
    """
    part = vos_clustering(s, resolution, seed=seed, restarts=restarts)
    used = resolution
    for _ in range(80):
        if part.k <= max_groups:
            return part, used
        used *= 0.6
        part = vos_clustering(s, used, seed=seed, restarts=restarts)
    if part.k > max_groups:
        assignment = list(part.assignment)
        while True:
            k = max(assignment)
            if k <= max_groups:
                break
            # groups are size-ordered, so k and k-1 are the two smallest
            assignment = [k - 1 if g == k else g for g in assignment]
        part = Partition(assignment)
    return part, used


def build_base_map(
    m: CitationMatrix,
    registry: CategoryRegistry | None = None,
    config: BaseMapConfig | None = None,
) -> BaseMap:
    """Build the full base map from a citation matrix.

    Deterministic given (matrix, config): the seed drives layout restarts
    and clustering orders.  The returned map carries the factor model and a
    meta mapping (variance ratios, resolutions actually used, warnings).
    """
    if registry is not None and registry != m.registry:
        raise RegistryMismatch("matrix is bound to a different registry")
    registry = m.registry
    config = config or BaseMapConfig()
    n = m.n

    s = cosine_similarity(m)
    k = min(config.k_factors, n)
    fm = factor_analysis(s, k)

    p6, res6_used = _cluster_capped(s, config.resolution6, 6, config.seed + 1, config.restarts)
    p4, res4_used = _cluster_capped(s, config.resolution4, 4, config.seed + 2, config.restarts)

    layout = vos_layout(s, seed=config.seed, restarts=config.restarts)

    row_sums = m.values.sum(axis=1)
    top = float(row_sums.max()) if n else 0.0
    weights = row_sums / top if top > 0 else np.zeros(n)

    edges = tuple(
        (i + 1, j + 1, float(s.values[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if s.values[i, j] >= config.threshold
    )

    meta = {
        "config": asdict(config),
        "k_factors_effective": fm.k,
        "rank_deficient": fm.rank_deficient,
        "explained_variance_ratio": list(fm.explained_variance_ratio),
        "total_variance_ratio": fm.total_variance_ratio,
        "resolution6_used": res6_used,
        "resolution4_used": res4_used,
        "layout_objective": layout.objective,
        "layout_degenerate": layout.degenerate,
        "layout_disconnected": layout.disconnected,
        "reference_variance_ratio_19_factors": REFERENCE_VARIANCE_19_FACTORS,
    }
    return BaseMap(
        registry=registry,
        coords=layout.coords,
        partition19=fm.assignment,
        partition6=p6,
        partition4=p4,
        weights=weights,
        edges=edges,
        similarity=s,
        factor_model=fm,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

_REGISTRY_FILE = "registry.txt"
_COORDS_FILE = "coordinates.csv"
_EDGES_FILE = "edges.csv"
_SIMILARITY_FILE = "similarity.csv"
_META_FILE = "meta.json"
_PARTITION_FILES = {19: "partition19.clu", 6: "partition6.clu", 4: "partition4.clu"}


def save_base_map(base: BaseMap, directory) -> list[Path]:
    """Write a base map as a directory of plain-text files; returns paths.

    Coordinates, weights, edge strengths and similarities are stored at
    full precision so a load reproduces the in-memory map exactly.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    contents: dict[str, str] = {}
    contents[_REGISTRY_FILE] = "\n".join(base.registry.labels) + "\n"

    coord_lines = ["id,label,x,y,weight"]
    for i in range(base.n):
        coord_lines.append(
            f"{i + 1},{_quote_csv(base.registry.label(i + 1))},"
            f"{float(base.coords[i, 0])!r},{float(base.coords[i, 1])!r},"
            f"{float(base.weights[i])!r}"
        )
    contents[_COORDS_FILE] = "\n".join(coord_lines) + "\n"

    for choice, name in _PARTITION_FILES.items():
        contents[name] = write_pajek_clu(base.partition(choice))

    edge_lines = ["i,j,s"]
    edge_lines.extend(f"{i},{j},{float(s)!r}" for i, j, s in base.edges)
    contents[_EDGES_FILE] = "\n".join(edge_lines) + "\n"

    contents[_SIMILARITY_FILE] = write_labeled_matrix(
        base.similarity.values, base.registry.labels
    )
    meta = dict(base.meta)
    meta["group_names"] = {
        str(choice): list(base.partition(choice).group_names or [])
        for choice in (19, 6, 4)
    }
    contents[_META_FILE] = json.dumps(meta, indent=2, sort_keys=True) + "\n"

    written: list[Path] = []
    try:
        for name, text in contents.items():
            path = directory / name
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def load_base_map(directory) -> BaseMap:
    """Load a base map previously written by save_base_map."""
    directory = Path(directory)
    registry = parse_registry_file((directory / _REGISTRY_FILE).read_text(encoding="utf-8"))
    n = len(registry)

    coords = np.zeros((n, 2))
    weights = np.zeros(n)
    reader = csv.reader(
        (directory / _COORDS_FILE).read_text(encoding="utf-8").splitlines()
    )
    header = next(reader)
    if [h.strip().lower() for h in header] != ["id", "label", "x", "y", "weight"]:
        raise MalformedRow(f"unexpected coordinates header {header!r}", 1)
    seen = 0
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        try:
            cid = int(row[0])
            coords[cid - 1] = (float(row[2]), float(row[3]))
            weights[cid - 1] = float(row[4])
        except (ValueError, IndexError):
            raise MalformedRow(f"bad coordinates row {row!r}", lineno) from None
        seen += 1
    if seen != n:
        raise MalformedRow(f"expected {n} coordinate rows, found {seen}", seen + 1)

    meta = json.loads((directory / _META_FILE).read_text(encoding="utf-8"))
    names = meta.get("group_names", {})
    partitions = {}
    for choice, fname in _PARTITION_FILES.items():
        groups = read_pajek_clu((directory / fname).read_text(encoding="utf-8"))
        group_names = names.get(str(choice)) or None
        partitions[choice] = Partition(groups, group_names)

    edges: list[tuple[int, int, float]] = []
    edge_reader = csv.reader(
        (directory / _EDGES_FILE).read_text(encoding="utf-8").splitlines()
    )
    edge_header = next(edge_reader)
    if [h.strip().lower() for h in edge_header] != ["i", "j", "s"]:
        raise MalformedRow(f"unexpected edges header {edge_header!r}", 1)
    for lineno, row in enumerate(edge_reader, start=2):
        if not row or not "".join(row).strip():
            continue
        try:
            edges.append((int(row[0]), int(row[1]), float(row[2])))
        except (ValueError, IndexError):
            raise MalformedRow(f"bad edge row {row!r}", lineno) from None

    similarity = SimilarityMatrix(
        read_labeled_matrix(
            (directory / _SIMILARITY_FILE).read_text(encoding="utf-8"), registry
        )
    )
    return BaseMap(
        registry=registry,
        coords=coords,
        partition19=partitions[19],
        partition6=partitions[6],
        partition4=partitions[4],
        weights=weights,
        edges=tuple(edges),
        similarity=similarity,
        factor_model=None,
        meta=meta,
    )
