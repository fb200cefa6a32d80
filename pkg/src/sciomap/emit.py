"""Bit-exact writers for Pajek and VOSviewer formats plus a static SVG
renderer.

All output uses LF line endings and dot decimal separators regardless of
platform or locale, so identical inputs always produce byte-identical
files.  Every format here has a matching reader in `ingest`.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .model import BaseMap, CitationMatrix, OverlayVector, Partition
from .overlay import OverlayMap
from .shipped import default_palette

__all__ = [
    "write_pajek_vec",
    "write_pajek_clu",
    "write_pajek_net",
    "write_paj_project",
    "write_vosviewer_map",
    "write_citation_matrix",
    "write_labeled_matrix",
    "render_svg",
    "encode_vec",
    "encode_clu",
    "encode_net",
    "encode_paj",
    "encode_vosviewer_rows",
]

#: margin keeping rescaled Pajek coordinates strictly inside (0, 1)
NET_MARGIN = 0.05


def _f6(x: float) -> str:
    return f"{x:.6f}"


def _f4(x: float) -> str:
    return f"{x:.4f}"


def _quote_pajek(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def _quote_csv(field: str) -> str:
    if any(ch in field for ch in (',', '"', '\n')):
        return '"' + field.replace('"', '""') + '"'
    return field


# ---------------------------------------------------------------------------
# low-level encoders (value lists -> text); the writers below derive the
# values from domain objects and delegate here
# ---------------------------------------------------------------------------


def encode_vec(values: Sequence[float]) -> str:
    lines = [f"*Vertices {len(values)}"]
    lines.extend(_f6(v) for v in values)
    return "\n".join(lines) + "\n"


def encode_clu(values: Sequence[int]) -> str:
    lines = [f"*Vertices {len(values)}"]
    lines.extend(str(int(v)) for v in values)
    return "\n".join(lines) + "\n"


def encode_net(
    labels: Sequence[str],
    coords01: Sequence[tuple[float, float]],
    z: Sequence[float],
    edges: Sequence[tuple[int, int, float]],
) -> str:
    lines = [f"*Vertices {len(labels)}"]
    for i, (label, (x, y), zi) in enumerate(zip(labels, coords01, z), start=1):
        lines.append(f"{i} {_quote_pajek(label)} {_f6(x)} {_f6(y)} {zi:g}")
    lines.append("*Edges")
    for i, j, s in edges:
        lines.append(f"{i} {j} {_f4(s)}")
    return "\n".join(lines) + "\n"


def encode_paj(
    network_name: str,
    net_text: str,
    partitions: Sequence[tuple[str, str]],
    vectors: Sequence[tuple[str, str]] = (),
) -> str:
    parts = [f"*Network {network_name}\n{net_text}"]
    for name, text in partitions:
        parts.append(f"*Partition {name}\n{text}")
    for name, text in vectors:
        parts.append(f"*Vector {name}\n{text}")
    return "".join(parts)


def encode_vosviewer_rows(
    rows: Sequence[tuple[int, str, float, float, int, float]],
) -> str:
    lines = ["id,label,x,y,cluster,weight"]
    for vid, label, x, y, cluster, weight in rows:
        lines.append(
            f"{vid},{_quote_csv(label)},{_f6(x)},{_f6(y)},{cluster},{_f6(weight)}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# writers over domain objects
# ---------------------------------------------------------------------------


def write_pajek_vec(ov: OverlayVector) -> str:
    """Vertex vector of overlay proportions, one per category in id order."""
    return encode_vec([float(p) for p in ov.proportions])


def write_pajek_clu(p: Partition) -> str:
    """Vertex partition: one group id per category in id order."""
    return encode_clu(p.assignment)


def _coords01(coords: np.ndarray) -> list[tuple[float, float]]:
    """Affine per-axis rescale into the unit square, margin inside (0, 1)."""
    out = []
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = hi - lo
    scale = 1.0 - 2.0 * NET_MARGIN
    for x, y in coords:
        fx = NET_MARGIN + scale * ((x - lo[0]) / span[0]) if span[0] > 0 else 0.5
        fy = NET_MARGIN + scale * ((y - lo[1]) / span[1]) if span[1] > 0 else 0.5
        out.append((float(fx), float(fy)))
    return out


def write_pajek_net(base: BaseMap) -> str:
    """Network file: labeled vertices at unit-square coordinates plus the
    similarity edges retained for display."""
    return encode_net(
        base.registry.labels,
        _coords01(base.coords),
        [0.5] * base.n,
        base.edges,
    )


def write_paj_project(base: BaseMap, ov: Optional[OverlayVector] = None) -> str:
    """Project file bundling the network, the three partitions, and, when
    given, the overlay vector."""
    partitions = [
        ("factors", write_pajek_clu(base.partition19)),
        ("clusters6", write_pajek_clu(base.partition6)),
        ("clusters4", write_pajek_clu(base.partition4)),
    ]
    vectors = [("overlay", write_pajek_vec(ov))] if ov is not None else []
    return encode_paj("basemap", write_pajek_net(base), partitions, vectors)


def write_vosviewer_map(
    base: BaseMap,
    ov: OverlayVector,
    partition_choice: int,
    include_all: bool = False,
) -> str:
    """Map file `id,label,x,y,cluster,weight` for one partition choice.

    By default only categories with a nonzero count appear; `include_all`
    keeps every category (weight 0 rows included).
    """
    partition = base.partition(partition_choice)
    rows = []
    for i in range(base.n):
        if not include_all and ov.counts[i] == 0:
            continue
        rows.append(
            (
                i + 1,
                base.registry.label(i + 1),
                float(base.coords[i, 0]),
                float(base.coords[i, 1]),
                partition.assignment[i],
                float(ov.proportions[i]),
            )
        )
    return encode_vosviewer_rows(rows)


def write_labeled_matrix(values: np.ndarray, labels: Sequence[str]) -> str:
    """Labeled square matrix as CSV at full precision (repr round-trip)."""
    a = np.asarray(values, dtype=float)
    quoted = [_quote_csv(lb) for lb in labels]
    lines = ["label," + ",".join(quoted)]
    for lb, row in zip(quoted, a):
        lines.append(lb + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_citation_matrix(m: CitationMatrix) -> str:
    """Citation matrix writer; inverse of the labeled-matrix parser."""
    return write_labeled_matrix(m.values, m.registry.labels)


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(
    om: OverlayMap,
    partition_choice: int = 19,
    top_labels: int = 10,
    show_legend: bool = True,
    width: float = 900.0,
    height: float = 700.0,
) -> str:
    """Static overlay figure: one circle per visible node, colored by the
    chosen partition, labels on the highest-proportion nodes, optional
    legend.  Pure function of its inputs, so output is byte-stable.
    """
    base = om.base
    partition = base.partition(partition_choice)
    palette = default_palette()
    pad = 50.0

    coords = np.asarray(base.coords, dtype=float)
    span = coords.max(axis=0) - coords.min(axis=0) if base.n else np.array([0.0, 0.0])
    mid = (coords.max(axis=0) + coords.min(axis=0)) / 2.0 if base.n else np.array([0.0, 0.0])
    sx = (width - 2 * pad) / span[0] if span[0] > 0 else 1.0
    sy = (height - 2 * pad) / span[1] if span[1] > 0 else 1.0
    scale = min(sx, sy)

    def to_px(pt: np.ndarray) -> tuple[float, float]:
        return (
            width / 2.0 + (pt[0] - mid[0]) * scale,
            height / 2.0 - (pt[1] - mid[1]) * scale,
        )

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="#ffffff"/>',
    ]

    visible = [i for i in range(base.n) if om.sizes[i] > 0]
    # big circles first so small ones stay visible on top
    for i in sorted(visible, key=lambda i: (-om.sizes[i], i)):
        x, y = to_px(coords[i])
        color = palette[(partition.assignment[i] - 1) % len(palette)]
        lines.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{om.sizes[i]:.2f}" '
            f'fill="{color}" fill-opacity="0.8" stroke="#333333" stroke-width="0.5"/>'
        )

    if top_labels > 0:
        ranked = sorted(visible, key=lambda i: (-om.overlay.proportions[i], i))
        for i in ranked[:top_labels]:
            x, y = to_px(coords[i])
            lines.append(
                f'<text x="{x:.2f}" y="{y - om.sizes[i] - 3:.2f}" '
                f'font-family="sans-serif" font-size="11" text-anchor="middle" '
                f'fill="#111111">{_esc(base.registry.label(i + 1))}</text>'
            )

    if show_legend:
        names = partition.group_names or tuple(
            f"group {g}" for g in range(1, partition.k + 1)
        )
        for g in range(1, partition.k + 1):
            y0 = 20.0 + 18.0 * (g - 1)
            color = palette[(g - 1) % len(palette)]
            lines.append(
                f'<rect x="12" y="{y0:.2f}" width="12" height="12" fill="{color}"/>'
            )
            lines.append(
                f'<text x="30" y="{y0 + 10:.2f}" font-family="sans-serif" '
                f'font-size="12" fill="#111111">{_esc(names[g - 1])}</text>'
            )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
