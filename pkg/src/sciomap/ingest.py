"""Parsers: WoS analyze exports, citation matrices, registry and partition
files, and readers for every format the emitters write (so all formats
round-trip).

Every parser takes either a text string or a file-like object opened in
text mode and is a pure function of its input.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AllUnmatched,
    DuplicateLabel,
    EmptyExport,
    MalformedRow,
    MissingLabel,
    NegativeCell,
    NotSquare,
    UnknownLabel,
)
from .model import CategoryRegistry, CitationMatrix, OverlayVector, Partition

__all__ = [
    "parse_analyze_export",
    "build_overlay",
    "parse_citation_matrix",
    "read_labeled_matrix",
    "parse_registry_file",
    "read_partition_rows",
    "parse_partition_file",
    "read_pajek_vec",
    "read_pajek_clu",
    "read_pajek_net",
    "read_paj_project",
    "read_vosviewer_map",
    "NetData",
    "PajProject",
    "VosMapRow",
]


def _as_text(source) -> str:
    text = source.read() if hasattr(source, "read") else str(source)
    return text.lstrip("\ufeff")


def _split_lines(text: str) -> list[str]:
    # only LF/CRLF delimit records; unicode line separators stay in-field
    return text.replace("\r\n", "\n").split("\n")


def _is_count(s: str) -> bool:
    return bool(s) and s.isascii() and s.isdigit()


def parse_analyze_export(source) -> list[tuple[str, int]]:
    """Parse a tab-delimited "Analyze Results" export into (label, count) rows.

    Title lines and a header row ahead of the first data row are tolerated
    (a header is any early row whose second column is not a count); columns
    beyond the second (percentages, bar charts) are ignored.  Raises
    MalformedRow for an unparseable row after data has started and
    EmptyExport when no data rows are found.
    """
    rows: list[tuple[str, int]] = []
    for lineno, line in enumerate(_split_lines(_as_text(source)), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            if rows:
                raise MalformedRow("expected tab-separated label and count", lineno)
            continue
        label = fields[0].strip()
        count_field = fields[1].strip()
        if _is_count(count_field) and label:
            rows.append((label, int(count_field)))
        elif rows:
            if not label:
                raise MalformedRow("row has an empty label", lineno)
            raise MalformedRow(
                f"count column {count_field!r} is not a non-negative integer", lineno
            )
        # else: preamble/header line, skip
    if not rows:
        raise EmptyExport("no data rows in analyze export")
    return rows


def build_overlay(rows: Sequence[tuple[str, int]], registry: CategoryRegistry) -> OverlayVector:
    """Accumulate parsed export rows into an overlay vector over `registry`.

    Rows whose label matches the same registry entry merge by summation;
    rows that match nothing are kept aside in `unmatched`.  Raises
    AllUnmatched when the total matched count is zero, which usually means
    the export uses a different category scheme than the registry.
    """
    counts = np.zeros(len(registry), dtype=np.int64)
    unmatched: list[tuple[str, int]] = []
    for label, count in rows:
        if count < 0:
            raise NegativeCell(f"negative count for {label!r}")
        cid = registry.lookup(label)
        if cid is None:
            unmatched.append((label, int(count)))
        else:
            counts[cid - 1] += int(count)
    if int(counts.sum()) == 0:
        raise AllUnmatched(
            "no export row matched the registry (or all matched counts were zero); "
            "check that the export and the registry use the same category scheme"
        )
    return OverlayVector(counts, registry, unmatched)


def _detect_delimiter(header_line: str) -> str:
    for ch in header_line:
        if ch in ("\t", ","):
            return ch
    raise MalformedRow("no tab or comma delimiter found in header line", 1)


def read_labeled_matrix(source, registry: CategoryRegistry, *, nonnegative: bool = False) -> np.ndarray:
    """Read a labeled square matrix (CSV or TSV) into registry id order.

    The first row and the first column carry category labels; the delimiter
    is whichever of tab/comma appears first in the header line.  Rows and
    columns are re-ordered by registry id, so the file's label order does
    not matter, but its labels must cover the registry exactly.
    """
    lines = [ln for ln in _as_text(source).splitlines() if ln.strip()]
    if len(lines) < 2:
        raise NotSquare("matrix file must have a header line and at least one row")
    delim = _detect_delimiter(lines[0])
    parsed = list(csv.reader(lines, delimiter=delim))
    header, data = parsed[0], parsed[1:]

    width = len(data[0])
    if len(header) == width:
        col_labels = [h.strip() for h in header[1:]]
    elif len(header) == width - 1:
        col_labels = [h.strip() for h in header]
    else:
        raise NotSquare(
            f"header has {len(header)} fields but data rows have {width}"
        )
    if len(col_labels) != len(data):
        raise NotSquare(
            f"{len(data)} data rows but {len(col_labels)} column labels"
        )

    def resolve(labels: list[str], what: str) -> list[int]:
        ids: list[int] = []
        seen: dict[int, str] = {}
        for lb in labels:
            cid = registry.lookup(lb)
            if cid is None:
                raise UnknownLabel(f"matrix {what} label {lb!r} not in registry")
            if cid in seen:
                raise DuplicateLabel(
                    f"matrix {what} labels {seen[cid]!r} and {lb!r} both map to id {cid}"
                )
            seen[cid] = lb
            ids.append(cid)
        if len(ids) != len(registry):
            missing = sorted(set(range(1, len(registry) + 1)) - set(ids))
            raise MissingLabel(
                f"matrix {what}s cover {len(ids)} of {len(registry)} registry "
                f"categories (first missing id: {missing[0]})"
            )
        return ids

    col_ids = resolve(col_labels, "column")
    row_labels = [row[0].strip() for row in data]
    row_ids = resolve(row_labels, "row")

    n = len(registry)
    cells = np.zeros((n, n), dtype=float)
    for r, row in enumerate(data):
        lineno = r + 2
        if len(row) != len(col_labels) + 1:
            raise NotSquare(f"row {lineno} has {len(row)} fields, expected {len(col_labels) + 1}")
        for c, cell in enumerate(row[1:]):
            try:
                value = float(cell)
            except ValueError:
                raise MalformedRow(f"cell {cell!r} is not a number", lineno) from None
            if nonnegative and value < 0:
                raise NegativeCell(
                    f"negative cell {value} at row {row_labels[r]!r}, column {col_labels[c]!r}"
                )
            cells[row_ids[r] - 1, col_ids[c] - 1] = value
    return cells


def parse_citation_matrix(source, registry: CategoryRegistry) -> CitationMatrix:
    """Parse a labeled square matrix file into a CitationMatrix."""
    return CitationMatrix(read_labeled_matrix(source, registry, nonnegative=True), registry)


def parse_registry_file(source) -> CategoryRegistry:
    """Read a registry file: one canonical label per line, id = line number."""
    lines = _split_lines(_as_text(source))
    while lines and not lines[-1].strip():
        lines.pop()
    labels: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            raise MalformedRow("blank line inside registry file", lineno)
        labels.append(line.strip())
    if not labels:
        raise EmptyExport("registry file has no labels")
    return CategoryRegistry(labels)


def read_partition_rows(source) -> list[tuple[str, int, Optional[str]]]:
    """Read a partition CSV with header label,group[,group_name]."""
    reader = csv.reader(_as_text(source).splitlines())
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise EmptyExport("partition file is empty") from None
    if header[:2] != ["label", "group"]:
        raise MalformedRow("expected header 'label,group[,group_name]'", 1)
    has_names = len(header) >= 3 and header[2] == "group_name"
    rows: list[tuple[str, int, Optional[str]]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 2:
            raise MalformedRow("expected at least label and group columns", lineno)
        label = row[0].strip()
        try:
            group = int(row[1])
        except ValueError:
            raise MalformedRow(f"group {row[1]!r} is not an integer", lineno) from None
        if group < 1:
            raise MalformedRow(f"group id {group} must be >= 1", lineno)
        name = row[2].strip() if has_names and len(row) > 2 and row[2].strip() else None
        rows.append((label, group, name))
    if not rows:
        raise EmptyExport("partition file has no data rows")
    return rows


def parse_partition_file(source, registry: CategoryRegistry) -> Partition:
    """Build a Partition over `registry` from a partition CSV.

    Every registry category must be assigned exactly once; group names, if
    present, must be consistent within each group.
    """
    rows = read_partition_rows(source)
    assignment = [0] * len(registry)
    names: dict[int, str] = {}
    for label, group, name in rows:
        cid = registry.lookup(label)
        if cid is None:
            raise UnknownLabel(f"partition label {label!r} not in registry")
        if assignment[cid - 1] != 0:
            raise DuplicateLabel(f"category {label!r} assigned twice")
        assignment[cid - 1] = group
        if name is not None:
            if names.get(group, name) != name:
                raise MalformedRow(
                    f"conflicting names {names[group]!r} and {name!r} for group {group}", 1
                )
            names[group] = name
    unassigned = [registry.label(i + 1) for i, g in enumerate(assignment) if g == 0]
    if unassigned:
        raise MissingLabel(
            f"{len(unassigned)} registry categories have no group "
            f"(first: {unassigned[0]!r})"
        )
    k = max(assignment)
    group_names = None
    if names:
        group_names = tuple(names.get(g, f"group {g}") for g in range(1, k + 1))
    return Partition(assignment, group_names)


# ---------------------------------------------------------------------------
# Readers for the toolkit's own output formats (round-trip support)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NetData:
    """Decoded Pajek .net content: labels, unit-square coords, z, edges."""

    labels: tuple[str, ...]
    coords: tuple[tuple[float, float], ...]
    z: tuple[float, ...]
    edges: tuple[tuple[int, int, float], ...]


@dataclass(frozen=True)
class PajProject:
    """Decoded Pajek project: one network plus named partitions/vectors."""

    network_name: str
    net: NetData
    partitions: tuple[tuple[str, tuple[int, ...]], ...]
    vectors: tuple[tuple[str, tuple[float, ...]], ...]


@dataclass(frozen=True)
class VosMapRow:
    id: int
    label: str
    x: float
    y: float
    cluster: int
    weight: float


def _require_vertices(line: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0].lower() != "*vertices":
        raise MalformedRow(f"expected '*Vertices N', got {line!r}", lineno)
    try:
        return int(parts[1])
    except ValueError:
        raise MalformedRow(f"vertex count {parts[1]!r} is not an integer", lineno) from None


def read_pajek_vec(source) -> list[float]:
    lines = _as_text(source).splitlines()
    if not lines:
        raise EmptyExport("empty .vec file")
    n = _require_vertices(lines[0], 1)
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            values.append(float(line.strip()))
        except ValueError:
            raise MalformedRow(f"vector value {line!r} is not a number", lineno) from None
    if len(values) != n:
        raise MalformedRow(f"expected {n} values, found {len(values)}", len(lines))
    return values


def read_pajek_clu(source) -> list[int]:
    lines = _as_text(source).splitlines()
    if not lines:
        raise EmptyExport("empty .clu file")
    n = _require_vertices(lines[0], 1)
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            values.append(int(line.strip()))
        except ValueError:
            raise MalformedRow(f"group id {line!r} is not an integer", lineno) from None
    if len(values) != n:
        raise MalformedRow(f"expected {n} group ids, found {len(values)}", len(lines))
    return values


def _parse_vertex_line(line: str, lineno: int) -> tuple[int, str, float, float, float]:
    s = line.strip()
    try:
        id_part, rest = s.split(None, 1)
        vid = int(id_part)
    except ValueError:
        raise MalformedRow(f"vertex line {line!r} lacks an integer id", lineno) from None
    rest = rest.lstrip()
    if not rest.startswith('"'):
        raise MalformedRow(f"vertex label must be quoted in {line!r}", lineno)
    label_chars: list[str] = []
    i = 1
    while i < len(rest):
        ch = rest[i]
        if ch == '"':
            if i + 1 < len(rest) and rest[i + 1] == '"':
                label_chars.append('"')
                i += 2
                continue
            break
        label_chars.append(ch)
        i += 1
    else:
        raise MalformedRow(f"unterminated label quote in {line!r}", lineno)
    tail = rest[i + 1 :].split()
    if len(tail) != 3:
        raise MalformedRow(f"expected x y z after label in {line!r}", lineno)
    try:
        x, y, z = (float(t) for t in tail)
    except ValueError:
        raise MalformedRow(f"bad coordinate in {line!r}", lineno) from None
    return vid, "".join(label_chars), x, y, z


def _read_net_lines(lines: list[str], start: int, lineno0: int) -> tuple[NetData, int]:
    """Parse *Vertices/*Edges lines; returns the NetData and the next index."""
    n = _require_vertices(lines[start], lineno0 + start)
    labels: list[str] = [""] * n
    coords: list[tuple[float, float]] = [(0.0, 0.0)] * n
    zs: list[float] = [0.0] * n
    i = start + 1
    seen = 0
    while i < len(lines) and seen < n:
        line = lines[i]
        if line.strip():
            vid, label, x, y, z = _parse_vertex_line(line, lineno0 + i)
            if not 1 <= vid <= n:
                raise MalformedRow(f"vertex id {vid} out of range 1..{n}", lineno0 + i)
            labels[vid - 1] = label
            coords[vid - 1] = (x, y)
            zs[vid - 1] = z
            seen += 1
        i += 1
    if seen != n:
        raise MalformedRow(f"expected {n} vertex lines, found {seen}", lineno0 + i)
    edges: list[tuple[int, int, float]] = []
    if i < len(lines) and lines[i].strip().lower() == "*edges":
        i += 1
        while i < len(lines):
            line = lines[i].strip()
            if line.startswith("*"):
                break
            if line:
                parts = line.split()
                if len(parts) != 3:
                    raise MalformedRow(f"expected 'i j s', got {line!r}", lineno0 + i)
                try:
                    a, b, w = int(parts[0]), int(parts[1]), float(parts[2])
                except ValueError:
                    raise MalformedRow(f"bad edge line {line!r}", lineno0 + i) from None
                edges.append((a, b, w))
            i += 1
    return (
        NetData(tuple(labels), tuple(coords), tuple(zs), tuple(edges)),
        i,
    )


def read_pajek_net(source) -> NetData:
    lines = _as_text(source).splitlines()
    if not lines:
        raise EmptyExport("empty .net file")
    net, _ = _read_net_lines(lines, 0, 1)
    return net


def read_paj_project(source) -> PajProject:
    lines = _as_text(source).splitlines()
    i = 0
    network_name = ""
    net: Optional[NetData] = None
    partitions: list[tuple[str, tuple[int, ...]]] = []
    vectors: list[tuple[str, tuple[float, ...]]] = []

    def section_values(start: int, cast) -> tuple[list, int]:
        count = _require_vertices(lines[start], start + 1)
        vals: list = []
        j = start + 1
        while j < len(lines) and len(vals) < count:
            if lines[j].strip():
                try:
                    vals.append(cast(lines[j].strip()))
                except ValueError:
                    raise MalformedRow(f"bad value {lines[j]!r}", j + 1) from None
            j += 1
        if len(vals) != count:
            raise MalformedRow(f"expected {count} values", j)
        return vals, j

    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        lowered = line.lower()
        if lowered.startswith("*network"):
            network_name = line[len("*network") :].strip()
            net, i = _read_net_lines(lines, i + 1, 1)
        elif lowered.startswith("*partition"):
            name = line[len("*partition") :].strip()
            vals, i = section_values(i + 1, int)
            partitions.append((name, tuple(vals)))
        elif lowered.startswith("*vector"):
            name = line[len("*vector") :].strip()
            vals, i = section_values(i + 1, float)
            vectors.append((name, tuple(vals)))
        else:
            raise MalformedRow(f"unexpected content {line!r}", i + 1)
    if net is None:
        raise EmptyExport("project file has no *Network section")
    return PajProject(network_name, net, tuple(partitions), tuple(vectors))


def read_vosviewer_map(source) -> list[VosMapRow]:
    lines = _as_text(source).splitlines()
    if not lines:
        raise EmptyExport("empty map file")
    reader = csv.reader(lines)
    header = next(reader)
    if [h.strip().lower() for h in header] != ["id", "label", "x", "y", "cluster", "weight"]:
        raise MalformedRow(f"unexpected map header {header!r}", 1)
    rows: list[VosMapRow] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 6:
            raise MalformedRow(f"expected 6 fields, got {len(row)}", lineno)
        try:
            rows.append(
                VosMapRow(int(row[0]), row[1], float(row[2]), float(row[3]), int(row[4]), float(row[5]))
            )
        except ValueError:
            raise MalformedRow(f"bad map row {row!r}", lineno) from None
    return rows
