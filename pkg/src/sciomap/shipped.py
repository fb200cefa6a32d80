"""Access to the data files shipped with the package.

The default registry lists the 224 active category labels in alphabetical
order (one was retired from the 225-category scheme; arts & humanities
categories have no citation report and are excluded).  The two-group
partition fragment records which categories belong to "Computer Science"
and which to "Mathematical methods"; the remaining groups of a full
19-group partition are user-suppliable.
"""

from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources

from .model import CategoryRegistry

__all__ = [
    "default_registry",
    "cs_math_partition_rows",
    "default_palette",
    "registry_text",
]


def _data_text(name: str) -> str:
    return resources.files("sciomap.data").joinpath(name).read_text(encoding="utf-8")


def registry_text() -> str:
    """Raw text of the shipped registry file (one label per line)."""
    return _data_text("wos_categories.txt")


@lru_cache(maxsize=1)
def default_registry() -> CategoryRegistry:
    """The shipped 224-category registry, ids in alphabetical label order."""
    labels = [line for line in registry_text().splitlines() if line.strip()]
    return CategoryRegistry(labels)


@lru_cache(maxsize=1)
def cs_math_partition_rows() -> tuple[tuple[str, int, str], ...]:
    """Shipped (label, group, group_name) rows splitting computing from
    mathematical methods: group 1 = "Computer Science" (12 categories),
    group 2 = "Mathematical methods" (6 categories)."""
    reader = csv.DictReader(_data_text("cs_math_partition.csv").splitlines())
    return tuple(
        (row["label"], int(row["group"]), row["group_name"]) for row in reader
    )


@lru_cache(maxsize=1)
def default_palette() -> tuple[str, ...]:
    """Fixed 19-color palette used for partition coloring in figures."""
    return tuple(
        line.strip()
        for line in _data_text("palette19.txt").splitlines()
        if line.strip()
    )
