from __future__ import annotations

from sciomap import cs_math_partition_rows, default_palette, default_registry


def test_registry_is_alphabetical():
    labels = list(default_registry().labels)
    assert labels == sorted(labels)


def test_registry_has_224_unique_entries():
    registry = default_registry()
    assert len(registry) == 224
    assert len(set(registry.labels)) == 224


def test_partition_fragment_shape():
    rows = cs_math_partition_rows()
    assert len(rows) == 18
    assert {group for _, group, _ in rows} == {1, 2}
    registry = default_registry()
    for label, _, _ in rows:
        assert registry.lookup(label) is not None


def test_palette_has_19_distinct_colors():
    palette = default_palette()
    assert len(palette) == 19
    assert len(set(palette)) == 19
    assert all(c.startswith("#") and len(c) == 7 for c in palette)


def test_retired_category_not_shipped():
    assert default_registry().lookup("Biology, Miscellaneous") is None
