from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sciomap import CategoryRegistry, OverlayMapper, block_citation_matrix, overlay_diversity


@pytest.fixture(scope="module")
def fitted():
    registry = CategoryRegistry([f"Field {i:02d}" for i in range(1, 11)])
    matrix = block_citation_matrix(registry, [4, 3, 3], seed=21)
    est = OverlayMapper(k_factors=3, seed=3)
    return est.fit(matrix)


def test_get_params_roundtrip():
    est = OverlayMapper(k_factors=5, threshold=0.2, seed=7)
    params = est.get_params()
    assert params["k_factors"] == 5
    assert params["threshold"] == 0.2
    est.set_params(seed=9)
    assert est.seed == 9


def test_clone_preserves_params():
    est = OverlayMapper(k_factors=4, resolution6=0.3, seed=2)
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_fit_from_plain_array_generates_labels():
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 10, size=(8, 8))
    est = OverlayMapper(k_factors=2).fit(x)
    assert est.n_features_in_ == 8
    assert len(est.registry_) == 8


def test_fit_rejects_non_square():
    with pytest.raises(ValueError):
        OverlayMapper().fit(np.ones((3, 4)))


def test_fitted_attributes(fitted):
    assert fitted.coords_.shape == (10, 2)
    assert fitted.similarity_.shape == (10, 10)
    assert set(fitted.partitions_) == {19, 6, 4}
    assert fitted.explained_variance_ratio_.sum() <= 1 + 1e-9


def test_transform_single_vector(fitted):
    counts = np.zeros(10)
    counts[0], counts[4] = 3, 1
    props = fitted.transform(counts)
    assert props.shape == (10,)
    assert props[0] == pytest.approx(0.75)


def test_transform_matrix(fitted):
    counts = np.tile([1.0] + [0.0] * 9, (3, 1))
    props = fitted.transform(counts)
    assert props.shape == (3, 10)
    assert np.allclose(props.sum(axis=1), 1.0)


def test_transform_rejects_bad_rows(fitted):
    with pytest.raises(ValueError):
        fitted.transform(np.zeros(10))
    with pytest.raises(ValueError):
        fitted.transform(-np.ones(10))
    with pytest.raises(ValueError):
        fitted.transform(np.ones(9))


def test_project_and_diversity_consistent(fitted):
    counts = np.zeros(10)
    counts[1], counts[7] = 2, 2
    om = fitted.project(counts)
    assert om.sizes.max() == pytest.approx(fitted.size_max)
    assert fitted.diversity(counts) == pytest.approx(
        overlay_diversity(fitted.basemap_, om.overlay), abs=1e-15
    )


def test_score_is_mean_diversity(fitted):
    rows = np.zeros((2, 10))
    rows[0, 0] = 1  # single category: diversity 0
    rows[1, 1], rows[1, 8] = 1, 1
    expected = (fitted.diversity(rows[0]) + fitted.diversity(rows[1])) / 2
    assert fitted.score(rows) == pytest.approx(expected)


def test_unfitted_raises():
    est = OverlayMapper()
    with pytest.raises(NotFittedError):
        est.transform(np.ones(3))


def test_refit_reproducible():
    registry = CategoryRegistry([f"F{i}" for i in range(9)])
    matrix = block_citation_matrix(registry, [3, 3, 3], seed=5)
    a = OverlayMapper(k_factors=3, seed=11).fit(matrix)
    b = OverlayMapper(k_factors=3, seed=11).fit(matrix)
    assert np.array_equal(a.coords_, b.coords_)
    assert a.partitions_[4] == b.partitions_[4]
