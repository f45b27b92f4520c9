from __future__ import annotations

import numpy as np
import pytest

from conftest import make_blobs
from core.config import RunConfig
from core.errors import ConfigError, ProjectionError
from evaluation.embeddings import embedding_comparison, export_embeddings, pca_project, silhouette
from measures import T11Measure, make_measure


def pdist(points):
    i, j = np.triu_indices(points.shape[0], k=1)
    return np.linalg.norm(points[i] - points[j], axis=1)


def plane_points(n=40, width=5, seed=0):
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.normal(size=(width, 2)))
    coords = rng.normal(size=(n, 2)) * np.array([3.0, 1.0])
    return coords @ basis.T + rng.uniform(size=width)


def test_points_on_a_plane_keep_their_distances():
    points = plane_points()
    projection = pca_project(points)
    assert np.allclose(pdist(projection.coords), pdist(points), atol=1e-9)


def test_components_are_orthonormal_and_ordered():
    rng = np.random.default_rng(1)
    vectors = rng.normal(size=(60, 4)) * np.array([5.0, 2.0, 1.0, 0.5])
    projection = pca_project(vectors)
    assert np.allclose(projection.components @ projection.components.T, np.eye(2), atol=1e-12)
    assert projection.explained_variance[0] >= projection.explained_variance[1]
    assert np.var(projection.coords[:, 0]) >= np.var(projection.coords[:, 1])

    singular = np.linalg.svd(vectors - vectors.mean(axis=0), compute_uv=False)
    assert np.allclose(projection.explained_variance, singular[:2] ** 2 / (vectors.shape[0] - 1))
    assert np.allclose(projection.mean, vectors.mean(axis=0))


@pytest.mark.parametrize("vectors", [np.zeros(5), np.zeros((1, 4)), np.zeros((10, 1))])
def test_degenerate_inputs(vectors):
    with pytest.raises(ProjectionError):
        pca_project(vectors)


def test_silhouette_is_undefined_for_trivial_labelings():
    points = np.random.default_rng(0).uniform(size=(6, 2))
    assert silhouette(points, [0] * 6) is None
    assert silhouette(points, list(range(6))) is None
    assert -1.0 <= silhouette(points, [0, 0, 0, 1, 1, 1]) <= 1.0


def test_export_needs_an_embedding_function(blobs):
    with pytest.raises(ConfigError):
        export_embeddings(T11Measure(blobs.n_features), blobs, [0, 1, 2])


def test_export_rows(blobs):
    measure = make_measure("chopra", blobs.n_features, blobs.n_classes, seed=0)
    export = export_embeddings(measure, blobs, [0, 10, 20, 5])
    rows = export.rows()
    assert [r["row_id"] for r in rows] == [0, 10, 20, 5]
    assert [r["label"] for r in rows] == ["c0", "c1", "c2", "c0"]
    assert export.columns == ["row_id", "label", "pc1", "pc2", "e0", "e1", "e2"]
    assert export.summary()["embedding_width"] == 3


def test_training_improves_silhouette():
    ds = make_blobs(n_per_class=15, spread=0.12, seed=2, name="blobs")
    cfg = RunConfig(measures=["esnn"], epochs=[150], k=3, repeats=1, seed=0, jobs=1).validate()
    before, after = embedding_comparison(ds, cfg)
    assert np.array_equal(before.row_ids, after.row_ids)
    assert before.embeddings.shape == after.embeddings.shape == (15, 3)
    assert after.silhouette > before.silhouette


def test_split_index_is_checked(blobs):
    cfg = RunConfig(measures=["esnn"], epochs=[1], k=3, repeats=1, jobs=1).validate()
    with pytest.raises(ConfigError):
        embedding_comparison(blobs, cfg, split_index=3)
