from __future__ import annotations

import numpy as np
import pytest

from core.errors import ConfigError, NotTrainedError, ShapeError
from data.dataset import AttributeSpec
from measures import (
    ChopraMeasure,
    ClassifierMeasure,
    GabelMeasure,
    T11Measure,
    T21Measure,
    check_requirements,
    fit_t21,
    make_measure,
    similarity,
    t11_similarity,
    t21_similarity,
)
from measures.reference import exponent_for
from measures.serialization import measure_from_document, measure_to_document
from measures.training import train_measure

MIXED = [
    AttributeSpec("size", "numeric", (0,)),
    AttributeSpec("color", "categorical", (1, 2, 3), ("r", "g", "b")),
]


def flat_params(measure):
    return np.concatenate([n.get_params() for n in measure.networks()])


def assign(measure, flat):
    pos = 0
    for net in measure.networks():
        net.set_params(flat[pos:pos + net.parameter_count])
        pos += net.parameter_count


def gradient_error(measure, x, labels, n_classes, left=None, right=None, s=None, eps=1e-6):
    loss, grads = measure.loss_and_grad(x, labels, n_classes, left=left, right=right, s=s)
    analytic = np.concatenate([g.values for g in grads])
    base = flat_params(measure)
    numeric = np.zeros_like(base)
    for i in range(base.shape[0]):
        for sign in (1, -1):
            probe = base.copy()
            probe[i] += sign * eps
            assign(measure, probe)
            value, _ = measure.loss_and_grad(x, labels, n_classes, left=left, right=right, s=s)
            numeric[i] += sign * value / (2 * eps)
    assign(measure, base)
    return np.linalg.norm(analytic - numeric) / max(1e-12, np.linalg.norm(analytic) + np.linalg.norm(numeric))


def test_t11_numeric_and_categorical_locals():
    assert t11_similarity([0.0, 1.0], [0.5, 1.0]) == pytest.approx(0.75)
    x = np.array([0.2, 1.0, 0.0, 0.0])
    y = np.array([0.4, 0.0, 1.0, 0.0])
    assert t11_similarity(x, y, MIXED) == pytest.approx((0.8 + 0.0) / 2)
    assert t11_similarity(x, x, MIXED) == 1.0


def test_t21_exponents():
    assert np.allclose(exponent_for([1.0, 1.0, 1.0, 0.0], [0.5, 0.1, 0.01, 0.0]), [1.0, 2.5, 4.0, 1.0])
    x_train = np.array([[0.0], [0.5], [1.0], [0.5]])
    params = fit_t21(x_train)
    sigma = np.std([0.0, 0.5, 1.0, 0.5])
    m = np.clip(1.0 / (4 * sigma), 1, 4)
    assert params.exponent[0] == pytest.approx(m)
    assert t21_similarity(params, [0.2], [0.6]) == pytest.approx(0.6 ** m)


def test_t21_needs_fitting():
    measure = T21Measure(2)
    with pytest.raises(NotTrainedError):
        measure.similarity(np.zeros(2), np.ones(2))
    measure.prepare(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0, 1]))
    assert measure.similarity(np.zeros(2), np.zeros(2)) == 1.0


def test_learned_measures_refuse_untrained_scoring():
    measure = make_measure("esnn", 4, 3)
    with pytest.raises(NotTrainedError):
        measure.raw(np.zeros(4), np.zeros(4))
    with pytest.raises(NotTrainedError):
        measure.score_matrix(np.zeros((2, 4)), np.zeros((3, 4)))


def test_width_checks():
    measure = T11Measure(3)
    with pytest.raises(ShapeError):
        measure.similarity(np.zeros(3), np.zeros(4))
    with pytest.raises(ShapeError):
        measure.score_matrix(np.zeros((2, 3)), np.zeros((2, 2)))


def test_unknown_measure():
    with pytest.raises(ConfigError):
        make_measure("cosine", 3, 2)
    with pytest.raises(ConfigError):
        ChopraMeasure(3, 2, loss="hinge")


@pytest.mark.parametrize("name", ["t11", "t21", "gabel", "chopra", "t31", "esnn"])
def test_score_matrix_matches_pairwise(blobs, name):
    measure = make_measure(name, blobs.n_features, blobs.n_classes, seed=1)
    train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=3, seed=1)
    q, c = blobs.x[:5], blobs.x[5:12]
    matrix = measure.score_matrix(q, c)
    assert matrix.shape == (5, 7)
    for i in range(5):
        for j in range(7):
            assert matrix[i, j] == pytest.approx(measure.raw(q[i], c[j]), abs=1e-12)


@pytest.mark.parametrize("name", ["t11", "t21", "chopra", "t31", "esnn"])
def test_symmetric_measures_are_bit_exact(blobs, name):
    measure = make_measure(name, blobs.n_features, blobs.n_classes, seed=2)
    train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=5, seed=2)
    report = check_requirements(measure, blobs.x, n_pairs=1000, seed=0)
    assert report.symmetric
    assert report.max_asymmetry == 0.0
    assert report.notes == []


def test_scores_stay_in_unit_interval(blobs):
    for name in ("t11", "chopra", "t31", "esnn", "gabel"):
        measure = make_measure(name, blobs.n_features, blobs.n_classes, seed=0)
        train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=2, seed=0)
        report = check_requirements(measure, blobs.x, n_pairs=200)
        assert report.non_negative, name


def test_t31_raw_can_be_negative_but_report_is_clamped():
    measure = ClassifierMeasure(1, 2, hidden=())
    measure.g.set_params(np.array([50.0, -50.0, 0.0, 0.0]))
    measure.trained = True
    raw = measure.raw(np.array([1.0]), np.array([-1.0]))
    assert raw == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-9)
    assert measure.similarity(np.array([1.0]), np.array([-1.0])) == 0.0
    assert similarity(measure, np.array([1.0]), np.array([1.0])) == pytest.approx(1.0)


def test_chopra_score_is_inverse_energy():
    measure = ChopraMeasure(2, 2, hidden=(3,), seed=0)
    measure.trained = True
    x, y = np.array([0.1, 0.9]), np.array([0.7, 0.2])
    energy = np.sum(np.abs(measure.embed(x) - measure.embed(y)))
    assert measure.raw(x, y) == pytest.approx(1.0 / (1.0 + energy))
    assert measure.raw(x, x) == 1.0


def test_gabel_trains_on_ordered_pairs(blobs):
    measure = GabelMeasure(blobs.n_features, seed=0)
    _, history = train_measure(measure, blobs, np.arange(10), epochs=2, seed=0)
    assert history.pair_mode == "ordered-full"
    assert history.pairs_per_epoch == 90


@pytest.mark.parametrize("name, loss", [("gabel", None), ("chopra", "contrastive"), ("chopra", "energy"), ("t31", None)])
def test_loss_gradients_match_finite_differences(name, loss):
    rng = np.random.default_rng(4)
    x = rng.uniform(size=(6, 3))
    labels = np.array([0, 1, 0, 1, 1, 0])
    kwargs = {"chopra_loss": loss} if loss else {}
    measure = make_measure(name, 3, 2, hidden=(4,), seed=3, **kwargs)
    left, right = np.triu_indices(6, k=1)
    s = (labels[left] == labels[right]).astype(np.int64)
    assert gradient_error(measure, x, labels, 2, left, right, s) < 1e-5


@pytest.mark.parametrize("name", ["t11", "t21", "gabel", "chopra", "t31", "esnn"])
def test_measure_document_roundtrip(blobs, name):
    measure = make_measure(name, blobs.n_features, blobs.n_classes, seed=5)
    train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=2, seed=5)
    restored = measure_from_document(measure_to_document(measure, config={"seed": 5}))
    assert restored.name == measure.name
    assert np.array_equal(restored.score_matrix(blobs.x[:4], blobs.x), measure.score_matrix(blobs.x[:4], blobs.x))


def test_gabel_is_not_symmetric(blobs):
    measure = GabelMeasure(blobs.n_features, seed=2)
    train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=10, seed=2)
    scores = measure.score_matrix(blobs.x, blobs.x)
    assert not np.array_equal(scores, scores.T)
    i, j = np.unravel_index(np.argmax(np.abs(scores - scores.T)), scores.shape)
    assert measure.raw(blobs.x[i], blobs.x[j]) != measure.raw(blobs.x[j], blobs.x[i])
