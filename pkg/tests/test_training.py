from __future__ import annotations

import numpy as np
import pytest

from core.errors import ConfigError, NotTrainedError
from measures import make_measure
from measures.training import resolve_pair_mode, train_measure


@pytest.mark.parametrize("name", ["gabel", "chopra", "t31", "esnn"])
def test_training_loss_decreases(blobs, name):
    measure = make_measure(name, blobs.n_features, blobs.n_classes, seed=0)
    _, history = train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=40, seed=0)
    assert len(history.train_loss) == 40
    assert history.train_loss[-1] < history.train_loss[0]
    assert measure.trained


def test_non_learned_measures_ignore_epochs(blobs):
    measure = make_measure("t21", blobs.n_features, blobs.n_classes)
    _, history = train_measure(measure, blobs, np.arange(10), epochs=50)
    assert history.train_loss == []
    assert measure.params is not None


@pytest.mark.parametrize("name", ["gabel", "chopra", "t31", "esnn"])
def test_zero_epochs_leave_learned_measures_untrained(blobs, name):
    measure = make_measure(name, blobs.n_features, blobs.n_classes)
    _, history = train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=0)
    assert history.train_loss == []
    assert not measure.trained
    with pytest.raises(NotTrainedError):
        measure.score_matrix(blobs.x[:2], blobs.x[2:5])


def test_rprop_rejects_minibatches(blobs):
    measure = make_measure("esnn", blobs.n_features, blobs.n_classes)
    with pytest.raises(ConfigError):
        train_measure(measure, blobs, np.arange(10), optimizer="rprop", batch_size=8, epochs=1)


@pytest.mark.parametrize("optimizer", ["adam", "rmsprop"])
def test_minibatch_training(blobs, optimizer):
    measure = make_measure("esnn", blobs.n_features, blobs.n_classes, seed=1)
    _, history = train_measure(
        measure, blobs, np.arange(blobs.n_rows), optimizer=optimizer, batch_size=16, epochs=15, seed=1,
        optimizer_params={"lr": 0.01},
    )
    assert len(history.train_loss) == 15
    assert history.train_loss[-1] < history.train_loss[0]


def test_validation_curve_every_n_epochs(blobs):
    measure = make_measure("chopra", blobs.n_features, blobs.n_classes, seed=2)
    train_ids, val_ids = np.arange(0, 30, 2), np.arange(1, 30, 2)
    _, history = train_measure(measure, blobs, train_ids, epochs=10, seed=2, val_ids=val_ids, eval_every=3)
    assert history.val_epochs == [3, 6, 9]
    assert all(0.0 <= v <= 1.0 for v in history.val_loss)
    rows = history.curve_rows()
    assert [r["epoch"] for r in rows] == list(range(1, 11))
    assert rows[2]["val_retrieval_loss"] == history.val_loss[0]
    assert rows[0]["val_retrieval_loss"] is None


def test_training_is_deterministic(blobs):
    runs = []
    for _ in range(2):
        measure = make_measure("esnn", blobs.n_features, blobs.n_classes, seed=9)
        _, history = train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=8, seed=9)
        runs.append((history.train_loss, measure.g.get_params(), measure.c.get_params()))
    assert runs[0][0] == runs[1][0]
    assert np.array_equal(runs[0][1], runs[1][1])
    assert np.array_equal(runs[0][2], runs[1][2])


def test_sampled_pairs_are_resampled_unless_fixed(blobs):
    def loss_trace(resample):
        measure = make_measure("esnn", blobs.n_features, blobs.n_classes, seed=3)
        _, history = train_measure(
            measure, blobs, np.arange(blobs.n_rows), pair_mode="sampled-40", epochs=5, seed=3,
            resample_pairs=resample,
        )
        assert history.pair_mode == "sampled-40"
        assert history.pairs_per_epoch == 40
        return history.train_loss

    assert loss_trace(True)[0] == loss_trace(False)[0]
    assert loss_trace(True) != loss_trace(False)


def test_pair_mode_resolution():
    esnn = make_measure("esnn", 3, 2)
    gabel = make_measure("gabel", 3, 2)
    t31 = make_measure("t31", 3, 2)
    assert str(resolve_pair_mode(esnn, "auto")) == "unordered-unique"
    assert str(resolve_pair_mode(gabel, "auto")) == "ordered-full"
    assert str(resolve_pair_mode(esnn, "sampled-10")) == "sampled-10"
    assert resolve_pair_mode(t31, "ordered-full") is None


def test_chunked_gradients_match_single_chunk(blobs):
    results = []
    for chunk in (7, 65536):
        measure = make_measure("esnn", blobs.n_features, blobs.n_classes, seed=4)
        _, history = train_measure(measure, blobs, np.arange(blobs.n_rows), epochs=3, seed=4, chunk=chunk)
        results.append(np.array(history.train_loss))
    assert np.allclose(results[0], results[1], rtol=1e-9)


def test_evaluation_count(blobs):
    measure = make_measure("esnn", blobs.n_features, blobs.n_classes)
    _, history = train_measure(measure, blobs, np.arange(10), epochs=4)
    assert history.pairs_per_epoch == 45
    assert history.evaluations == 180
