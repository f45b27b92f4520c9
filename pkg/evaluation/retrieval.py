"""
Retrieval-loss protocol.

Every validation row retrieves the training row with the highest raw score;
the loss is the fraction of validation rows whose retrieved row has another
class. Ties go to the lowest training row id.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from core.errors import ProtocolError
from data.dataset import Dataset
from measures.base import SimilarityMeasure


def retrieve(measure: SimilarityMeasure, train_x: np.ndarray, val_x: np.ndarray) -> np.ndarray:
    """Position in ``train_x`` of the best match for each row of ``val_x``."""
    if len(train_x) == 0 or len(val_x) == 0:
        raise ProtocolError("retrieval needs non-empty training and validation partitions")
    scores = measure.score_matrix(val_x, train_x)
    # argmax returns the first maximum
    return np.argmax(scores, axis=1)


def retrieval_loss_arrays(
    measure: SimilarityMeasure,
    train_x: np.ndarray,
    train_labels: np.ndarray,
    val_x: np.ndarray,
    val_labels: np.ndarray,
) -> float:
    best = retrieve(measure, train_x, val_x)
    wrong = np.asarray(train_labels)[best] != np.asarray(val_labels)
    return np.count_nonzero(wrong) / wrong.shape[0]


def retrieval_loss(measure: SimilarityMeasure, ds: Dataset, train_ids: Sequence[int], val_ids: Sequence[int]) -> float:
    train_ids = np.sort(np.asarray(train_ids, dtype=np.int64))
    val_ids = np.asarray(val_ids, dtype=np.int64)
    if train_ids.size == 0 or val_ids.size == 0:
        raise ProtocolError("retrieval needs non-empty training and validation partitions")
    return retrieval_loss_arrays(measure, ds.x[train_ids], ds.labels[train_ids], ds.x[val_ids], ds.labels[val_ids])
