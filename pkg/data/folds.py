from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np
from sklearn.model_selection import RepeatedStratifiedKFold

from core.errors import StratificationError
from data.dataset import Dataset


@dataclass(frozen=True)
class Split:
    index: int
    repeat: int
    fold: int
    train_ids: np.ndarray
    val_ids: np.ndarray


def check_stratifiable(labels: np.ndarray, k: int, class_names: Sequence[str] = ()) -> None:
    counts = np.bincount(labels)
    for cls, count in enumerate(counts):
        if 0 < count < k:
            name = class_names[cls] if cls < len(class_names) else str(cls)
            raise StratificationError(name, int(count), k)


def stratified_kfold(ds: Union[Dataset, Sequence[int]], k: int = 5, repeats: int = 5, seed: int = 0) -> List[Split]:
    """
    Repeated stratified k-fold splits (k * repeats of them), row ids sorted
    ascending inside every split. Folds of one repeat are disjoint and cover
    all rows.
    """
    if isinstance(ds, Dataset):
        labels, names = ds.labels, ds.classes
    else:
        labels, names = np.asarray(ds, dtype=np.int64), ()
    check_stratifiable(labels, k, names)
    splitter = RepeatedStratifiedKFold(n_splits=k, n_repeats=repeats, random_state=int(seed) % (2 ** 32))
    placeholder = np.zeros((labels.shape[0], 1))
    splits: List[Split] = []
    for i, (train, val) in enumerate(splitter.split(placeholder, labels)):
        splits.append(
            Split(
                index=i,
                repeat=i // k,
                fold=i % k,
                train_ids=np.sort(train).astype(np.int64),
                val_ids=np.sort(val).astype(np.int64),
            )
        )
    return splits
