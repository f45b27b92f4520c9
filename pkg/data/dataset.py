from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from sklearn.preprocessing import MinMaxScaler

from core.errors import ShapeError
from data.schema import NUMERIC


@dataclass(frozen=True)
class AttributeSpec:
    """One original attribute and the preprocessed columns it occupies."""
    name: str
    kind: str  # numeric | categorical
    columns: tuple
    categories: tuple = ()


@dataclass
class Dataset:
    """
    Preprocessed rows: ``x`` is N x M' with numeric columns in [0, 1] and one
    one-hot group per categorical attribute; ``labels`` hold class ids 0..n-1.

    ``raw`` keeps the imputed matrix before min-max scaling so folds can be
    re-normalized from their training rows alone.
    """
    x: np.ndarray
    labels: np.ndarray
    classes: List[str]
    attributes: List[AttributeSpec]
    raw: Optional[np.ndarray] = None
    name: str = ""
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.x.ndim != 2:
            raise ShapeError(f"feature matrix must be 2-D, got shape {self.x.shape}")
        if self.labels.shape != (self.x.shape[0],):
            raise ShapeError(f"{self.x.shape[0]} rows but {self.labels.shape[0]} labels")

    @property
    def n_rows(self) -> int:
        return int(self.x.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.x.shape[1])

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def numeric_columns(self) -> List[int]:
        return [c for a in self.attributes if a.kind == NUMERIC for c in a.columns]

    def with_features(self, x: np.ndarray) -> "Dataset":
        return replace(self, x=np.asarray(x, dtype=np.float64))

    @classmethod
    def from_arrays(
        cls,
        x: np.ndarray,
        labels: Sequence[int],
        classes: Optional[List[str]] = None,
        attributes: Optional[List[AttributeSpec]] = None,
        name: str = "",
    ) -> "Dataset":
        """Build a dataset from already preprocessed arrays (every column numeric unless told otherwise)."""
        x = np.asarray(x, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        if classes is None:
            classes = [str(i) for i in range(int(labels.max()) + 1 if labels.size else 0)]
        if attributes is None:
            attributes = [AttributeSpec(name=f"f{i}", kind=NUMERIC, columns=(i,)) for i in range(x.shape[1])]
        return cls(x=x, labels=labels, classes=classes, attributes=attributes, raw=x.copy(), name=name)


def minmax_scale(matrix: np.ndarray, columns: Sequence[int], ref: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Min-max scale ``columns`` of ``matrix`` using statistics of ``ref`` (default:
    the matrix itself). Constant columns map to 0; values are clipped to [0, 1]
    so rows outside the reference range stay in the unit interval.
    """
    out = np.array(matrix, dtype=np.float64, copy=True)
    cols = list(columns)
    if not cols:
        return out
    ref = out if ref is None else np.asarray(ref, dtype=np.float64)
    scaler = MinMaxScaler(clip=True).fit(ref[:, cols])
    out[:, cols] = scaler.transform(out[:, cols])
    return out


def normalize_fold(ds: Dataset, train_ids: Sequence[int]) -> Dataset:
    """Strict mode: re-derive numeric scaling from the training rows only."""
    if ds.raw is None:
        return ds
    train_ids = np.asarray(train_ids, dtype=np.int64)
    x = minmax_scale(ds.raw, ds.numeric_columns, ref=ds.raw[train_ids])
    return ds.with_features(x)
