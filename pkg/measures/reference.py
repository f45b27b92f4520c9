"""
Training-free weighted-sum measures.

Global similarity is the uniformly weighted mean of per-attribute local
similarities. Numeric attributes compare scaled values; a categorical
attribute compares its whole one-hot group (1 if equal, else 0), so every
original attribute carries the same weight whatever its number of categories.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.errors import DataError, NotTrainedError
from data.dataset import AttributeSpec
from data.schema import CATEGORICAL, NUMERIC
from measures.base import MeasureTag, SimilarityMeasure

EXPONENT_MIN = 1.0
EXPONENT_MAX = 4.0


def default_attributes(width: int) -> List[AttributeSpec]:
    return [AttributeSpec(name=f"f{i}", kind=NUMERIC, columns=(i,)) for i in range(width)]


def _attribute_layout(attributes: Sequence[AttributeSpec]):
    numeric = np.array([a.columns[0] for a in attributes if a.kind == NUMERIC], dtype=np.int64)
    groups = [np.array(a.columns, dtype=np.int64) for a in attributes if a.kind == CATEGORICAL]
    return numeric, groups


def _local_similarities(
    x: np.ndarray,
    y: np.ndarray,
    numeric: np.ndarray,
    groups: List[np.ndarray],
    exponents: Optional[np.ndarray],
) -> np.ndarray:
    """Per-attribute locals, shape (..., M); numeric attributes first, then categorical ones."""
    parts = []
    if numeric.size:
        local = 1.0 - np.abs(x[..., numeric] - y[..., numeric])
        if exponents is not None:
            local = local ** exponents
        parts.append(local)
    for cols in groups:
        # one-hot rows differ in exactly two positions when categories differ
        parts.append((1.0 - 0.5 * np.sum(np.abs(x[..., cols] - y[..., cols]), axis=-1))[..., None])
    return np.concatenate(parts, axis=-1)


class T11Measure(SimilarityMeasure):
    """Uniform weights, linear numeric locals, equality for categories."""

    name = "t11"
    tag = MeasureTag.TYPE1
    c_descriptor = "weighted-sum"

    def __init__(self, input_width: int, attributes: Optional[Sequence[AttributeSpec]] = None) -> None:
        super().__init__(input_width)
        self.attributes = list(attributes) if attributes is not None else default_attributes(input_width)
        self._numeric, self._groups = _attribute_layout(self.attributes)

    def _exponents(self) -> Optional[np.ndarray]:
        return None

    def _raw_pair(self, x, y) -> float:
        local = _local_similarities(x, y, self._numeric, self._groups, self._exponents())
        return float(np.sum(local) / local.shape[-1])

    def _score_block(self, queries, candidates):
        local = _local_similarities(queries[:, None, :], candidates[None, :, :], self._numeric, self._groups, self._exponents())
        return np.sum(local, axis=-1) / local.shape[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_width": self.input_width,
            "attributes": [attribute_to_dict(a) for a in self.attributes],
        }


def t11_similarity(x, y, attributes: Optional[Sequence[AttributeSpec]] = None) -> float:
    x = np.asarray(x, dtype=np.float64)
    return T11Measure(x.shape[0], attributes).similarity(x, y)


@dataclass
class LocalSimParams:
    """Statistics of each numeric attribute on the training partition plus its exponent."""
    names: List[str]
    minimum: np.ndarray
    maximum: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    exponent: np.ndarray
    categorical: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "names": list(self.names),
            "min": [float(v) for v in self.minimum],
            "max": [float(v) for v in self.maximum],
            "mean": [float(v) for v in self.mean],
            "std": [float(v) for v in self.std],
            "exponent": [float(v) for v in self.exponent],
            "categorical": list(self.categorical),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LocalSimParams":
        return cls(
            names=list(data["names"]),
            minimum=np.asarray(data["min"], dtype=np.float64),
            maximum=np.asarray(data["max"], dtype=np.float64),
            mean=np.asarray(data["mean"], dtype=np.float64),
            std=np.asarray(data["std"], dtype=np.float64),
            exponent=np.asarray(data["exponent"], dtype=np.float64),
            categorical=list(data.get("categorical", [])),
        )


def exponent_for(spread: np.ndarray, std: np.ndarray) -> np.ndarray:
    """m = clamp(range / (4 sigma), 1, 4); a constant attribute gets m = 1."""
    spread = np.asarray(spread, dtype=np.float64)
    std = np.asarray(std, dtype=np.float64)
    m = np.full(spread.shape, EXPONENT_MIN)
    ok = std > 0
    m[ok] = np.clip(spread[ok] / (4.0 * std[ok]), EXPONENT_MIN, EXPONENT_MAX)
    return m


def fit_t21(x_train: np.ndarray, attributes: Optional[Sequence[AttributeSpec]] = None) -> LocalSimParams:
    x_train = np.asarray(x_train, dtype=np.float64)
    if x_train.ndim != 2 or x_train.shape[0] == 0:
        raise DataError("fit_t21 needs a non-empty training partition")
    attributes = list(attributes) if attributes is not None else default_attributes(x_train.shape[1])
    numeric = [a for a in attributes if a.kind == NUMERIC]
    cols = [a.columns[0] for a in numeric]
    values = x_train[:, cols]
    lo = values.min(axis=0)
    hi = values.max(axis=0)
    std = values.std(axis=0)
    return LocalSimParams(
        names=[a.name for a in numeric],
        minimum=lo,
        maximum=hi,
        mean=np.clip(values.mean(axis=0), lo, hi),
        std=std,
        exponent=exponent_for(hi - lo, std),
        categorical=[a.name for a in attributes if a.kind == CATEGORICAL],
    )


class T21Measure(T11Measure):
    """Polynomial numeric locals (1 - |a - b|)^m with m fitted on the training partition."""

    name = "t21"
    tag = MeasureTag.TYPE2_LOCAL
    c_descriptor = "weighted-sum-polynomial-locals"

    def __init__(
        self,
        input_width: int,
        attributes: Optional[Sequence[AttributeSpec]] = None,
        params: Optional[LocalSimParams] = None,
    ) -> None:
        super().__init__(input_width, attributes)
        self.params = params

    def prepare(self, x_train, labels) -> None:
        self.params = fit_t21(x_train, self.attributes)

    def _check_trained(self) -> None:
        if self.params is None:
            raise NotTrainedError("t21 local similarity parameters have not been fitted")

    def _exponents(self) -> Optional[np.ndarray]:
        return self.params.exponent

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["local_params"] = self.params.to_dict() if self.params is not None else None
        return data


def t21_similarity(params: LocalSimParams, x, y, attributes: Optional[Sequence[AttributeSpec]] = None) -> float:
    x = np.asarray(x, dtype=np.float64)
    return T21Measure(x.shape[0], attributes, params).similarity(x, y)


def attribute_to_dict(a: AttributeSpec) -> Dict[str, Any]:
    return {"name": a.name, "kind": a.kind, "columns": list(a.columns), "categories": list(a.categories)}


def attribute_from_dict(data: Dict[str, Any]) -> AttributeSpec:
    return AttributeSpec(
        name=str(data["name"]),
        kind=str(data["kind"]),
        columns=tuple(int(c) for c in data["columns"]),
        categories=tuple(str(c) for c in data.get("categories", [])),
    )
