"""
Similarity measures S(x, y) = C(G(x), G(y)).

G embeds a row, C combines two embeddings into one score. Each of them is
either modeled (fixed formula) or learned (a network), which gives the four
measure types:

    type1             G identity,            C modeled weighted sum       (t11)
    type2-local       G identity,            C weighted sum, fitted locals (t21)
    type2-gabel       G identity,            C network on concat(x, y)    (gabel)
    type3-chopra      G network,             C L1-based score             (chopra)
    type3-classifier  G softmax classifier,  C 1 - L2 distance            (t31)
    type4-esnn        G network,             C network on |G(x) - G(y)|   (esnn)

Higher scores mean more similar for every measure. ``raw`` scores are used
for ranking; ``similarity`` returns the reported score, clamped to [0, 1]
where the raw form can leave it.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.errors import NotTrainedError, ShapeError
from nn.network import GradientVector, Network


class MeasureTag(str, Enum):
    TYPE1 = "type1"
    TYPE2_LOCAL = "type2-local"
    TYPE2_GABEL = "type2-gabel"
    TYPE3_CHOPRA = "type3-chopra"
    TYPE3_CLASSIFIER = "type3-classifier"
    TYPE4_ESNN = "type4-esnn"


SYMMETRIC_TAGS = frozenset({
    MeasureTag.TYPE1,
    MeasureTag.TYPE2_LOCAL,
    MeasureTag.TYPE3_CHOPRA,
    MeasureTag.TYPE3_CLASSIFIER,
    MeasureTag.TYPE4_ESNN,
})

# rows per block when scoring query x candidate matrices
QUERY_BLOCK = 64


class SimilarityMeasure(ABC):
    """Common surface of all six measures."""

    name: str = ""
    tag: MeasureTag
    g_descriptor: str = "identity"
    c_descriptor: str = ""
    learned: bool = False
    higher_is_more_similar: bool = True
    # pair mode used when the run config says "auto"; None for measures trained on rows
    default_pair_mode: Optional[str] = None

    def __init__(self, input_width: int) -> None:
        self.input_width = int(input_width)
        self.trained = not self.learned

    # -- scoring -----------------------------------------------------------

    def _check_row(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] != self.input_width:
            raise ShapeError(f"{self.name}: expected a vector of width {self.input_width}, got shape {v.shape}")
        return v

    def _check_matrix(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=np.float64)
        if m.ndim != 2 or m.shape[1] != self.input_width:
            raise ShapeError(f"{self.name}: expected rows of width {self.input_width}, got shape {m.shape}")
        return m

    def _check_trained(self) -> None:
        if not self.trained:
            raise NotTrainedError(f"{self.name} has not been trained")

    def raw(self, x: np.ndarray, y: np.ndarray) -> float:
        """Pre-clamp score used for ranking."""
        self._check_trained()
        return float(self._raw_pair(self._check_row(x), self._check_row(y)))

    def similarity(self, x: np.ndarray, y: np.ndarray) -> float:
        """Reported score in [0, 1]."""
        return float(self.report(self.raw(x, y)))

    def report(self, raw: Any) -> Any:
        return raw

    def score_matrix(self, queries: np.ndarray, candidates: np.ndarray) -> np.ndarray:
        """Raw scores, shape (len(queries), len(candidates))."""
        self._check_trained()
        q = self._check_matrix(queries)
        c = self._check_matrix(candidates)
        out = np.empty((q.shape[0], c.shape[0]), dtype=np.float64)
        for start in range(0, q.shape[0], QUERY_BLOCK):
            stop = min(start + QUERY_BLOCK, q.shape[0])
            out[start:stop] = self._score_block(q[start:stop], c)
        return out

    @abstractmethod
    def _raw_pair(self, x: np.ndarray, y: np.ndarray) -> float:
        pass

    @abstractmethod
    def _score_block(self, queries: np.ndarray, candidates: np.ndarray) -> np.ndarray:
        pass

    # -- training hooks ----------------------------------------------------

    def prepare(self, x_train: np.ndarray, labels: np.ndarray) -> None:
        """Fit data-derived parameters from the training partition (no-op by default)."""
        pass

    def networks(self) -> List[Network]:
        return []

    def loss_and_grad(
        self,
        x: np.ndarray,
        labels: np.ndarray,
        n_classes: int,
        left: Optional[np.ndarray] = None,
        right: Optional[np.ndarray] = None,
        s: Optional[np.ndarray] = None,
        chunk: int = 65536,
    ) -> Tuple[float, List[GradientVector]]:
        """
        Mean training loss and one gradient per network in ``networks()`` order.

        ``x``/``labels`` are the training rows; ``left``/``right`` index into them.
        """
        raise NotImplementedError(f"{self.name} is not trainable")

    # -- persistence -------------------------------------------------------

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "tag": self.tag.value,
            "g": self.g_descriptor,
            "c": self.c_descriptor,
            "learned": self.learned,
        }

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass


def similarity(measure: SimilarityMeasure, x: np.ndarray, y: np.ndarray) -> float:
    """Reported score of ``measure`` on the pair (x, y)."""
    return measure.similarity(x, y)


@dataclass
class RequirementReport:
    symmetric: bool
    max_asymmetry: float
    self_constant: bool
    self_maximal: bool
    non_negative: bool
    pairs_checked: int
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "symmetric": self.symmetric,
            "max_asymmetry": self.max_asymmetry,
            "self_constant": self.self_constant,
            "self_maximal": self.self_maximal,
            "non_negative": self.non_negative,
            "pairs_checked": self.pairs_checked,
            "notes": list(self.notes),
        }


def check_requirements(measure: SimilarityMeasure, rows: np.ndarray, n_pairs: int = 1000, seed: int = 0) -> RequirementReport:
    """
    Probe symmetry, self-similarity and non-negativity on random pairs of ``rows``.

    Symmetry is bit-exact comparison. ``self_constant`` holds when every (x, x)
    scores the same; ``self_maximal`` when no (x, y) scores above its (x, x).
    """
    rows = np.asarray(rows, dtype=np.float64)
    rng = np.random.default_rng(seed)
    n = rows.shape[0]
    a = rng.integers(0, n, size=n_pairs)
    b = rng.integers(0, n, size=n_pairs)

    max_asym = 0.0
    symmetric = True
    non_negative = True
    self_maximal = True
    self_scores = [measure.similarity(rows[i], rows[i]) for i in range(n)]
    for i, j in zip(a.tolist(), b.tolist()):
        sxy = measure.similarity(rows[i], rows[j])
        syx = measure.similarity(rows[j], rows[i])
        if sxy != syx:
            symmetric = False
            max_asym = max(max_asym, abs(sxy - syx))
        if not (0.0 <= sxy <= 1.0):
            non_negative = False
        if sxy > self_scores[i]:
            self_maximal = False

    notes: List[str] = []
    if measure.tag in SYMMETRIC_TAGS and not symmetric:
        notes.append(f"{measure.name} is expected to be symmetric")
    return RequirementReport(
        symmetric=symmetric,
        max_asymmetry=max_asym,
        self_constant=len(set(self_scores)) <= 1,
        self_maximal=self_maximal,
        non_negative=non_negative,
        pairs_checked=int(n_pairs),
        notes=notes,
    )

