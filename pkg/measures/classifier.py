from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from nn.activations import RELU, SOFTMAX
from nn.losses import cross_entropy
from nn.network import GradientVector, Network, backward, forward, init_network, predict
from nn.serialization import network_from_document, network_to_document
from measures.base import MeasureTag, SimilarityMeasure


def l2_score(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """1 - ||gx - gy||_2; between 1 - sqrt(2) and 1 for softmax vectors."""
    d = gx - gy
    return 1.0 - np.sqrt(np.sum(d * d, axis=-1))


class ClassifierMeasure(SimilarityMeasure):
    """
    Softmax classifier G trained with cross-entropy on (row, class) pairs;
    similarity is 1 - ||G(x) - G(y)||_2. Ranking uses the raw value, reports
    clamp it to [0, 1].
    """

    name = "t31"
    tag = MeasureTag.TYPE3_CLASSIFIER
    g_descriptor = "softmax-classifier"
    c_descriptor = "l2-score"
    learned = True

    def __init__(
        self,
        input_width: int,
        n_classes: int,
        hidden: Sequence[int] = (13, 13),
        seed: int = 0,
        net: Optional[Network] = None,
    ) -> None:
        super().__init__(input_width)
        layout = [self.input_width, *[int(h) for h in hidden], int(n_classes)]
        self.g = net or init_network(layout, [RELU] * len(hidden) + [SOFTMAX], seed)

    def networks(self) -> List[Network]:
        return [self.g]

    def embed(self, rows: np.ndarray) -> np.ndarray:
        return predict(self.g, rows)

    def report(self, raw):
        return np.clip(raw, 0.0, 1.0)

    def _raw_pair(self, x, y) -> float:
        return t31_similarity(self.g, x, y)

    def _score_block(self, queries, candidates):
        return l2_score(self.embed(queries)[:, None, :], self.embed(candidates)[None, :, :])

    def loss_and_grad(self, x, labels, n_classes, left=None, right=None, s=None, chunk=65536) -> Tuple[float, List[GradientVector]]:
        targets = np.eye(n_classes)[labels]
        p, cache = forward(self.g, x)
        value, grad_logits = cross_entropy(p, targets)
        n = x.shape[0]
        grad = backward(self.g, cache, grad_logits / n, at_logits=True, tag="cross_entropy")
        return float(np.mean(value)), [grad]

    def to_dict(self) -> Dict[str, Any]:
        return {"input_width": self.input_width, "networks": {"g": network_to_document(self.g)}}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassifierMeasure":
        net = network_from_document(data["networks"]["g"])
        return cls(int(data["input_width"]), net.output_width, hidden=net.layout[1:-1], net=net)


def t31_similarity(g: Network, x: np.ndarray, y: np.ndarray) -> float:
    """Raw score; may be negative."""
    return float(l2_score(predict(g, x), predict(g, y)))


def train_t31_classifier(ds, train_ids, epochs: int = 200, seed: int = 0, hidden: Sequence[int] = (13, 13), **kwargs) -> Network:
    from measures.training import train_measure

    measure = ClassifierMeasure(ds.n_features, ds.n_classes, hidden=hidden, seed=seed)
    train_measure(measure, ds, train_ids, epochs=epochs, seed=seed, **kwargs)
    return measure.g
