from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from nn.activations import RELU, SIGMOID
from nn.losses import absolute_error
from nn.network import GradientVector, Network, backward, forward, init_network, predict
from nn.serialization import network_from_document, network_to_document
from measures.base import MeasureTag, SimilarityMeasure


class GabelMeasure(SimilarityMeasure):
    """
    One network C over concat(x, y) with a single sigmoid output.

    Nothing forces C(x, y) == C(y, x), so it is trained on ordered pairs.
    """

    name = "gabel"
    tag = MeasureTag.TYPE2_GABEL
    c_descriptor = "network-on-concatenation"
    learned = True
    default_pair_mode = "ordered-full"

    def __init__(
        self,
        input_width: int,
        hidden: Sequence[int] = (13, 13),
        seed: int = 0,
        net: Optional[Network] = None,
    ) -> None:
        super().__init__(input_width)
        layout = [2 * self.input_width, *[int(h) for h in hidden], 1]
        self.net = net or init_network(layout, [RELU] * len(hidden) + [SIGMOID], seed)

    def networks(self) -> List[Network]:
        return [self.net]

    def _raw_pair(self, x, y) -> float:
        return gabel_similarity(self.net, x, y)

    def _score_block(self, queries, candidates):
        q, c = queries.shape[0], candidates.shape[0]
        left = np.repeat(queries, c, axis=0)
        right = np.tile(candidates, (q, 1))
        out = predict(self.net, np.hstack([left, right]))
        return out[:, 0].reshape(q, c)

    def loss_and_grad(self, x, labels, n_classes, left=None, right=None, s=None, chunk=65536) -> Tuple[float, List[GradientVector]]:
        total = len(left)
        loss = 0.0
        grad = np.zeros(self.net.parameter_count)
        for start in range(0, total, chunk):
            li, ri, si = left[start:start + chunk], right[start:start + chunk], s[start:start + chunk]
            out, cache = forward(self.net, np.hstack([x[li], x[ri]]))
            value, sub = absolute_error(out[:, 0], si)
            loss += float(np.sum(value))
            grad += backward(self.net, cache, (sub / total)[:, None]).values
        return loss / total, [GradientVector(grad, tag="abs")]

    def to_dict(self) -> Dict[str, Any]:
        return {"input_width": self.input_width, "networks": {"c": network_to_document(self.net)}}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GabelMeasure":
        net = network_from_document(data["networks"]["c"])
        return cls(int(data["input_width"]), hidden=net.layout[1:-1], net=net)


def gabel_similarity(net: Network, x: np.ndarray, y: np.ndarray) -> float:
    return float(predict(net, np.concatenate([np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)]))[0])


def train_gabel(ds, train_ids, epochs: int = 200, seed: int = 0, hidden: Sequence[int] = (13, 13), **kwargs) -> Network:
    """Train on every ordered pair of distinct training rows; returns the network."""
    from measures.training import train_measure

    measure = GabelMeasure(ds.n_features, hidden=hidden, seed=seed)
    train_measure(measure, ds, train_ids, pair_mode="ordered-full", epochs=epochs, seed=seed, **kwargs)
    return measure.net
