"""
Extended Siamese network: S(x, y) = C(|G(x) - G(y)|).

G is shared by both inputs and ends in a softmax over the classes; C starts
from the elementwise absolute difference, so S(x, y) == S(y, x) exactly and
S(x, x) == C(0) for every x.

Per pair the loss mixes two cross-entropy terms on G's class output with the
absolute similarity error of C:

    (1 - alpha) / 2 * (CE(G(x), t_x) + CE(G(y), t_y)) + alpha * |s - S(x, y)|

averaged over pairs. G receives gradient from all three terms, C from the last.
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError
from nn.activations import RELU, SIGMOID, SOFTMAX, softmax_jvp
from nn.losses import absolute_error, cross_entropy
from nn.network import GradientVector, Network, backward, forward, init_network, predict
from nn.serialization import network_from_document, network_to_document
from measures.base import MeasureTag, SimilarityMeasure

DEFAULT_ALPHA = 0.15


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise ConfigError(f"alpha must be within [0, 1], got {alpha}")
    return alpha


def esnn_batch_loss(
    alpha: float,
    g: Network,
    c: Network,
    x: np.ndarray,
    targets: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    s: np.ndarray,
    chunk: int = 65536,
) -> Tuple[float, GradientVector, GradientVector]:
    """
    Mean loss over pairs (left[i], right[i]) of rows of ``x`` and the gradients
    for G and C.

    G runs once over ``x``; per-row gradients of its softmax output are
    gathered with np.add.at and pushed through G in a single backward pass.
    """
    alpha = check_alpha(alpha)
    total = len(left)
    p, g_cache = forward(g, x)
    ce_value, ce_logits = cross_entropy(p, targets)

    d_p = np.zeros_like(p)  # similarity path, w.r.t. G's softmax output
    d_logits = np.zeros_like(p)  # classification path, w.r.t. G's logits
    c_grad = np.zeros(c.parameter_count)
    loss = 0.0
    ce_weight = (1.0 - alpha) / 2.0

    for start in range(0, total, chunk):
        li, ri, si = left[start:start + chunk], right[start:start + chunk], s[start:start + chunk]
        diff = p[li] - p[ri]
        out, c_cache = forward(c, np.abs(diff))
        sim_value, sim_sub = absolute_error(out[:, 0], si)
        loss += float(np.sum(ce_weight * (ce_value[li] + ce_value[ri]) + alpha * sim_value))

        c_back = backward(c, c_cache, (alpha * sim_sub / total)[:, None])
        c_grad += c_back.values
        # d|a - b| / da = sign(a - b), 0 at equality
        d_diff = c_back.input_grad * np.sign(diff)
        np.add.at(d_p, li, d_diff)
        np.add.at(d_p, ri, -d_diff)

        np.add.at(d_logits, li, (ce_weight / total) * ce_logits[li])
        np.add.at(d_logits, ri, (ce_weight / total) * ce_logits[ri])

    d_logits += softmax_jvp(p, d_p)
    g_grad = backward(g, g_cache, d_logits, at_logits=True, tag="esnn")
    return loss / total, GradientVector(g_grad.values, tag="esnn"), GradientVector(c_grad, tag="esnn")


def esnn_loss(
    alpha: float,
    x: np.ndarray,
    y: np.ndarray,
    s: float,
    t_x: np.ndarray,
    t_y: np.ndarray,
    g: Network,
    c: Network,
) -> Tuple[float, GradientVector, GradientVector]:
    """Loss of one triplet (x, y, s) with one-hot class vectors t_x, t_y."""
    rows = np.vstack([np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)])
    targets = np.vstack([np.asarray(t_x, dtype=np.float64), np.asarray(t_y, dtype=np.float64)])
    return esnn_batch_loss(
        alpha, g, c, rows, targets,
        left=np.array([0]), right=np.array([1]), s=np.array([float(s)]),
    )


class ESNNMeasure(SimilarityMeasure):
    name = "esnn"
    tag = MeasureTag.TYPE4_ESNN
    g_descriptor = "network-softmax"
    c_descriptor = "network-over-abs-diff"
    learned = True
    default_pair_mode = "unordered-unique"

    def __init__(
        self,
        input_width: int,
        n_classes: int,
        hidden: Sequence[int] = (13, 13),
        seed: int = 0,
        alpha: float = DEFAULT_ALPHA,
        g: Optional[Network] = None,
        c: Optional[Network] = None,
    ) -> None:
        super().__init__(input_width)
        self.alpha = check_alpha(alpha)
        hidden = [int(h) for h in hidden]
        acts = [RELU] * len(hidden)
        # C draws from a different stream than G
        self.g = g or init_network([self.input_width, *hidden, int(n_classes)], acts + [SOFTMAX], seed)
        self.c = c or init_network([int(n_classes), *hidden, 1], acts + [SIGMOID], seed + 1)

    def networks(self) -> List[Network]:
        return [self.g, self.c]

    def embed(self, rows: np.ndarray) -> np.ndarray:
        return predict(self.g, rows)

    def _raw_pair(self, x, y) -> float:
        return esnn_similarity(self.g, self.c, x, y)

    def _score_block(self, queries, candidates):
        eq = self.embed(queries)
        ec = self.embed(candidates)
        diff = np.abs(eq[:, None, :] - ec[None, :, :]).reshape(-1, eq.shape[1])
        return predict(self.c, diff)[:, 0].reshape(eq.shape[0], ec.shape[0])

    def loss_and_grad(self, x, labels, n_classes, left=None, right=None, s=None, chunk=65536) -> Tuple[float, List[GradientVector]]:
        targets = np.eye(n_classes)[labels]
        loss, g_grad, c_grad = esnn_batch_loss(self.alpha, self.g, self.c, x, targets, left, right, s, chunk=chunk)
        return loss, [g_grad, c_grad]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_width": self.input_width,
            "alpha": self.alpha,
            "networks": {"g": network_to_document(self.g), "c": network_to_document(self.c)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ESNNMeasure":
        g = network_from_document(data["networks"]["g"])
        c = network_from_document(data["networks"]["c"])
        return cls(int(data["input_width"]), g.output_width, hidden=g.layout[1:-1], alpha=data.get("alpha", DEFAULT_ALPHA), g=g, c=c)


def esnn_similarity(g: Network, c: Network, x: np.ndarray, y: np.ndarray) -> float:
    return float(predict(c, np.abs(predict(g, x) - predict(g, y)))[0])
