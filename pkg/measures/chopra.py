from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError
from nn.activations import LINEAR, RELU
from nn.losses import contrastive_loss, energy_loss
from nn.network import GradientVector, Network, backward, forward, init_network, predict
from nn.serialization import network_from_document, network_to_document
from measures.base import MeasureTag, SimilarityMeasure

CONTRASTIVE = "contrastive"
ENERGY = "energy"


def l1_energy(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(gx - gy), axis=-1)


class ChopraMeasure(SimilarityMeasure):
    """
    Shared embedding network G, energy E = ||G(x) - G(y)||_1, score 1 / (1 + E).

    Trained with the contrastive loss (margin) or the exponential energy loss (Q).
    """

    name = "chopra"
    tag = MeasureTag.TYPE3_CHOPRA
    g_descriptor = "network"
    c_descriptor = "l1-score"
    learned = True
    default_pair_mode = "unordered-unique"

    def __init__(
        self,
        input_width: int,
        embedding_width: int,
        hidden: Sequence[int] = (13, 13),
        seed: int = 0,
        loss: str = CONTRASTIVE,
        margin: float = 1.0,
        energy_q: float = 1.0,
        net: Optional[Network] = None,
    ) -> None:
        super().__init__(input_width)
        if loss not in (CONTRASTIVE, ENERGY):
            raise ConfigError(f"chopra loss must be '{CONTRASTIVE}' or '{ENERGY}', got '{loss}'")
        self.loss = loss
        self.margin = float(margin)
        self.energy_q = float(energy_q)
        layout = [self.input_width, *[int(h) for h in hidden], int(embedding_width)]
        self.g = net or init_network(layout, [RELU] * len(hidden) + [LINEAR], seed)

    def networks(self) -> List[Network]:
        return [self.g]

    def embed(self, rows: np.ndarray) -> np.ndarray:
        return predict(self.g, rows)

    def _raw_pair(self, x, y) -> float:
        return chopra_similarity(self.g, x, y)

    def _score_block(self, queries, candidates):
        eq = self.embed(queries)
        ec = self.embed(candidates)
        return 1.0 / (1.0 + l1_energy(eq[:, None, :], ec[None, :, :]))

    def _pair_loss(self, energy: np.ndarray, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if self.loss == ENERGY:
            return energy_loss(energy, s, self.energy_q)
        return contrastive_loss(energy, s, self.margin)

    def loss_and_grad(self, x, labels, n_classes, left=None, right=None, s=None, chunk=65536) -> Tuple[float, List[GradientVector]]:
        total = len(left)
        emb, cache = forward(self.g, x)
        d_emb = np.zeros_like(emb)
        loss = 0.0
        for start in range(0, total, chunk):
            li, ri, si = left[start:start + chunk], right[start:start + chunk], s[start:start + chunk]
            diff = emb[li] - emb[ri]
            value, d_energy = self._pair_loss(np.sum(np.abs(diff), axis=-1), si)
            loss += float(np.sum(value))
            d_diff = (d_energy / total)[:, None] * np.sign(diff)
            np.add.at(d_emb, li, d_diff)
            np.add.at(d_emb, ri, -d_diff)
        return loss / total, [backward(self.g, cache, d_emb, tag=self.loss)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_width": self.input_width,
            "loss": self.loss,
            "margin": self.margin,
            "energy_q": self.energy_q,
            "networks": {"g": network_to_document(self.g)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChopraMeasure":
        net = network_from_document(data["networks"]["g"])
        return cls(
            int(data["input_width"]),
            net.output_width,
            hidden=net.layout[1:-1],
            loss=data.get("loss", CONTRASTIVE),
            margin=data.get("margin", 1.0),
            energy_q=data.get("energy_q", 1.0),
            net=net,
        )


def chopra_similarity(g: Network, x: np.ndarray, y: np.ndarray) -> float:
    return float(1.0 / (1.0 + l1_energy(predict(g, x), predict(g, y))))


def train_chopra(ds, train_ids, epochs: int = 200, seed: int = 0, hidden: Sequence[int] = (13, 13), loss: str = CONTRASTIVE, margin: float = 1.0, **kwargs) -> Network:
    from measures.training import train_measure

    measure = ChopraMeasure(ds.n_features, ds.n_classes, hidden=hidden, seed=seed, loss=loss, margin=margin)
    train_measure(measure, ds, train_ids, epochs=epochs, seed=seed, **kwargs)
    return measure.g
