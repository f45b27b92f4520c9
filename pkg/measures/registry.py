from __future__ import annotations

from typing import Any, Dict, Optional, Sequence, Type

from core.errors import ConfigError
from data.dataset import AttributeSpec, Dataset
from measures.base import SimilarityMeasure
from measures.chopra import ChopraMeasure
from measures.classifier import ClassifierMeasure
from measures.esnn import DEFAULT_ALPHA, ESNNMeasure
from measures.gabel import GabelMeasure
from measures.reference import T11Measure, T21Measure

MEASURES: Dict[str, Type[SimilarityMeasure]] = {
    "t11": T11Measure,
    "t21": T21Measure,
    "gabel": GabelMeasure,
    "chopra": ChopraMeasure,
    "t31": ClassifierMeasure,
    "esnn": ESNNMeasure,
}

UCI_HIDDEN = (13, 13)

# flat 28x28 digits: G 784 -> 128 -> 128 -> 128 -> 10, C 10 -> 128 -> 128 -> 128 -> 1
MNIST_PRESET: Dict[str, Any] = {
    "hidden": [128, 128, 128],
    "input_width": 784,
    "n_classes": 10,
}


def make_measure(
    name: str,
    input_width: int,
    n_classes: int,
    attributes: Optional[Sequence[AttributeSpec]] = None,
    hidden: Sequence[int] = UCI_HIDDEN,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    chopra_loss: str = "contrastive",
    margin: float = 1.0,
    energy_q: float = 1.0,
) -> SimilarityMeasure:
    """Build an untrained measure; learned measures get seeded networks."""
    if name == "t11":
        return T11Measure(input_width, attributes)
    if name == "t21":
        return T21Measure(input_width, attributes)
    if name == "gabel":
        return GabelMeasure(input_width, hidden=hidden, seed=seed)
    if name == "chopra":
        return ChopraMeasure(
            input_width, n_classes, hidden=hidden, seed=seed,
            loss=chopra_loss, margin=margin, energy_q=energy_q,
        )
    if name == "t31":
        return ClassifierMeasure(input_width, n_classes, hidden=hidden, seed=seed)
    if name == "esnn":
        return ESNNMeasure(input_width, n_classes, hidden=hidden, seed=seed, alpha=alpha)
    raise ConfigError(f"unknown measure '{name}' (known: {', '.join(MEASURES)})")


def measure_for_dataset(name: str, ds: Dataset, cfg: Any, seed: int) -> SimilarityMeasure:
    """Build ``name`` sized for ``ds`` with hyperparameters taken from a RunConfig."""
    return make_measure(
        name,
        ds.n_features,
        ds.n_classes,
        attributes=ds.attributes,
        hidden=cfg.hidden,
        seed=seed,
        alpha=cfg.alpha,
        chopra_loss=cfg.chopra_loss,
        margin=cfg.margin,
        energy_q=cfg.energy_q,
    )
