from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple, Union

import numpy as np

from core.errors import ShapeError
from nn.network import GradientVector


@dataclass
class OptimizerState:
    """Per-run optimizer state; owned by exactly one training loop."""
    name: str
    size: int
    hyper: Dict[str, float]
    iteration: int = 0
    buffers: Dict[str, np.ndarray] = field(default_factory=dict)

    def copy(self) -> "OptimizerState":
        return OptimizerState(
            name=self.name,
            size=self.size,
            hyper=dict(self.hyper),
            iteration=self.iteration,
            buffers={k: v.copy() for k, v in self.buffers.items()},
        )


GradientLike = Union[GradientVector, np.ndarray]


def gradient_values(grad: GradientLike) -> np.ndarray:
    if isinstance(grad, GradientVector):
        return grad.values
    return np.asarray(grad, dtype=np.float64)


def check_lengths(params: np.ndarray, grad: np.ndarray, state: OptimizerState) -> None:
    if params.ndim != 1 or grad.shape != params.shape:
        raise ShapeError(f"gradient shape {grad.shape} does not match parameter shape {params.shape}")
    if state.size != params.shape[0]:
        raise ShapeError(f"optimizer state sized for {state.size} parameters, got {params.shape[0]}")


class Optimizer(ABC):
    """First-order optimizer over a flat parameter vector."""

    name: str = ""
    defaults: Dict[str, float] = {}
    full_batch_only: bool = False

    def __init__(self, **hyper: float) -> None:
        unknown = set(hyper) - set(self.defaults)
        if unknown:
            raise ValueError(f"{self.name}: unknown hyperparameter(s) {sorted(unknown)}")
        self.hyper = {**self.defaults, **{k: float(v) for k, v in hyper.items()}}

    @abstractmethod
    def init_state(self, size: int) -> OptimizerState:
        pass

    @abstractmethod
    def step(self, params: np.ndarray, grad: GradientLike, state: OptimizerState) -> Tuple[np.ndarray, OptimizerState]:
        """Return updated copies of params and state; inputs are not mutated."""
        pass

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, **self.hyper}
