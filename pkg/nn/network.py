"""
Dense feed-forward networks with exact reverse-mode gradients.

Parameters are laid out per layer as W (n_in x n_out, row-major) followed by
b (n_out); that order is shared by GradientVector, the optimizers and the
JSON document format. A layer computes ``a = act(a_prev @ W + b)``.

Both 1-D (one row) and 2-D (batch of rows) inputs are accepted; batch
gradients are summed over rows, so shared-weight (Siamese) use is just two
forward calls whose gradients are added.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import CacheError, InvalidLayoutError, ShapeError
from nn import activations as act


@dataclass
class Network:
    layout: List[int]
    activations: List[str]
    seed: int
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    version: int = 0

    @property
    def input_width(self) -> int:
        return self.layout[0]

    @property
    def output_width(self) -> int:
        return self.layout[-1]

    @property
    def parameter_count(self) -> int:
        return parameter_count(self.layout)

    def get_params(self) -> np.ndarray:
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(W.ravel())
            parts.append(b)
        return np.concatenate(parts).astype(np.float64, copy=True)

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=np.float64)
        if flat.ndim != 1 or flat.shape[0] != self.parameter_count:
            raise ShapeError(f"expected {self.parameter_count} parameters, got shape {flat.shape}")
        pos = 0
        for i, (n_in, n_out) in enumerate(zip(self.layout[:-1], self.layout[1:])):
            self.weights[i] = flat[pos:pos + n_in * n_out].reshape(n_in, n_out).copy()
            pos += n_in * n_out
            self.biases[i] = flat[pos:pos + n_out].copy()
            pos += n_out
        # caches taken before this call are now stale
        self.version += 1

    def copy(self) -> "Network":
        return Network(
            layout=list(self.layout),
            activations=list(self.activations),
            seed=self.seed,
            weights=[W.copy() for W in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass
class ForwardCache:
    net_id: int
    version: int
    batched: bool
    inputs: List[np.ndarray] = field(default_factory=list)  # a_{l-1} per layer
    pre: List[np.ndarray] = field(default_factory=list)  # z_l
    post: List[np.ndarray] = field(default_factory=list)  # a_l


@dataclass
class GradientVector:
    values: np.ndarray
    tag: str = ""
    input_grad: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __add__(self, other: "GradientVector") -> "GradientVector":
        if len(self) != len(other):
            raise ShapeError(f"cannot add gradients of length {len(self)} and {len(other)}")
        tag = self.tag if self.tag == other.tag else "+".join(t for t in (self.tag, other.tag) if t)
        return GradientVector(self.values + other.values, tag=tag)

    def scaled(self, factor: float) -> "GradientVector":
        return GradientVector(self.values * factor, tag=self.tag)


def parameter_count(layout: Sequence[int]) -> int:
    return int(sum((n_in + 1) * n_out for n_in, n_out in zip(layout[:-1], layout[1:])))


def _check_layout(layout: Sequence[int], activations: Sequence[str]) -> None:
    if len(layout) < 2:
        raise InvalidLayoutError(f"layout needs at least 2 entries, got {list(layout)}")
    if any(int(n) <= 0 for n in layout):
        raise InvalidLayoutError(f"layout entries must be positive, got {list(layout)}")
    if len(activations) != len(layout) - 1:
        raise InvalidLayoutError(
            f"{len(layout) - 1} layer(s) need as many activations, got {len(activations)}"
        )
    for i, name in enumerate(activations):
        if name not in act.ACTIVATIONS:
            raise InvalidLayoutError(f"unknown activation '{name}' (known: {', '.join(act.ACTIVATIONS)})")
        if name == act.SOFTMAX and i != len(activations) - 1:
            raise InvalidLayoutError("softmax is only allowed on the final layer")


def init_network(layout: Sequence[int], activations: Sequence[str], seed: int) -> Network:
    """Glorot-uniform weights, zero biases, drawn from one seeded generator layer by layer."""
    _check_layout(layout, activations)
    layout = [int(n) for n in layout]
    rng = np.random.default_rng(int(seed))
    weights: List[np.ndarray] = []
    biases: List[np.ndarray] = []
    for n_in, n_out in zip(layout[:-1], layout[1:]):
        limit = np.sqrt(6.0 / (n_in + n_out))
        weights.append(rng.uniform(-limit, limit, size=(n_in, n_out)))
        biases.append(np.zeros(n_out, dtype=np.float64))
    return Network(layout=layout, activations=list(activations), seed=int(seed), weights=weights, biases=biases)


def forward(net: Network, x: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2):
        raise ShapeError(f"input must be a vector or a matrix, got {x.ndim} dimensions")
    if x.shape[-1] != net.input_width:
        raise ShapeError(f"input width {x.shape[-1]} does not match network input width {net.input_width}")
    cache = ForwardCache(net_id=id(net), version=net.version, batched=(x.ndim == 2))
    a = x
    for W, b, name in zip(net.weights, net.biases, net.activations):
        z = a @ W + b
        out = act.apply(name, z)
        cache.inputs.append(a)
        cache.pre.append(z)
        cache.post.append(out)
        a = out
    return a, cache


def predict(net: Network, x: np.ndarray) -> np.ndarray:
    out, _ = forward(net, x)
    return out


def backward(
    net: Network,
    cache: ForwardCache,
    upstream: np.ndarray,
    at_logits: bool = False,
    tag: str = "",
) -> GradientVector:
    """
    Back-propagate ``upstream`` (dL/d output) through the network.

    With ``at_logits=True`` the upstream gradient is taken as dL/dz of the final
    layer (e.g. cross-entropy's p - t), skipping the final activation.
    """
    if cache.net_id != id(net) or cache.version != net.version:
        raise CacheError("forward cache does not match this network (other network or parameters changed)")
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != cache.post[-1].shape:
        raise ShapeError(f"upstream shape {upstream.shape} does not match output shape {cache.post[-1].shape}")

    n_layers = len(net.weights)
    grads_W: List[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    grads_b: List[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    delta = upstream
    for i in reversed(range(n_layers)):
        if not (at_logits and i == n_layers - 1):
            delta = act.backprop(net.activations[i], cache.pre[i], cache.post[i], delta)
        a_prev = cache.inputs[i]
        if cache.batched:
            grads_W[i] = a_prev.T @ delta
            grads_b[i] = delta.sum(axis=0)
        else:
            grads_W[i] = np.outer(a_prev, delta)
            grads_b[i] = delta.copy()
        delta = delta @ net.weights[i].T

    parts = []
    for gW, gb in zip(grads_W, grads_b):
        parts.append(gW.ravel())
        parts.append(gb)
    return GradientVector(values=np.concatenate(parts), tag=tag, input_grad=delta)
