from __future__ import annotations

import numpy as np

RELU = "relu"
SIGMOID = "sigmoid"
SOFTMAX = "softmax"
LINEAR = "linear"

ACTIVATIONS = (RELU, SIGMOID, SOFTMAX, LINEAR)


def sigmoid(z: np.ndarray) -> np.ndarray:
    # tanh form does not overflow for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def apply(name: str, z: np.ndarray) -> np.ndarray:
    if name == RELU:
        return np.maximum(z, 0.0)
    if name == SIGMOID:
        return sigmoid(z)
    if name == SOFTMAX:
        return softmax(z)
    if name == LINEAR:
        return z.copy()
    raise ValueError(f"unknown activation '{name}'")


def backprop(name: str, z: np.ndarray, a: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """Map dL/da to dL/dz for one layer."""
    if name == RELU:
        return upstream * (z > 0.0)
    if name == SIGMOID:
        return upstream * a * (1.0 - a)
    if name == SOFTMAX:
        return softmax_jvp(a, upstream)
    if name == LINEAR:
        return upstream
    raise ValueError(f"unknown activation '{name}'")


def softmax_jvp(p: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """Softmax Jacobian-vector product: p * (g - <g, p>), row-wise."""
    return p * (upstream - np.sum(upstream * p, axis=-1, keepdims=True))
