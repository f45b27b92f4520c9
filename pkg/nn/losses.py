"""
Loss primitives.

Each function returns ``(value, gradient)``; both follow the shape of the
inputs, so a batch gives per-row values and per-row gradients. Callers do
the averaging.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np

from core.errors import ShapeError

PROB_FLOOR = 1e-12
ENERGY_DECAY = 2.77


def cross_entropy(p: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """-sum(t * ln p) with p clamped to [1e-12, 1]; gradient is p - t at the softmax logits."""
    p = np.asarray(p, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if p.shape != t.shape:
        raise ShapeError(f"prediction shape {p.shape} does not match target shape {t.shape}")
    clamped = np.clip(p, PROB_FLOOR, 1.0)
    value = -np.sum(t * np.log(clamped), axis=-1)
    return value, p - t


def absolute_error(pred, s) -> Tuple[np.ndarray, np.ndarray]:
    """|s - pred| and its subgradient w.r.t. pred, 0 at pred == s."""
    pred = np.asarray(pred, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    diff = s - pred
    return np.abs(diff), -np.sign(diff)


def contrastive_loss(energy, s, margin: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """s * E^2 / 2 + (1 - s) * max(0, margin - E)^2 / 2 and its derivative w.r.t. E."""
    E = np.asarray(energy, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    gap = np.maximum(0.0, margin - E)
    value = s * 0.5 * E ** 2 + (1.0 - s) * 0.5 * gap ** 2
    grad = s * E - (1.0 - s) * gap
    return value, grad


def energy_loss(energy, s, q: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exponential energy loss: genuine pairs pay (2/Q) E^2, impostor pairs pay
    2Q exp(-2.77 E / Q); Q bounds the energy scale.
    """
    E = np.asarray(energy, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    decay = np.exp(-ENERGY_DECAY * E / q)
    value = s * (2.0 / q) * E ** 2 + (1.0 - s) * 2.0 * q * decay
    grad = s * (4.0 / q) * E - (1.0 - s) * 2.0 * ENERGY_DECAY * decay
    return value, grad
