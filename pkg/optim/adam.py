from __future__ import annotations

from typing import Tuple

import numpy as np

from optim.base import GradientLike, Optimizer, OptimizerState, check_lengths, gradient_values

ADAM_DEFAULTS = {
    "lr": 1e-3,
    "beta1": 0.9,
    "beta2": 0.999,
    "eps": 1e-8,
}


def init_adam_state(size: int, **hyper: float) -> OptimizerState:
    return OptimizerState(
        name="adam",
        size=int(size),
        hyper={**ADAM_DEFAULTS, **hyper},
        buffers={
            "m": np.zeros(int(size), dtype=np.float64),
            "v": np.zeros(int(size), dtype=np.float64),
        },
    )


def adam_step(params: np.ndarray, grad: GradientLike, state: OptimizerState) -> Tuple[np.ndarray, OptimizerState]:
    """Adam with bias-corrected first and second moments."""
    params = np.asarray(params, dtype=np.float64)
    g = gradient_values(grad)
    check_lengths(params, g, state)
    h = state.hyper
    new_state = state.copy()
    new_state.iteration += 1
    t = new_state.iteration

    m = h["beta1"] * new_state.buffers["m"] + (1.0 - h["beta1"]) * g
    v = h["beta2"] * new_state.buffers["v"] + (1.0 - h["beta2"]) * g * g
    m_hat = m / (1.0 - h["beta1"] ** t)
    v_hat = v / (1.0 - h["beta2"] ** t)
    new_params = params - h["lr"] * m_hat / (np.sqrt(v_hat) + h["eps"])

    new_state.buffers["m"] = m
    new_state.buffers["v"] = v
    return new_params, new_state


class Adam(Optimizer):
    name = "adam"
    defaults = ADAM_DEFAULTS

    def init_state(self, size: int) -> OptimizerState:
        return init_adam_state(size, **self.hyper)

    def step(self, params, grad, state):
        return adam_step(params, grad, state)
