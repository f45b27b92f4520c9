from __future__ import annotations

from typing import Tuple

import numpy as np

from optim.base import GradientLike, Optimizer, OptimizerState, check_lengths, gradient_values

RMSPROP_DEFAULTS = {
    "lr": 1e-3,
    "decay": 0.9,
    "eps": 1e-8,
}


def init_rmsprop_state(size: int, **hyper: float) -> OptimizerState:
    return OptimizerState(
        name="rmsprop",
        size=int(size),
        hyper={**RMSPROP_DEFAULTS, **hyper},
        buffers={"cache": np.zeros(int(size), dtype=np.float64)},
    )


def rmsprop_step(params: np.ndarray, grad: GradientLike, state: OptimizerState) -> Tuple[np.ndarray, OptimizerState]:
    params = np.asarray(params, dtype=np.float64)
    g = gradient_values(grad)
    check_lengths(params, g, state)
    h = state.hyper
    new_state = state.copy()
    cache = h["decay"] * new_state.buffers["cache"] + (1.0 - h["decay"]) * g * g
    new_params = params - h["lr"] * g / (np.sqrt(cache) + h["eps"])
    new_state.buffers["cache"] = cache
    new_state.iteration += 1
    return new_params, new_state


class RMSProp(Optimizer):
    name = "rmsprop"
    defaults = RMSPROP_DEFAULTS

    def init_state(self, size: int) -> OptimizerState:
        return init_rmsprop_state(size, **self.hyper)

    def step(self, params, grad, state):
        return rmsprop_step(params, grad, state)
