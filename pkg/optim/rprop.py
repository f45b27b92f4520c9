"""
Resilient propagation, iRprop- variant (no weight backtracking).

For every parameter i with previous gradient g' and current gradient g:

    g' * g > 0  ->  step_i = min(step_i * eta_plus, step_max)
    g' * g < 0  ->  step_i = max(step_i * eta_minus, step_min), g := 0
    otherwise   ->  step_i unchanged

then param_i -= sign(g) * step_i. The stored g is what the next step sees,
so after a sign flip the parameter rests for one step. Only full-batch
gradients are meaningful here.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np

from optim.base import GradientLike, Optimizer, OptimizerState, check_lengths, gradient_values

RPROP_DEFAULTS = {
    "eta_plus": 1.2,
    "eta_minus": 0.5,
    "step_init": 0.1,
    "step_min": 1e-6,
    "step_max": 50.0,
}


def init_rprop_state(size: int, **hyper: float) -> OptimizerState:
    h = {**RPROP_DEFAULTS, **hyper}
    return OptimizerState(
        name="rprop",
        size=int(size),
        hyper=h,
        buffers={
            "step": np.full(int(size), h["step_init"], dtype=np.float64),
            "prev_grad": np.zeros(int(size), dtype=np.float64),
        },
    )


def rprop_step(params: np.ndarray, grad: GradientLike, state: OptimizerState) -> Tuple[np.ndarray, OptimizerState]:
    params = np.asarray(params, dtype=np.float64)
    g = gradient_values(grad).copy()
    check_lengths(params, g, state)
    h = state.hyper
    new_state = state.copy()
    step = new_state.buffers["step"]
    product = new_state.buffers["prev_grad"] * g

    grow = product > 0
    shrink = product < 0
    step[grow] = np.minimum(step[grow] * h["eta_plus"], h["step_max"])
    step[shrink] = np.maximum(step[shrink] * h["eta_minus"], h["step_min"])
    g[shrink] = 0.0

    new_params = params - np.sign(g) * step
    new_state.buffers["prev_grad"] = g
    new_state.iteration += 1
    return new_params, new_state


class RProp(Optimizer):
    name = "rprop"
    defaults = RPROP_DEFAULTS
    full_batch_only = True

    def init_state(self, size: int) -> OptimizerState:
        return init_rprop_state(size, **self.hyper)

    def step(self, params, grad, state):
        return rprop_step(params, grad, state)
