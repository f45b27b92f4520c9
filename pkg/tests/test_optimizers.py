from __future__ import annotations

import numpy as np
import pytest

from core.errors import ConfigError, ShapeError
from nn.network import GradientVector
from optim import Adam, RMSProp, RProp, check_optimizer_params, make_optimizer
from optim.rprop import init_rprop_state, rprop_step


def test_rprop_hand_trace():
    params = np.array([1.0, 1.0])
    state = init_rprop_state(2)

    params, state = rprop_step(params, np.array([1.0, -1.0]), state)
    assert np.allclose(params, [0.9, 1.1])

    # same sign grows the step, a sign flip halves it and rests one step
    params, state = rprop_step(params, np.array([1.0, 1.0]), state)
    assert np.allclose(state.buffers["step"], [0.12, 0.05])
    assert np.allclose(params, [0.78, 1.1])

    params, state = rprop_step(params, np.array([1.0, 1.0]), state)
    assert np.allclose(state.buffers["step"], [0.144, 0.05])
    assert np.allclose(params, [0.636, 1.05])
    assert state.iteration == 3


def test_rprop_step_bounds():
    state = init_rprop_state(1, step_init=40.0, step_max=50.0, step_min=0.3)
    params = np.zeros(1)
    for _ in range(3):
        params, state = rprop_step(params, np.array([1.0]), state)
    assert state.buffers["step"][0] == 50.0
    for sign in (-1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0):
        params, state = rprop_step(params, np.array([sign]), state)
    assert state.buffers["step"][0] >= 0.3


def test_step_does_not_mutate_inputs():
    opt = RProp()
    params = np.array([0.5, -0.5])
    state = opt.init_state(2)
    before = state.copy()
    new_params, new_state = opt.step(params, GradientVector(np.array([1.0, 1.0])), state)
    assert np.array_equal(params, [0.5, -0.5])
    assert np.array_equal(state.buffers["step"], before.buffers["step"])
    assert state.iteration == 0 and new_state.iteration == 1
    assert not np.array_equal(new_params, params)


def test_adam_first_step_moves_by_lr():
    opt = Adam(lr=0.01)
    params, state = opt.step(np.array([1.0, 1.0]), np.array([3.0, -0.5]), opt.init_state(2))
    assert np.allclose(params, [0.99, 1.01], atol=1e-8)


def test_rmsprop_first_step():
    opt = RMSProp()
    g = np.array([2.0])
    params, state = opt.step(np.array([0.0]), g, opt.init_state(1))
    expected = -1e-3 * 2.0 / (np.sqrt(0.1 * 4.0) + 1e-8)
    assert params[0] == pytest.approx(expected)
    assert state.buffers["cache"][0] == pytest.approx(0.4)


def test_length_mismatch_is_rejected():
    opt = Adam()
    with pytest.raises(ShapeError):
        opt.step(np.zeros(3), np.zeros(2), opt.init_state(3))
    with pytest.raises(ShapeError):
        opt.step(np.zeros(3), np.zeros(3), opt.init_state(4))


def test_rprop_is_full_batch_only():
    assert RProp.full_batch_only
    assert not Adam.full_batch_only and not RMSProp.full_batch_only


def test_make_optimizer_and_params():
    opt = make_optimizer("adam", {"lr": 0.1})
    assert opt.hyper["lr"] == 0.1 and opt.hyper["beta1"] == 0.9
    with pytest.raises(ConfigError):
        make_optimizer("sgd")
    with pytest.raises(ConfigError):
        check_optimizer_params("rprop", {"lr": 0.1})


def test_optimizers_minimize_a_quadratic():
    target = np.array([0.3, -0.7, 1.2])
    for name, params in (("rprop", {}), ("adam", {"lr": 0.05}), ("rmsprop", {"lr": 0.01})):
        opt = make_optimizer(name, params)
        x = np.zeros(3)
        state = opt.init_state(3)
        for _ in range(500):
            x, state = opt.step(x, 2 * (x - target), state)
        assert np.allclose(x, target, atol=0.05), name
