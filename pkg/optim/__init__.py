from __future__ import annotations

from typing import Dict, Mapping, Optional, Type

from core.errors import ConfigError
from optim.adam import Adam, adam_step
from optim.base import Optimizer, OptimizerState
from optim.rmsprop import RMSProp, rmsprop_step
from optim.rprop import RProp, rprop_step

OPTIMIZERS: Dict[str, Type[Optimizer]] = {
    RProp.name: RProp,
    Adam.name: Adam,
    RMSProp.name: RMSProp,
}


def check_optimizer_params(name: str, params: Optional[Mapping[str, float]]) -> None:
    cls = OPTIMIZERS.get(name)
    if cls is None:
        raise ConfigError(f"unknown optimizer '{name}' (known: {', '.join(OPTIMIZERS)})")
    unknown = set(params or {}) - set(cls.defaults)
    if unknown:
        raise ConfigError(
            f"optimizer_params: {sorted(unknown)} not valid for {name} (valid: {sorted(cls.defaults)})"
        )


def make_optimizer(name: str, params: Optional[Mapping[str, float]] = None) -> Optimizer:
    check_optimizer_params(name, params)
    return OPTIMIZERS[name](**dict(params or {}))


__all__ = [
    "OPTIMIZERS",
    "Optimizer",
    "OptimizerState",
    "RProp",
    "Adam",
    "RMSProp",
    "adam_step",
    "rmsprop_step",
    "rprop_step",
    "check_optimizer_params",
    "make_optimizer",
]
