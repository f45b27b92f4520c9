from nn.network import (
    ForwardCache,
    GradientVector,
    Network,
    backward,
    forward,
    init_network,
    parameter_count,
    predict,
)
from nn.losses import absolute_error, contrastive_loss, cross_entropy, energy_loss

__all__ = [
    "ForwardCache",
    "GradientVector",
    "Network",
    "backward",
    "forward",
    "init_network",
    "parameter_count",
    "predict",
    "absolute_error",
    "contrastive_loss",
    "cross_entropy",
    "energy_loss",
]
