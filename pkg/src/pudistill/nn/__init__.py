from .tensor import Tensor, uniform_fan_init, seeded_rng
from .functional import sigmoid, softmax_temperature, weighted_soft_cross_entropy, soft_cross_entropy_rows
from .layers import (
    Layer,
    Dense,
    Conv2d,
    ReLU,
    Sigmoid,
    MaxPool2x2,
    GlobalAvgPool,
    Flatten,
    SoftmaxT,
    AttentionGate,
    layer_from_descriptor,
)
from .network import Network
from .optim import OptimizerState, sgd_step, learning_rate_at
from .gradcheck import grad_check
from .checkpoint import save_checkpoint, load_checkpoint, register_model_type

register_model_type(Network.model_type, Network.from_descriptor)

__all__ = [
    "Tensor",
    "uniform_fan_init",
    "seeded_rng",
    "sigmoid",
    "softmax_temperature",
    "weighted_soft_cross_entropy",
    "soft_cross_entropy_rows",
    "Layer",
    "Dense",
    "Conv2d",
    "ReLU",
    "Sigmoid",
    "MaxPool2x2",
    "GlobalAvgPool",
    "Flatten",
    "SoftmaxT",
    "AttentionGate",
    "layer_from_descriptor",
    "Network",
    "OptimizerState",
    "sgd_step",
    "learning_rate_at",
    "grad_check",
    "save_checkpoint",
    "load_checkpoint",
    "register_model_type",
]
