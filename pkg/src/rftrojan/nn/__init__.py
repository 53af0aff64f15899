"""Minimal from-scratch CNN engine: layers, backprop, Adam, training."""

from .initializers import he_init
from .layers import (
    Conv2D,
    Dense,
    Dropout,
    Flatten,
    MaxPool2D,
    ReLU,
    Softmax,
    conv2d,
    dropout,
    maxpool2d,
    relu,
    softmax,
)
from .loss import cross_entropy_loss, cross_entropy_logit_grad
from .model_io import load_model, save_model
from .network import LayerSpec, Network, NetworkConfig, desk_network_config, full_network_config
from .optim import AdamState, adam_step
from .training import (
    TrainConfig,
    TrainedModel,
    last_hidden_activations,
    predict,
    train,
)

__all__ = [
    "AdamState",
    "Conv2D",
    "Dense",
    "Dropout",
    "Flatten",
    "LayerSpec",
    "MaxPool2D",
    "Network",
    "NetworkConfig",
    "ReLU",
    "Softmax",
    "TrainConfig",
    "TrainedModel",
    "adam_step",
    "conv2d",
    "cross_entropy_logit_grad",
    "cross_entropy_loss",
    "desk_network_config",
    "dropout",
    "full_network_config",
    "he_init",
    "last_hidden_activations",
    "load_model",
    "maxpool2d",
    "predict",
    "relu",
    "save_model",
    "softmax",
    "train",
]
