"""Minimal neural-network engine: 3x3 conv, 2x2 max pool, dense, tanh, Adam.

Arrays are plain numpy ndarrays (float32 for training/inference, float64 for
gradient checking); there is no autograd graph, just exact hand-derived
backward kernels for this fixed operator set.
"""

from .adam import AdamState, adam_init, adam_step
from .network import Conv3x3Tanh, Dense, Flatten, MaxPool2x2, Network, backprop
from .ops import (
    NumericError,
    conv3x3_forward,
    dense_forward,
    maxpool2x2_forward,
    mse_loss,
)

__all__ = [
    "AdamState",
    "adam_init",
    "adam_step",
    "Conv3x3Tanh",
    "Dense",
    "Flatten",
    "MaxPool2x2",
    "Network",
    "backprop",
    "NumericError",
    "conv3x3_forward",
    "dense_forward",
    "maxpool2x2_forward",
    "mse_loss",
]
