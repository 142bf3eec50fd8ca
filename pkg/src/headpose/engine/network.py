"""Feed-forward network container: an ordered stack of layer descriptors.

A network is a plain sequence of layers out of {Conv3x3Tanh, MaxPool2x2,
Flatten, Dense}; the last layer must be a linear Dense with two outputs.
Parameters live in the canonical layouts ((C_out, C_in, 3, 3) filters,
(out, in) dense weights); activations flow channels-last internally so the
convolutions run as single large matrix products. Forward and backward keep
all intermediate state in local variables, so a network instance can serve
concurrent threads as long as its parameter arrays are not being mutated.
"""

from dataclasses import dataclass

import numpy as np

from . import ops
from .ops import NumericError


@dataclass
class Conv3x3Tanh:
    weights: np.ndarray  # (C_out, C_in, 3, 3)
    bias: np.ndarray  # (C_out,)


@dataclass
class MaxPool2x2:
    pass


@dataclass
class Flatten:
    pass


@dataclass
class Dense:
    weights: np.ndarray  # (out_units, in_units)
    bias: np.ndarray  # (out_units,)
    activation: str = "linear"  # "tanh" or "linear"


class Network:
    """Layer stack with forward inference and exact reverse-mode gradients."""

    def __init__(self, layers):
        self.layers = list(layers)

    def params(self):
        """Parameter arrays in network order: [w1, b1, w2, b2, ...]."""
        out = []
        for layer in self.layers:
            if isinstance(layer, (Conv3x3Tanh, Dense)):
                out.append(layer.weights)
                out.append(layer.bias)
        return out

    def n_params(self):
        return sum(p.size for p in self.params())

    def set_params(self, arrays):
        """Copy `arrays` (same order/shapes as params()) into the network."""
        own = self.params()
        if len(own) != len(arrays):
            raise ValueError(f"expected {len(own)} arrays, got {len(arrays)}")
        for p, q in zip(own, arrays):
            if p.shape != q.shape:
                raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
            p[...] = q

    def copy(self):
        return Network([_copy_layer(l) for l in self.layers])

    def astype(self, dtype):
        """New network with parameters cast to `dtype`."""
        net = self.copy()
        for layer in net.layers:
            if isinstance(layer, (Conv3x3Tanh, Dense)):
                layer.weights = layer.weights.astype(dtype)
                layer.bias = layer.bias.astype(dtype)
        return net

    @property
    def dtype(self):
        for layer in self.layers:
            if isinstance(layer, (Conv3x3Tanh, Dense)):
                return layer.weights.dtype
        raise ValueError("network has no parametric layers")

    def forward(self, x):
        """Run the stack on image input (B, C, H, W) / (C, H, W), or flat
        input (B, N) / (N,) for dense-only stacks."""
        x, batched = _ingest(x)
        for layer in self.layers:
            x = _layer_forward(layer, x)[0]
        return x if batched else x[0]

    def backprop(self, batch_in, batch_target):
        """Mean-squared-error training step gradients.

        Args:
            batch_in: (B, C, H, W) input batch.
            batch_target: (B, out_units) regression targets.

        Returns:
            (loss, grads) where grads is a list of arrays congruent with
            params(), holding exact partial derivatives of the loss.

        Raises:
            NumericError: if any activation or the loss is non-finite.
        """
        x, _ = _ingest(batch_in)
        caches = []
        for i, layer in enumerate(self.layers):
            x, cache = _layer_forward(layer, x)
            if not ops._all_finite(x):
                raise NumericError(f"non-finite activation in layer {i}")
            caches.append(cache)
        loss = ops.mse_loss(x, batch_target)
        if not np.isfinite(loss):
            raise NumericError("non-finite loss")
        grad = ops.mse_loss_grad(x, batch_target)

        grads = [None] * len(self.params())
        slot = len(grads)
        for li, (layer, cache) in enumerate(
            zip(reversed(self.layers), reversed(caches))
        ):
            if isinstance(layer, Conv3x3Tanh):
                xp, activated = cache
                grad = ops.tanh_backward(activated, grad)
                need_input_grad = li < len(self.layers) - 1
                grad, gw, gb = ops._nhwc_conv_backward(
                    xp, layer.weights, grad, need_input_grad
                )
                grads[slot - 1] = gb
                grads[slot - 2] = gw
                slot -= 2
            elif isinstance(layer, MaxPool2x2):
                x_shape, idx = cache
                grad = ops._nhwc_pool_backward(x_shape, idx, grad)
            elif isinstance(layer, Flatten):
                grad = grad.reshape(cache)
            elif isinstance(layer, Dense):
                x_in, activated = cache
                if layer.activation == "tanh":
                    grad = ops.tanh_backward(activated, grad)
                grad, gw, gb = ops.dense_backward(x_in, layer.weights, grad)
                grads[slot - 1] = gb
                grads[slot - 2] = gw
                slot -= 2
        return loss, grads


def backprop(net, batch_in, batch_target):
    """Functional alias for Network.backprop."""
    return net.backprop(batch_in, batch_target)


def _ingest(x):
    """Normalize input to batched channels-last (images) or batched flat."""
    if x.ndim == 4:
        return ops._to_nhwc(x), True
    if x.ndim == 3:
        return ops._to_nhwc(x[None]), False
    if x.ndim == 2:
        return x, True
    if x.ndim == 1:
        return x[None], False
    raise ValueError(f"unsupported input shape {x.shape}")


def _layer_forward(layer, x):
    """One layer forward on channels-last input; returns (output, cache)."""
    if isinstance(layer, Conv3x3Tanh):
        y, xp = ops._nhwc_conv_forward(x, layer.weights, layer.bias)
        np.tanh(y, out=y)
        return y, (xp, y)
    if isinstance(layer, MaxPool2x2):
        y, idx = ops._nhwc_pool_forward(x)
        return y, (x.shape, idx)
    if isinstance(layer, Flatten):
        return x.reshape(x.shape[0], -1), x.shape
    if isinstance(layer, Dense):
        y = ops.dense_forward(x, layer.weights, layer.bias, layer.activation)
        return y, (x, y)
    raise TypeError(f"unknown layer type {type(layer).__name__}")


def _copy_layer(layer):
    if isinstance(layer, Conv3x3Tanh):
        return Conv3x3Tanh(layer.weights.copy(), layer.bias.copy())
    if isinstance(layer, Dense):
        return Dense(layer.weights.copy(), layer.bias.copy(), layer.activation)
    if isinstance(layer, MaxPool2x2):
        return MaxPool2x2()
    if isinstance(layer, Flatten):
        return Flatten()
    raise TypeError(f"unknown layer type {type(layer).__name__}")
