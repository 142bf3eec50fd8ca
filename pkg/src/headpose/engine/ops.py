"""Forward and backward kernels for the small operator set the pose networks use.

Public ops take feature maps in (C, H, W) or batched (B, C, H, W) layout and
3x3 filter banks in (C_out, C_in, 3, 3) layout. Internally the heavy kernels
run channels-last so that each convolution is a single large matrix product;
the `_nhwc_*` entry points expose that fast path to the network container.

Conventions shared by every op:

- Convolutions are 3x3, stride 1, zero padding of 1 on each border, so spatial
  size is preserved; pooling is 2x2 max with stride 2 (odd edges shrink).
- All ops are pure functions of their arguments and never mutate inputs.
"""

import numpy as np


class NumericError(RuntimeError):
    """Raised when an activation or loss stops being finite."""


def _as_batched(x, ndim):
    """Add a leading batch axis if `x` has `ndim` dims, return (array, had_batch)."""
    if x.ndim == ndim:
        return x[None], False
    if x.ndim == ndim + 1:
        return x, True
    raise ValueError(f"expected {ndim}- or {ndim + 1}-d array, got shape {x.shape}")


def _all_finite(x):
    """Cheap full-array finiteness check (NaN propagates through min)."""
    if x.size == 0:
        return True
    return bool(np.isfinite(x.min()) and np.isfinite(x.max()))


# ---------------------------------------------------------------------------
# channels-last kernels
# ---------------------------------------------------------------------------

# Patch buffers are built per batch chunk and reused so they stay cache
# resident; this bounds their size.
_CHUNK_BYTES = 6 << 20


def _weights_to_mat(weights):
    """(C_out, C_in, 3, 3) filters to a (9*C_in, C_out) matmul operand."""
    return np.ascontiguousarray(weights.transpose(2, 3, 1, 0)).reshape(
        -1, weights.shape[0]
    )


def _mat_to_weight_grad(grad_mat, weights_shape):
    c_out, c_in = weights_shape[:2]
    return np.ascontiguousarray(
        grad_mat.reshape(3, 3, c_in, c_out).transpose(3, 2, 0, 1)
    )


def _chunk_step(b, h, w, c, itemsize):
    per_sample = h * w * 9 * c * itemsize
    return max(1, min(b, _CHUNK_BYTES // max(1, per_sample)))


def _fill_cols(cols, xp, s, e, h, w):
    """Gather 3x3 patches of padded rows s:e into cols (n, h, w, 9, c)."""
    k = 0
    for di in range(3):
        for dj in range(3):
            cols[:, :, :, k, :] = xp[s:e, di : di + h, dj : dj + w, :]
            k += 1


def _nhwc_conv_forward(x, weights, bias):
    """Convolution on (B, H, W, C_in); returns (output, padded input).

    The padded input is the backward-pass cache; patch matrices only ever
    exist chunk-by-chunk in a small reused buffer.
    """
    b, h, w, c = x.shape
    o = weights.shape[0]
    wmat = _weights_to_mat(weights)
    xp = np.pad(x, ((0, 0), (1, 1), (1, 1), (0, 0)))
    y = np.empty((b, h, w, o), dtype=x.dtype)
    step = _chunk_step(b, h, w, c, x.itemsize)
    cols = np.empty((step, h, w, 9, c), dtype=x.dtype)
    for s in range(0, b, step):
        e = min(b, s + step)
        cb = cols[: e - s]
        _fill_cols(cb, xp, s, e, h, w)
        np.matmul(
            cb.reshape((e - s) * h * w, 9 * c),
            wmat,
            out=y[s:e].reshape((e - s) * h * w, o),
        )
    y += bias
    return y, xp


def _nhwc_conv_backward(xp, weights, grad_out, need_input_grad=True):
    """Gradients for the channels-last convolution.

    Args:
        xp: zero-padded forward input, (B, H+2, W+2, C_in).
        weights: (C_out, C_in, 3, 3).
        grad_out: (B, H, W, C_out).
        need_input_grad: skip the input gradient for the first layer.

    Returns:
        (grad_x or None, grad_weights, grad_bias); grad_x may be a view.
    """
    b, h, w, o = grad_out.shape
    c = xp.shape[3]
    wmat = _weights_to_mat(weights)
    g3 = grad_out.reshape(b, h * w, o)
    grad_b = g3.sum(axis=(0, 1))
    gw_acc = np.zeros((9 * c, o), dtype=grad_out.dtype)
    gxp = np.zeros(xp.shape, dtype=grad_out.dtype) if need_input_grad else None

    step = _chunk_step(b, h, w, c, grad_out.itemsize)
    cols = np.empty((step, h, w, 9, c), dtype=grad_out.dtype)
    gw_part = np.empty((9 * c, o), dtype=grad_out.dtype)
    gcols = np.empty((step * h * w, 9 * c), dtype=grad_out.dtype)
    for s in range(0, b, step):
        e = min(b, s + step)
        n = (e - s) * h * w
        cb = cols[: e - s]
        _fill_cols(cb, xp, s, e, h, w)
        g2 = g3[s:e].reshape(n, o)
        np.matmul(cb.reshape(n, 9 * c).T, g2, out=gw_part)
        gw_acc += gw_part
        if need_input_grad:
            gc = gcols[:n]
            np.matmul(g2, wmat.T, out=gc)
            gc5 = gc.reshape(e - s, h, w, 9, c)
            k = 0
            for di in range(3):
                for dj in range(3):
                    gxp[s:e, di : di + h, dj : dj + w, :] += gc5[:, :, :, k, :]
                    k += 1
    grad_w = _mat_to_weight_grad(gw_acc, weights.shape)
    grad_x = gxp[:, 1 : h + 1, 1 : w + 1, :] if need_input_grad else None
    return grad_x, grad_w, grad_b


def _nhwc_pool_forward(x):
    """2x2/stride-2 max pool on (B, H, W, C); returns (pooled, winner index).

    The winner index is the row-major position (0..3) of the maximum inside
    each window; ties go to the lowest index. Odd right/bottom edges shrink.
    All reductions run on unit-stride reshapes of the input.
    """
    b, h, w, c = x.shape
    if h % 2 or w % 2:
        x = np.pad(
            x,
            ((0, 0), (0, h % 2), (0, w % 2), (0, 0)),
            constant_values=-np.inf,
        )
    hp, wp = x.shape[1], x.shape[2]
    h2, w2 = hp // 2, wp // 2
    r4 = x.reshape(b, hp, w2, 2 * c)
    left, right = r4[..., :c], r4[..., c:]
    col_bit = right > left  # per-row column winner, ties to the left
    m_w = np.maximum(left, right)  # (b, hp, w2, c)
    r5 = m_w.reshape(b, h2, 2, w2, c)
    top, bot = r5[:, :, 0], r5[:, :, 1]
    row_bit = bot > top  # window row winner, ties to the top
    y = np.maximum(top, bot)
    cb5 = col_bit.reshape(b, h2, 2, w2, c)
    col_win = np.where(row_bit, cb5[:, :, 1], cb5[:, :, 0])
    idx = (row_bit.view(np.uint8) << 1) | col_win.view(np.uint8)
    return y, idx


def _nhwc_pool_backward(x_shape, idx, grad_out):
    """Route pooled gradients back to each window's winning cell."""
    b, h, w, c = x_shape
    hp, wp = h + h % 2, w + w % 2
    h2, w2 = hp // 2, wp // 2
    row_bit = (idx >> 1).astype(bool)
    col_win = (idx & 1).astype(bool)
    rows = np.zeros((b, h2, 2, w2, c), dtype=grad_out.dtype)
    np.copyto(rows[:, :, 1], grad_out, where=row_bit)
    np.copyto(rows[:, :, 0], grad_out, where=~row_bit)
    cexp = np.empty((b, h2, 2, w2, c), dtype=bool)
    cexp[:, :, 0] = col_win
    cexp[:, :, 1] = col_win
    rows4 = rows.reshape(b, hp, w2, c)
    cexp4 = cexp.reshape(b, hp, w2, c)
    g = np.zeros((b, hp, w2, 2 * c), dtype=grad_out.dtype)
    np.copyto(g[..., c:], rows4, where=cexp4)
    np.copyto(g[..., :c], rows4, where=~cexp4)
    g = g.reshape(b, hp, wp, c)
    if hp != h or wp != w:
        g = np.ascontiguousarray(g[:, :h, :w, :])
    return g


# ---------------------------------------------------------------------------
# public channels-first ops
# ---------------------------------------------------------------------------


def conv3x3_forward(x, weights, bias):
    """Same-padding 3x3 convolution plus per-channel bias.

    Args:
        x: input of shape (C_in, H, W) or (B, C_in, H, W).
        weights: filter bank of shape (C_out, C_in, 3, 3).
        bias: per-output-channel bias of shape (C_out,).

    Returns:
        Output with the same spatial size, (C_out, H, W) or (B, C_out, H, W).
    """
    x, batched = _as_batched(x, 3)
    if weights.ndim != 4 or weights.shape[2:] != (3, 3):
        raise ValueError(f"conv weights must be (C_out, C_in, 3, 3), got {weights.shape}")
    if weights.shape[1] != x.shape[1]:
        raise ValueError(
            f"conv expects {weights.shape[1]} input channels, got {x.shape[1]}"
        )
    if bias.shape != (weights.shape[0],):
        raise ValueError(f"conv bias must be ({weights.shape[0]},), got {bias.shape}")
    y, _ = _nhwc_conv_forward(_to_nhwc(x), weights, bias)
    y = _to_nchw(y)
    return y if batched else y[0]


def conv3x3_backward(x, weights, grad_out):
    """Gradients of a same-padding 3x3 convolution.

    Args:
        x: the forward input, (B, C_in, H, W).
        weights: the filter bank used forward, (C_out, C_in, 3, 3).
        grad_out: gradient w.r.t. the conv output, (B, C_out, H, W).

    Returns:
        (grad_x, grad_weights, grad_bias).
    """
    xp = np.pad(_to_nhwc(x), ((0, 0), (1, 1), (1, 1), (0, 0)))
    grad_x, grad_w, grad_b = _nhwc_conv_backward(xp, weights, _to_nhwc(grad_out))
    return _to_nchw(grad_x), grad_w, grad_b


def maxpool2x2_forward(x):
    """2x2 max pooling with stride 2; right/bottom windows of odd dims shrink.

    Returns (pooled, argmax) where argmax holds the within-window winner index
    (0..3, row-major) needed to route gradients back.
    """
    x, batched = _as_batched(x, 3)
    y, idx = _nhwc_pool_forward(_to_nhwc(x))
    y, idx = _to_nchw(y), _to_nchw(idx)
    if not batched:
        y, idx = y[0], idx[0]
    return y, idx


def maxpool2x2_backward(x_shape, argmax, grad_out):
    """Route pooled gradients to the argmax cell of each 2x2 window."""
    b, c, h, w = x_shape
    g = _nhwc_pool_backward((b, h, w, c), _to_nhwc(argmax), _to_nhwc(grad_out))
    return _to_nchw(g)


def _to_nhwc(x):
    return np.ascontiguousarray(x.transpose(0, 2, 3, 1))


def _to_nchw(x):
    return np.ascontiguousarray(x.transpose(0, 3, 1, 2))


def dense_forward(x, weights, bias, activation="linear"):
    """Fully connected layer: act(W @ x + b).

    Args:
        x: (in_units,) or (B, in_units).
        weights: (out_units, in_units).
        bias: (out_units,).
        activation: "tanh" or "linear".
    """
    x, batched = _as_batched(x, 1)
    if weights.shape[1] != x.shape[1]:
        raise ValueError(
            f"dense expects {weights.shape[1]} input units, got {x.shape[1]}"
        )
    if bias.shape != (weights.shape[0],):
        raise ValueError(f"dense bias must be ({weights.shape[0]},), got {bias.shape}")
    y = x @ weights.T + bias
    if activation == "tanh":
        np.tanh(y, out=y)
    elif activation != "linear":
        raise ValueError(f"unknown activation {activation!r}")
    return y if batched else y[0]


def dense_backward(x, weights, grad_out):
    """Gradients of y = W @ x + b (activation handled by the caller)."""
    grad_x = grad_out @ weights
    grad_w = grad_out.T @ x
    grad_b = grad_out.sum(axis=0)
    return grad_x, grad_w, grad_b


def tanh_backward(activated, grad_out):
    """Chain grad_out through tanh given the tanh *output*."""
    g = np.multiply(activated, activated)
    np.subtract(1.0, g, out=g)
    g *= grad_out
    return g


def mse_loss(pred, target):
    """Mean over all entries of the squared difference."""
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    d = pred - target
    return float(np.mean(d * d))


def mse_loss_grad(pred, target):
    """Gradient of mse_loss w.r.t. pred."""
    return (2.0 / pred.size) * (pred - target)
