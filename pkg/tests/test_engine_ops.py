import numpy as np
import pytest

from headpose.engine import ops


def test_conv_center_tap_sums_window():
    x = np.ones((1, 3, 3), dtype=np.float64)
    w = np.ones((1, 1, 3, 3), dtype=np.float64)
    b = np.zeros(1)
    y = ops.conv3x3_forward(x, w, b)
    # center cell sees all nine taps, corners only four
    assert y[0, 1, 1] == 9.0
    assert y[0, 0, 0] == 4.0


def test_conv_zero_weights_zero_output():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(2, 4, 5, 6))
    y = ops.conv3x3_forward(x, np.zeros((3, 4, 3, 3)), np.zeros(3))
    assert np.all(y == 0.0)
    assert y.shape == (2, 3, 5, 6)


def test_conv_identity_tap_on_1x1():
    v, bias = 2.5, -0.75
    x = np.array([[[v]]])
    w = np.zeros((1, 1, 3, 3))
    w[0, 0, 1, 1] = 1.0
    y = ops.conv3x3_forward(x, w, np.array([bias]))
    assert y.shape == (1, 1, 1)
    assert y[0, 0, 0] == v + bias


def test_conv_matches_naive_loops():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(2, 3, 5, 4))
    w = rng.normal(size=(4, 3, 3, 3))
    b = rng.normal(size=4)
    y = ops.conv3x3_forward(x, w, b)

    xp = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    want = np.zeros((2, 4, 5, 4))
    for bi in range(2):
        for o in range(4):
            for i in range(5):
                for j in range(4):
                    acc = b[o]
                    for c in range(3):
                        for di in range(3):
                            for dj in range(3):
                                acc += xp[bi, c, i + di, j + dj] * w[o, c, di, dj]
                    want[bi, o, i, j] = acc
    np.testing.assert_allclose(y, want, rtol=0, atol=1e-12)


def test_conv_rejects_channel_mismatch():
    with pytest.raises(ValueError):
        ops.conv3x3_forward(np.zeros((2, 4, 4)), np.zeros((1, 3, 3, 3)), np.zeros(1))


def test_maxpool_basic():
    y, _ = ops.maxpool2x2_forward(np.array([[[1.0, 2.0], [3.0, 4.0]]]))
    assert y.shape == (1, 1, 1)
    assert y[0, 0, 0] == 4.0


def test_maxpool_constant_input():
    y, _ = ops.maxpool2x2_forward(np.full((2, 6, 6), 3.25))
    assert np.all(y == 3.25)


def test_maxpool_halving_chain_64_to_1():
    x = np.random.default_rng(1).normal(size=(1, 64, 64))
    sides = []
    for _ in range(6):
        x, _ = ops.maxpool2x2_forward(x)
        sides.append(x.shape[-1])
    assert sides == [32, 16, 8, 4, 2, 1]


def test_maxpool_odd_edges_shrink():
    x = np.arange(15.0).reshape(1, 3, 5)
    y, _ = ops.maxpool2x2_forward(x)
    assert y.shape == (1, 2, 3)
    # bottom-right window is the single cell (2, 4)
    assert y[0, 1, 2] == 14.0


def test_maxpool_backward_routes_to_argmax_only():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(2, 3, 6, 6))
    y, argmax = ops.maxpool2x2_forward(x)
    g = rng.normal(size=y.shape)
    gx = ops.maxpool2x2_backward(x.shape, argmax, g)
    assert gx.shape == x.shape
    # total gradient mass is conserved and lands on at most one cell per window
    np.testing.assert_allclose(gx.sum(), g.sum(), rtol=1e-12)
    nonzero_per_window = (
        gx.reshape(2, 3, 3, 2, 3, 2).transpose(0, 1, 2, 4, 3, 5).reshape(2, 3, 3, 3, 4)
        != 0
    ).sum(axis=-1)
    assert nonzero_per_window.max() <= 1


def test_maxpool_backward_ties_pick_single_cell():
    x = np.zeros((1, 1, 2, 2))  # four-way tie
    y, argmax = ops.maxpool2x2_forward(x)
    gx = ops.maxpool2x2_backward(x.shape, argmax, np.array([[[[1.0]]]]))
    assert gx.sum() == 1.0
    assert (gx != 0).sum() == 1


def test_dense_zero_weights_tanh():
    y = ops.dense_forward(np.ones(4), np.zeros((3, 4)), np.zeros(3), "tanh")
    assert np.all(y == 0.0)


def test_dense_identity_linear():
    x = np.array([1.0, -2.0, 3.0])
    y = ops.dense_forward(x, np.eye(3), np.zeros(3), "linear")
    np.testing.assert_array_equal(y, x)


def test_dense_tanh_of_one():
    y = ops.dense_forward(
        np.array([1.0, 1.0]), np.array([[0.5, 0.5]]), np.zeros(1), "tanh"
    )
    np.testing.assert_allclose(y, [np.tanh(1.0)], rtol=1e-15)
    assert abs(y[0] - 0.76159) < 1e-5


def test_tanh_outputs_bounded():
    rng = np.random.default_rng(5)
    # extreme pre-activations saturate but never exceed the bound
    x = rng.normal(size=(8, 16), scale=50)
    y = ops.dense_forward(x, rng.normal(size=(4, 16)), rng.normal(size=4), "tanh")
    assert np.all(np.abs(y) <= 1.0)
    # unit-scale pre-activations stay strictly inside (-1, 1)
    x = rng.normal(size=(8, 16))
    y = ops.dense_forward(x, rng.normal(size=(4, 16), scale=0.2), np.zeros(4), "tanh")
    assert np.all(y > -1.0) and np.all(y < 1.0)


def test_mse_loss_values():
    z = np.zeros((3, 2))
    assert ops.mse_loss(z, z) == 0.0
    assert ops.mse_loss(z + 2.0, z) == 4.0
    assert ops.mse_loss(np.array([[1.0, 0.0]]), np.array([[0.0, 0.0]])) == 0.5


def test_mse_loss_shape_mismatch():
    with pytest.raises(ValueError):
        ops.mse_loss(np.zeros((2, 2)), np.zeros((3, 2)))
