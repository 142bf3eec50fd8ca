"""Parameterized network families and their analytic parameter/flop costs.

Three families differ only in how the filter count evolves across the
convolutional blocks (a 3x3 conv + tanh followed by a 2x2 max pool):

- A: constant, f1 in every block;
- B: arithmetic, f1 * (k+1) in block k (0-based);
- C: geometric, f1 * 2**k in block k.

Every network ends in `n_dense_hidden` tanh dense layers of `dense_size`
units and a linear two-unit output, and consumes 1x64x64 grayscale input.
"""

from dataclasses import dataclass

import numpy as np

from .engine import Conv3x3Tanh, Dense, Flatten, MaxPool2x2, Network

FAMILIES = ("A", "B", "C")
INPUT_SIDE = 64
OUTPUT_UNITS = 2

# Search-grid choices for the two size-like fields.
FIRST_FILTER_CHOICES = (32, 64, 128, 256)
DENSE_SIZE_CHOICES = (64, 128, 256, 512)
MAX_CONV_BLOCKS = 6
MAX_DENSE_HIDDEN = 3


@dataclass(frozen=True)
class ArchitectureSpec:
    """Complete description of one network; determines params and flops."""

    family: str
    n_conv_blocks: int
    first_filters: int
    n_dense_hidden: int
    dense_size: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not 1 <= self.n_conv_blocks <= MAX_CONV_BLOCKS:
            raise ValueError(f"n_conv_blocks must be 1..{MAX_CONV_BLOCKS}")
        if not 1 <= self.n_dense_hidden <= MAX_DENSE_HIDDEN:
            raise ValueError(f"n_dense_hidden must be 1..{MAX_DENSE_HIDDEN}")
        if self.first_filters < 1 or self.dense_size < 1:
            raise ValueError("first_filters and dense_size must be positive")
        if INPUT_SIDE >> self.n_conv_blocks < 1:
            raise ValueError("pooling chain would shrink below 1x1")

    def in_search_grid(self):
        """True when every field lies on the search grid."""
        return (
            self.first_filters in FIRST_FILTER_CHOICES
            and self.dense_size in DENSE_SIZE_CHOICES
        )


# The configuration selected at the end of the two search phases: family C,
# six blocks starting at 32 filters, one hidden dense layer of 512 units.
DEFAULT_ARCH = ArchitectureSpec("C", 6, 32, 1, 512)


@dataclass(frozen=True)
class CostReport:
    trainable_params: int
    flops_forward: int


def filter_schedule(family, n_blocks, first_filters):
    """Per-block output filter counts for a family."""
    if n_blocks < 1 or first_filters < 1:
        raise ValueError("n_blocks and first_filters must be >= 1")
    if family == "A":
        return [first_filters] * n_blocks
    if family == "B":
        return [first_filters * (k + 1) for k in range(n_blocks)]
    if family == "C":
        return [first_filters * 2**k for k in range(n_blocks)]
    raise ValueError(f"unknown family {family!r}")


def _layer_dims(spec):
    """(conv (c_in, c_out) pairs, dense (in, out) pairs) for a spec."""
    filters = filter_schedule(spec.family, spec.n_conv_blocks, spec.first_filters)
    convs = list(zip([1] + filters[:-1], filters))
    side = INPUT_SIDE >> spec.n_conv_blocks
    flat = filters[-1] * side * side
    widths = [flat] + [spec.dense_size] * spec.n_dense_hidden + [OUTPUT_UNITS]
    denses = list(zip(widths[:-1], widths[1:]))
    return convs, denses


def build_network(spec, seed, dtype=np.float32, init="uniform"):
    """Construct and initialize the network a spec describes.

    With init="uniform" (the default) weights draw from a fan-based range
    +-sqrt(6 / (fan_in + fan_out)) and biases start at zero; the draw is
    bit-reproducible per (spec, seed, dtype). init="zeros" skips the random
    fill, for callers that overwrite every parameter (e.g. weight loading)
    or only inspect structure.
    """
    if init not in ("uniform", "zeros"):
        raise ValueError(f"unknown init {init!r}")
    convs, denses = _layer_dims(spec)
    rng = np.random.default_rng(seed)
    fill = _uniform_init if init == "uniform" else _zero_init
    layers = []
    for c_in, c_out in convs:
        w = fill(rng, (c_out, c_in, 3, 3), 9 * c_in, 9 * c_out, dtype)
        layers.append(Conv3x3Tanh(w, np.zeros(c_out, dtype=dtype)))
        layers.append(MaxPool2x2())
    layers.append(Flatten())
    for i, (n_in, n_out) in enumerate(denses):
        w = fill(rng, (n_out, n_in), n_in, n_out, dtype)
        act = "linear" if i == len(denses) - 1 else "tanh"
        layers.append(Dense(w, np.zeros(n_out, dtype=dtype), act))
    return Network(layers)


def _uniform_init(rng, shape, fan_in, fan_out, dtype):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    w = np.empty(shape, dtype=dtype)
    rng.random(out=w.reshape(-1), dtype=dtype)
    w *= 2 * limit
    w -= limit
    return w


def _zero_init(rng, shape, fan_in, fan_out, dtype):
    return np.zeros(shape, dtype=dtype)


def count_params(spec):
    """Exact number of trainable scalars (weights + biases)."""
    convs, denses = _layer_dims(spec)
    total = sum(9 * c_in * c_out + c_out for c_in, c_out in convs)
    total += sum(n_in * n_out + n_out for n_in, n_out in denses)
    return total


def estimate_flops(spec):
    """Floating point operations for one forward pass on a 1x64x64 input.

    Counting convention (multiplies and adds counted separately):
    - conv: 2 * 9 * C_in * C_out * H * W, plus C_out * H * W bias adds;
    - activation: one op per element;
    - pool: three comparisons per output cell;
    - dense: 2 * in * out plus out bias adds.
    """
    convs, denses = _layer_dims(spec)
    side = INPUT_SIDE
    total = 0
    for c_in, c_out in convs:
        cells = side * side
        total += 2 * 9 * c_in * c_out * cells  # multiply-accumulate
        total += c_out * cells  # bias
        total += c_out * cells  # tanh
        side //= 2
        total += 3 * c_out * side * side  # pool comparisons
    for i, (n_in, n_out) in enumerate(denses):
        total += 2 * n_in * n_out + n_out
        if i < len(denses) - 1:
            total += n_out  # hidden tanh
    return total


def cost_report(spec):
    return CostReport(count_params(spec), estimate_flops(spec))


def arch_grid(families=FAMILIES):
    """All grid specs in canonical order.

    Order: family, then blocks 1..6, first_filters (32..256), dense layers
    1..3, dense size (64..512) -- 288 specs per family.
    """
    specs = []
    for family in families:
        for blocks in range(1, MAX_CONV_BLOCKS + 1):
            for f1 in FIRST_FILTER_CHOICES:
                for n_dense in range(1, MAX_DENSE_HIDDEN + 1):
                    for dense_size in DENSE_SIZE_CHOICES:
                        specs.append(
                            ArchitectureSpec(family, blocks, f1, n_dense, dense_size)
                        )
    return specs


def desk_arch_grid():
    """Small 8-spec subgrid for desk-scale runs and CI."""
    return [
        ArchitectureSpec(family, blocks, 32, 1, dense_size)
        for family in ("A", "C")
        for blocks in (1, 2)
        for dense_size in (64, 128)
    ]
