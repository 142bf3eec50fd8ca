import numpy as np
import pytest

from headpose import arch
from headpose.arch import ArchitectureSpec, DEFAULT_ARCH
from headpose.engine import Conv3x3Tanh, Dense


def test_filter_schedules():
    assert arch.filter_schedule("A", 3, 32) == [32, 32, 32]
    assert arch.filter_schedule("B", 3, 32) == [32, 64, 96]
    assert arch.filter_schedule("C", 3, 32) == [32, 64, 128]


def test_family_ordering_from_second_block():
    for n in range(2, 7):
        a = arch.filter_schedule("A", n, 32)
        b = arch.filter_schedule("B", n, 32)
        c = arch.filter_schedule("C", n, 32)
        for k in range(1, n):
            assert c[k] >= b[k] >= a[k]
            assert c[k] > a[k]


def test_default_arch_structure():
    net = arch.build_network(DEFAULT_ARCH, seed=0)
    convs = [l for l in net.layers if isinstance(l, Conv3x3Tanh)]
    denses = [l for l in net.layers if isinstance(l, Dense)]
    assert [c.weights.shape[0] for c in convs] == [32, 64, 128, 256, 512, 1024]
    assert denses[0].weights.shape == (512, 1024)  # 1024 channels at 1x1
    assert denses[-1].weights.shape == (2, 512)
    assert denses[-1].activation == "linear"


def test_smallest_depth_structure():
    spec = ArchitectureSpec("A", 1, 32, 1, 64)
    net = arch.build_network(spec, seed=3)
    denses = [l for l in net.layers if isinstance(l, Dense)]
    assert denses[0].weights.shape == (64, 32 * 32 * 32)
    assert denses[-1].weights.shape == (2, 64)


def test_build_deterministic_per_seed():
    spec = ArchitectureSpec("B", 2, 32, 2, 64)
    n1 = arch.build_network(spec, seed=42)
    n2 = arch.build_network(spec, seed=42)
    for a, b in zip(n1.params(), n2.params()):
        np.testing.assert_array_equal(a, b)
    n3 = arch.build_network(spec, seed=43)
    assert any(
        not np.array_equal(a, b) for a, b in zip(n1.params(), n3.params())
    )


def test_forward_shape_chains_to_two_outputs():
    rng = np.random.default_rng(0)
    for spec in [
        ArchitectureSpec("A", 1, 32, 1, 64),
        ArchitectureSpec("B", 3, 32, 2, 128),
        ArchitectureSpec("C", 6, 32, 1, 64),
    ]:
        net = arch.build_network(spec, seed=1)
        out = net.forward(rng.random((2, 1, 64, 64), dtype=np.float32))
        assert out.shape == (2, 2)


def test_default_arch_param_count():
    assert arch.count_params(DEFAULT_ARCH) == 6_813_442


def test_degenerate_param_count_hand_tally():
    # one block of one filter, one hidden unit: conv 9+1, flatten 32*32,
    # hidden 1024+1, output 2+2
    spec = ArchitectureSpec("A", 1, 1, 1, 1)
    assert arch.count_params(spec) == (9 + 1) + (1024 + 1) + (2 + 2)


def enumerate_built_params(spec):
    net = arch.build_network(spec, seed=0)
    return sum(p.size for p in net.params())


@pytest.mark.parametrize(
    "spec",
    [
        ArchitectureSpec("A", 1, 32, 1, 64),
        ArchitectureSpec("A", 4, 64, 3, 512),
        ArchitectureSpec("B", 6, 64, 2, 512),
        ArchitectureSpec("B", 2, 128, 1, 128),
        ArchitectureSpec("C", 6, 32, 1, 512),
        ArchitectureSpec("C", 3, 64, 3, 256),
    ],
)
def test_count_params_matches_enumeration(spec):
    assert arch.count_params(spec) == enumerate_built_params(spec)


def test_flops_within_band_of_published_costs():
    published = [
        (ArchitectureSpec("C", 6, 32, 1, 512), 206e6),
        (ArchitectureSpec("B", 6, 64, 2, 512), 366e6),
        (ArchitectureSpec("A", 6, 128, 3, 512), 417e6),
        (ArchitectureSpec("A", 6, 256, 2, 256), 1637e6),
    ]
    for spec, want in published:
        got = arch.estimate_flops(spec)
        assert abs(got - want) / want < 0.10, (spec, got, want)


def test_costs_strictly_increase_in_widths():
    base = dict(family="B", n_conv_blocks=3, n_dense_hidden=2)
    for metric in (arch.count_params, arch.estimate_flops):
        prev = None
        for f1 in arch.FIRST_FILTER_CHOICES:
            cur = metric(ArchitectureSpec(first_filters=f1, dense_size=128, **base))
            assert prev is None or cur > prev
            prev = cur
        prev = None
        for ds in arch.DENSE_SIZE_CHOICES:
            cur = metric(ArchitectureSpec(first_filters=64, dense_size=ds, **base))
            assert prev is None or cur > prev
            prev = cur


def test_grid_sizes():
    assert len(arch.arch_grid(families=("C",))) == 288
    assert len(arch.arch_grid()) == 3 * 288
    assert len(arch.desk_arch_grid()) == 8


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        ArchitectureSpec("D", 1, 32, 1, 64)
    with pytest.raises(ValueError):
        ArchitectureSpec("A", 0, 32, 1, 64)
    with pytest.raises(ValueError):
        ArchitectureSpec("A", 7, 32, 1, 64)
    with pytest.raises(ValueError):
        ArchitectureSpec("A", 2, 32, 4, 64)
    with pytest.raises(ValueError):
        ArchitectureSpec("A", 2, 0, 1, 64)
