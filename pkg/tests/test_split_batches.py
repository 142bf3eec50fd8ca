from collections import Counter
from dataclasses import dataclass

import numpy as np

from headpose.datapipe import balanced_batches, stratified_split


@dataclass(frozen=True)
class Stub:
    class_id: int
    source: str = "synthetic"
    uid: int = 0


def make_uniform(n_total, n_classes=64):
    base, extra = divmod(n_total, n_classes)
    out = []
    uid = 0
    for c in range(n_classes):
        for _ in range(base + (1 if c < extra else 0)):
            out.append(Stub(c, uid=uid))
            uid += 1
    return out


def test_split_published_partition_sizes():
    samples = make_uniform(89_520)
    parts = stratified_split(samples, seed=7)
    assert abs(len(parts.train) - 57_292) <= 64
    assert abs(len(parts.val) - 14_324) <= 64
    assert abs(len(parts.test) - 17_904) <= 64
    assert len(parts.train) + len(parts.val) + len(parts.test) == 89_520


def test_split_single_class_of_ten():
    samples = [Stub(3, uid=i) for i in range(10)]
    parts = stratified_split(samples, seed=0)
    assert (len(parts.train), len(parts.val), len(parts.test)) == (6, 2, 2)


def test_split_deterministic_and_disjoint():
    samples = make_uniform(1000, n_classes=10)
    a = stratified_split(samples, seed=5)
    b = stratified_split(samples, seed=5)
    assert a.train == b.train and a.val == b.val and a.test == b.test
    union = {s.uid for s in a.train} | {s.uid for s in a.val} | {s.uid for s in a.test}
    assert len(union) == 1000
    c = stratified_split(samples, seed=6)
    assert c.train != a.train


def test_split_per_class_test_counts():
    samples = make_uniform(
        640 + 37, n_classes=64
    )  # ragged class sizes
    parts = stratified_split(samples, test_frac=0.2, seed=1)
    class_sizes = Counter(s.class_id for s in samples)
    test_sizes = Counter(s.class_id for s in parts.test)
    for c, n in class_sizes.items():
        assert abs(test_sizes[c] - 0.2 * n) < 1.0


def test_balanced_batches_shapes_and_determinism():
    samples = [Stub(c % 4, "aflw" if c % 2 else "p04", uid=c) for c in range(103)]
    b1 = list(balanced_batches(samples, 16, seed=3, epoch=2))
    b2 = list(balanced_batches(samples, 16, seed=3, epoch=2))
    assert len(b1) == 7  # ceil(103 / 16)
    assert all(len(b) == 16 for b in b1)
    assert b1 == b2
    b3 = list(balanced_batches(samples, 16, seed=3, epoch=3))
    assert b1 != b3


def test_balanced_batches_single_bucket():
    samples = [Stub(0, uid=i) for i in range(10)]
    (batch,) = list(balanced_batches(samples, 10, seed=0))
    assert all(s.class_id == 0 for s in batch)


def test_balanced_batches_bucket_uniformity():
    # two buckets with very different sizes must be drawn equally often
    samples = [Stub(0, uid=i) for i in range(1000)] + [
        Stub(1, uid=1000 + i) for i in range(10)
    ]
    counts = Counter()
    n_epochs = 100
    for epoch in range(n_epochs):
        for batch in balanced_batches(samples, 101, seed=11, epoch=epoch):
            counts.update(s.class_id for s in batch)
    total = sum(counts.values())
    assert abs(counts[0] / total - 0.5) < 0.05
    assert abs(counts[1] / total - 0.5) < 0.05
