"""Class-stratified train/validation/test partitioning."""

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Partitions:
    train: list
    val: list
    test: list = field(default_factory=list)


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def stratified_split(samples, test_frac=0.2, val_frac_of_rest=0.2, seed=0):
    """Split any records carrying a `class_id` into disjoint partitions.

    Per class (in ascending class order, one seeded shuffle stream): the test
    share is drawn first, then the validation share out of the remainder, and
    the rest trains. Shares round half-up, so per-class test counts never
    deviate from test_frac * n by a full sample.
    """
    if not 0.0 < test_frac < 1.0 or not 0.0 < val_frac_of_rest < 1.0:
        raise ValueError("fractions must lie in (0, 1)")
    by_class = defaultdict(list)
    for s in samples:
        by_class[s.class_id].append(s)
    rng = np.random.default_rng(seed)
    train, val, test = [], [], []
    for class_id in sorted(by_class):
        group = by_class[class_id]
        order = rng.permutation(len(group))
        n_test = _round_half_up(test_frac * len(group))
        n_val = _round_half_up(val_frac_of_rest * (len(group) - n_test))
        for rank, idx in enumerate(order):
            if rank < n_test:
                test.append(group[idx])
            elif rank < n_test + n_val:
                val.append(group[idx])
            else:
                train.append(group[idx])
    return Partitions(train, val, test)
