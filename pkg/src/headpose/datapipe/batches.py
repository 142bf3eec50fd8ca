"""Pose- and source-balanced batch sampling.

Training data is heavily skewed across poses and sources, so batches draw
uniformly over the occupied (class_id, source) buckets and then uniformly
with replacement inside the chosen bucket.
"""

from collections import defaultdict

import numpy as np


def bucketize(samples):
    """Group samples by (class_id, source), keys in sorted order."""
    buckets = defaultdict(list)
    for s in samples:
        buckets[(s.class_id, s.source)].append(s)
    return [buckets[k] for k in sorted(buckets)]


def balanced_batches(samples, batch_size, seed, epoch=0):
    """One epoch of balanced batches, deterministic per (seed, epoch).

    Yields ceil(len(samples) / batch_size) lists of exactly batch_size
    samples each; sampling is with replacement, uniform over buckets then
    uniform within the bucket.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if not samples:
        return
    buckets = bucketize(samples)
    sizes = np.array([len(b) for b in buckets])
    rng = np.random.default_rng(np.random.SeedSequence((seed, epoch)))
    n_batches = -(-len(samples) // batch_size)
    for _ in range(n_batches):
        which = rng.integers(0, len(buckets), size=batch_size)
        within = (rng.random(batch_size) * sizes[which]).astype(int)
        yield [buckets[b][i] for b, i in zip(which, within)]
