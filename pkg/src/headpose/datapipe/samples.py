"""Training samples: a 64x64 grayscale head plus its pose labels."""

from dataclasses import dataclass

import numpy as np

SOURCES = ("p04", "aflw", "synthetic")
_SOURCE_ALIASES = {"pointing04": "p04"}

TILT_RANGE = (-90.0, 90.0)
PAN_RANGE = (-100.0, 100.0)
N_BINS_PER_ANGLE = 8
N_CLASSES = N_BINS_PER_ANGLE * N_BINS_PER_ANGLE


def normalize_source(source):
    source = _SOURCE_ALIASES.get(source, source)
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}, expected one of {SOURCES}")
    return source


def discretize_pose(tilt, pan):
    """Map a pose to one of 64 classes on an 8x8 equal-width grid.

    Tilt bins cover [-90, 90], pan bins [-100, 100]; out-of-range values are
    clamped first and the top edge of each range belongs to the last bin.
    """
    tilt_bin = _bin(tilt, *TILT_RANGE)
    pan_bin = _bin(pan, *PAN_RANGE)
    return tilt_bin * N_BINS_PER_ANGLE + pan_bin


def _bin(value, lo, hi):
    value = min(max(value, lo), hi)
    width = (hi - lo) / N_BINS_PER_ANGLE
    return min(int((value - lo) // width), N_BINS_PER_ANGLE - 1)


@dataclass
class Sample:
    """One training example; class_id always equals discretize_pose(tilt, pan)."""

    image: np.ndarray  # (64, 64) float32 in [0, 1]
    tilt: float
    pan: float
    source: str
    class_id: int

    @classmethod
    def from_pose(cls, image, tilt, pan, source):
        return cls(image, tilt, pan, normalize_source(source), discretize_pose(tilt, pan))


def hflip_sample(sample):
    """Mirror the image left-right; pan flips sign, tilt is unchanged."""
    return Sample.from_pose(
        np.ascontiguousarray(sample.image[:, ::-1]),
        sample.tilt,
        -sample.pan,
        sample.source,
    )
