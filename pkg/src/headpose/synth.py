"""Procedural synthetic heads for desk-scale experiments.

Each image is a shaded ellipse on a dark background. The pan angle is encoded
as a left/right shading gradient that is exactly antisymmetric under
horizontal mirroring, so flipping an image corresponds to negating its pan
label; the tilt angle moves a dark feature blob (and a soft vertical shade)
up and down. Labels are exact by construction.
"""

from dataclasses import dataclass

import numpy as np

from .datapipe.samples import Sample

SIDE = 64
PAN_SPAN = 90.0  # rendered pans cover [-90, 90]
TILT_SPAN = 60.0  # rendered tilts cover [-60, 60]

_CENTER = (SIDE - 1) / 2.0  # 31.5 keeps mirroring exact
_AXIS_X = 22.0
_AXIS_Y = 27.0
_BACKGROUND = 0.20
_BASE = 0.62
_PAN_GAIN = 0.30
_TILT_GAIN = 0.18
_BLOB_DEPTH = 0.33
_BLOB_TRAVEL = 13.0
_NOISE_AMPLITUDE = 0.1


@dataclass(frozen=True)
class SyntheticSpec:
    n_samples: int
    seed: int
    noise_level: float = 0.1

    def __post_init__(self):
        if self.n_samples <= 0:
            raise ValueError("n_samples must be positive")
        if not 0.0 <= self.noise_level <= 1.0:
            raise ValueError("noise_level must be in [0, 1]")


def render_head(tilt, pan, noise_level=0.0, rng=None):
    """Draw one 64x64 head with the given pose; returns float32 in [0, 1]."""
    yy, xx = np.mgrid[0:SIDE, 0:SIDE].astype(np.float64)
    u = (xx - _CENTER) / _AXIS_X
    v = (yy - _CENTER) / _AXIS_Y
    inside = u * u + v * v <= 1.0

    img = np.full((SIDE, SIDE), _BACKGROUND)
    shade = _BASE + _PAN_GAIN * (pan / PAN_SPAN) * u - _TILT_GAIN * (tilt / TILT_SPAN) * v
    img[inside] = shade[inside]

    blob_cy = _CENTER - (tilt / TILT_SPAN) * _BLOB_TRAVEL
    blob = _BLOB_DEPTH * np.exp(
        -(((xx - _CENTER) / 4.0) ** 2 + ((yy - blob_cy) / 3.2) ** 2)
    )
    img -= blob
    if noise_level > 0.0:
        if rng is None:
            raise ValueError("noise requires an rng")
        img += noise_level * _NOISE_AMPLITUDE * rng.uniform(-1.0, 1.0, img.shape)
    return np.clip(img, 0.0, 1.0).astype(np.float32)


def generate_corpus(spec):
    """Deterministic list of labeled samples for a SyntheticSpec."""
    rng = np.random.default_rng(spec.seed)
    out = []
    for _ in range(spec.n_samples):
        tilt = float(rng.uniform(-TILT_SPAN, TILT_SPAN))
        pan = float(rng.uniform(-PAN_SPAN, PAN_SPAN))
        img = render_head(tilt, pan, spec.noise_level, rng)
        out.append(Sample.from_pose(img, tilt, pan, "synthetic"))
    return out
