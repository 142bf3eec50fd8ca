"""Training-time image perturbations: shift, brightness, zoom.

Applied per batch draw to training images only; labels never change. With an
identity config the whole pipeline is a bit-exact no-op. Pixels vacated by a
shift or an outward zoom are filled by replicating the nearest edge value so
no artificial borders enter the training data.
"""

from dataclasses import dataclass

import numpy as np

from .datapipe.imageops import resize

SIDE = 64
SHIFT_CHOICES = (0.0, 0.1, 0.2, 0.3)
BRIGHTNESS_CHOICES = ((1.0, 1.0), (0.75, 1.25), (0.5, 1.5))
ZOOM_CHOICES = ((1.0, 1.0), (0.75, 1.25), (0.5, 1.5))


@dataclass(frozen=True)
class AugmentConfig:
    """Perturbation ranges; shift is a fraction of the image side per axis."""

    shift_range: float = 0.0
    brightness_min: float = 1.0
    brightness_max: float = 1.0
    zoom_min: float = 1.0
    zoom_max: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.shift_range < 1.0:
            raise ValueError("shift_range must be in [0, 1)")
        if not 0.0 < self.brightness_min <= self.brightness_max:
            raise ValueError("need 0 < brightness_min <= brightness_max")
        if not 0.0 < self.zoom_min <= self.zoom_max:
            raise ValueError("need 0 < zoom_min <= zoom_max")

    @property
    def is_identity(self):
        return (
            self.shift_range == 0.0
            and self.brightness_min == self.brightness_max == 1.0
            and self.zoom_min == self.zoom_max == 1.0
        )


IDENTITY = AugmentConfig()


@dataclass(frozen=True)
class AugmentDraw:
    dx: int
    dy: int
    brightness: float
    zoom: float


def apply_shift(img, dx, dy):
    """Translate content by (dx, dy) pixels, replicating edges into the gap."""
    h, w = img.shape
    if not (-w < dx < w and -h < dy < h):
        raise ValueError(f"shift ({dx}, {dy}) out of range for {w}x{h}")
    if dx == 0 and dy == 0:
        return img
    src_x = np.clip(np.arange(w) - dx, 0, w - 1)
    src_y = np.clip(np.arange(h) - dy, 0, h - 1)
    return img[np.ix_(src_y, src_x)]


def apply_brightness(img, factor):
    """Scale intensities by `factor` and clamp to [0, 1]."""
    if factor <= 0:
        raise ValueError("brightness factor must be positive")
    if factor == 1.0:
        return img
    return np.clip(img * factor, 0.0, 1.0)


def apply_zoom(img, factor):
    """Rescale by `factor` keeping the 64x64 frame.

    Enlarged images are center-cropped; shrunken ones are centered and padded
    with edge values.
    """
    if factor <= 0:
        raise ValueError("zoom factor must be positive")
    h, w = img.shape
    new = int(np.floor(h * factor + 0.5))
    if new == h:
        return img
    scaled = resize(img, new, new, "bilinear")
    if new > h:
        start = (new - h) // 2
        return np.ascontiguousarray(scaled[start : start + h, start : start + w])
    before = (h - new) // 2
    after = h - new - before
    return np.pad(scaled, ((before, after), (before, after)), mode="edge")


def sample_augmentation(cfg, rng):
    """Draw concrete perturbation parameters from the config's ranges."""
    max_px = int(cfg.shift_range * SIDE)
    dx = int(rng.integers(-max_px, max_px + 1)) if max_px else 0
    dy = int(rng.integers(-max_px, max_px + 1)) if max_px else 0
    brightness = (
        1.0
        if cfg.brightness_min == cfg.brightness_max == 1.0
        else float(rng.uniform(cfg.brightness_min, cfg.brightness_max))
    )
    zoom = (
        1.0
        if cfg.zoom_min == cfg.zoom_max == 1.0
        else float(rng.uniform(cfg.zoom_min, cfg.zoom_max))
    )
    return AugmentDraw(dx, dy, brightness, zoom)


def apply_augmentation(img, draw):
    """Shift, then zoom, then brightness; identity draws touch nothing."""
    img = apply_shift(img, draw.dx, draw.dy)
    img = apply_zoom(img, draw.zoom)
    return apply_brightness(img, draw.brightness)


def augment_grid():
    """Every (shift, brightness, zoom) range combination of the search."""
    out = []
    for shift in SHIFT_CHOICES:
        for bmin, bmax in BRIGHTNESS_CHOICES:
            for zmin, zmax in ZOOM_CHOICES:
                out.append(AugmentConfig(shift, bmin, bmax, zmin, zmax))
    return out
