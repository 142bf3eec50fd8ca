"""Grayscale conversion, resizing, and crop extraction.

Images are float arrays with intensities in [0, 1]; (H, W) for grayscale,
(H, W, 3) for color. Both resize methods are implemented as sparse per-axis
weight matrices so out = rows @ img @ cols.T, which keeps them exact and easy
to reason about:

- bilinear: half-pixel-center sampling, two taps per output position;
- pixel_area: box overlap weights (each output pixel is the exact area
  average of the source region it covers).
"""

import numpy as np

LUMA_WEIGHTS = (0.299, 0.587, 0.114)
CROP_SIDE = 64


def to_grayscale(img):
    """Luminance conversion; single-channel input passes through."""
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] >= 3:
        r, g, b = LUMA_WEIGHTS
        return r * img[:, :, 0] + g * img[:, :, 1] + b * img[:, :, 2]
    raise ValueError(f"expected (H, W) or (H, W, 3+) image, got {img.shape}")


def _bilinear_axis_weights(n_src, n_dst, dtype):
    w = np.zeros((n_dst, n_src), dtype=dtype)
    scale = n_src / n_dst
    pos = (np.arange(n_dst) + 0.5) * scale - 0.5
    pos = np.clip(pos, 0.0, n_src - 1.0)
    lo = np.floor(pos).astype(int)
    hi = np.minimum(lo + 1, n_src - 1)
    frac = pos - lo
    w[np.arange(n_dst), lo] += 1.0 - frac
    w[np.arange(n_dst), hi] += frac
    return w


def _area_axis_weights(n_src, n_dst, dtype):
    w = np.zeros((n_dst, n_src), dtype=dtype)
    scale = n_src / n_dst
    for i in range(n_dst):
        start = i * scale
        stop = (i + 1) * scale
        j0 = int(np.floor(start))
        j1 = min(int(np.ceil(stop)), n_src)
        for j in range(j0, j1):
            w[i, j] = min(stop, j + 1) - max(start, j)
        w[i] /= scale
    return w


def resize(img, out_h, out_w, method="bilinear"):
    """Resize a 2-d image; same-size calls return an untouched copy."""
    if img.ndim != 2:
        raise ValueError(f"resize expects a 2-d image, got {img.shape}")
    h, w = img.shape
    if (h, w) == (out_h, out_w):
        return img.copy()
    if method == "bilinear":
        rows = _bilinear_axis_weights(h, out_h, img.dtype)
        cols = _bilinear_axis_weights(w, out_w, img.dtype)
    elif method == "pixel_area":
        rows = _area_axis_weights(h, out_h, img.dtype)
        cols = _area_axis_weights(w, out_w, img.dtype)
    else:
        raise ValueError(f"unknown resize method {method!r}")
    return rows @ img @ cols.T


def extract_crop(image, bbox, resize_method="bilinear", side=CROP_SIDE):
    """Cut a bounding box out of an image as a side x side grayscale crop.

    The box must lie fully inside the image. Color inputs are converted to
    grayscale before resizing.
    """
    h = image.shape[0]
    w = image.shape[1]
    if bbox.x < 0 or bbox.y < 0 or bbox.x + bbox.w > w or bbox.y + bbox.h > h:
        raise ValueError(f"bbox {bbox} falls outside a {w}x{h} image")
    crop = image[bbox.y : bbox.y + bbox.h, bbox.x : bbox.x + bbox.w]
    gray = to_grayscale(np.asarray(crop, dtype=np.float64) if crop.ndim == 3 else crop)
    return resize(np.asarray(gray, dtype=np.float32), side, side, resize_method)
