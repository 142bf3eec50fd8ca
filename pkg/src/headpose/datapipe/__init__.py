"""Dataset preparation: geometry, cropping, labels, splits, balanced batches."""

from .batches import balanced_batches, bucketize
from .geometry import (
    Annotation,
    BoundingBox,
    Detection,
    DetectionStats,
    detection_ratios,
    filter_by_confidence,
    iou,
    match_detections,
    shift_into_bounds,
    squarify,
)
from .imageops import extract_crop, resize, to_grayscale
from .samples import Sample, discretize_pose, hflip_sample
from .split import Partitions, stratified_split

__all__ = [
    "Annotation",
    "BoundingBox",
    "Detection",
    "DetectionStats",
    "Partitions",
    "Sample",
    "balanced_batches",
    "bucketize",
    "detection_ratios",
    "discretize_pose",
    "extract_crop",
    "filter_by_confidence",
    "hflip_sample",
    "iou",
    "match_detections",
    "resize",
    "shift_into_bounds",
    "squarify",
    "stratified_split",
    "to_grayscale",
]
