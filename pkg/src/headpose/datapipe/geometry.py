"""Bounding-box records and the geometry used to turn detections into crops."""

from dataclasses import dataclass


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box; (x, y) is the top-left corner."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box extents must be positive, got {self.w}x{self.h}")

    @property
    def area(self):
        return self.w * self.h


@dataclass(frozen=True)
class Detection:
    bbox: BoundingBox
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class Annotation:
    bbox: BoundingBox
    tilt: float
    pan: float

    def __post_init__(self):
        if not -90.0 <= self.tilt <= 90.0:
            raise ValueError(f"tilt must be in [-90, 90], got {self.tilt}")
        if not -100.0 <= self.pan <= 100.0:
            raise ValueError(f"pan must be in [-100, 100], got {self.pan}")


@dataclass
class DetectionStats:
    """Dataset-level detector quality summary.

    t_ratio: detected-head coverage (true detections over annotated heads);
    f_ratio: false positives over all detections;
    n_valid_crops: detections that survived cropping.
    """

    t_ratio: float
    f_ratio: float
    n_valid_crops: int = 0


def filter_by_confidence(detections, threshold):
    """Keep detections with confidence >= threshold, preserving order."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    return [d for d in detections if d.confidence >= threshold]


def iou(a, b):
    """Intersection over union of two boxes, in [0, 1]."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def squarify(bbox):
    """Shrink a box to the centered square whose side is the shorter extent."""
    side = min(bbox.w, bbox.h)
    if bbox.w > bbox.h:
        return BoundingBox(bbox.x + (bbox.w - side) // 2, bbox.y, side, side)
    if bbox.h > bbox.w:
        return BoundingBox(bbox.x, bbox.y + (bbox.h - side) // 2, side, side)
    return bbox


def shift_into_bounds(bbox, img_w, img_h):
    """Translate a square box the minimal amount to fit the image.

    Returns the shifted box, or None when the side exceeds the image and the
    detection must be discarded.
    """
    if bbox.w > img_w or bbox.h > img_h:
        return None
    x = min(max(bbox.x, 0), img_w - bbox.w)
    y = min(max(bbox.y, 0), img_h - bbox.h)
    if x == bbox.x and y == bbox.y:
        return bbox
    return BoundingBox(x, y, bbox.w, bbox.h)


def match_detections(ground_truths, detections, min_iou=0.0):
    """Pair annotated boxes with detections by best overlap.

    Pairs greedily in descending IoU order so each detection and each ground
    truth is used at most once; pairs below `min_iou` are never formed.
    Returns (gt_index, det_index) tuples sorted by gt_index.
    """
    if not 0.0 <= min_iou <= 1.0:
        raise ValueError(f"min_iou must be in [0, 1], got {min_iou}")
    candidates = []
    for gi, gt in enumerate(ground_truths):
        for di, det in enumerate(detections):
            v = iou(gt.bbox if isinstance(gt, Annotation) else gt,
                    det.bbox if isinstance(det, Detection) else det)
            if v >= min_iou:
                candidates.append((-v, gi, di))
    candidates.sort()
    used_gt, used_det = set(), set()
    pairs = []
    for _, gi, di in candidates:
        if gi in used_gt or di in used_det:
            continue
        used_gt.add(gi)
        used_det.add(di)
        pairs.append((gi, di))
    pairs.sort()
    return pairs


def detection_ratios(per_image, n_valid_crops=0):
    """Aggregate per-image (n_detected, n_annotated) counts into ratios.

    The true-detection count per image is capped by its annotation count;
    the surplus counts as false positives.
    """
    n_true = n_annotated = n_detected = n_false = 0
    for detected, annotated in per_image:
        if detected < 0 or annotated < 0:
            raise ValueError("counts must be non-negative")
        n_true += min(detected, annotated)
        n_false += max(detected - annotated, 0)
        n_annotated += annotated
        n_detected += detected
    t_ratio = n_true / n_annotated if n_annotated else 0.0
    f_ratio = n_false / n_detected if n_detected else 0.0
    return DetectionStats(t_ratio, f_ratio, n_valid_crops)
