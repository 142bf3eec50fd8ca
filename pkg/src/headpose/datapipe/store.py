"""On-disk formats: JSON-lines manifests and the binary-PGM sample store.

File formats:

- detections:   one JSON object per line, {"image": str, "bbox": [x, y, w, h],
                "conf": float}
- annotations:  {"image": str, "bbox": [x, y, w, h], "tilt": float,
                "pan": float, "source": "p04" | "aflw" | "synthetic"}
- sample store: a directory of 64x64 binary (P5) PGM files plus an
                index.jsonl with {"file": str, "tilt": float, "pan": float,
                "source": str, "class_id": int}

Parsers report the offending 1-based line number on malformed records.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from .geometry import Annotation, BoundingBox, Detection
from .samples import Sample, discretize_pose, normalize_source

INDEX_NAME = "index.jsonl"


# --- PGM ---------------------------------------------------------------


def write_pgm(path, img_u8):
    if img_u8.dtype != np.uint8 or img_u8.ndim != 2:
        raise ValueError("write_pgm expects a 2-d uint8 array")
    h, w = img_u8.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img_u8.tobytes())


def read_pgm(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:2] != b"P5":
        raise ValueError(f"{path}: not a binary PGM file")
    fields, pos = [], 2
    while len(fields) < 3:
        while pos < len(blob) and blob[pos : pos + 1].isspace():
            pos += 1
        if blob[pos : pos + 1] == b"#":  # comment line
            pos = blob.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(blob[start:pos]))
    pos += 1  # single whitespace after maxval
    w, h, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported, maxval={maxval}")
    data = np.frombuffer(blob, dtype=np.uint8, offset=pos, count=w * h)
    if data.size != w * h:
        raise ValueError(f"{path}: truncated pixel data")
    return data.reshape(h, w).copy()


def quantize(img):
    """[0, 1] float image to uint8."""
    return np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)


def dequantize(img_u8):
    return img_u8.astype(np.float32) / 255.0


# --- JSON lines --------------------------------------------------------


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def iter_jsonl(path):
    """Yield (line_number, record) pairs; malformed JSON aborts with the line."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON ({exc})") from None


def _parse_bbox(rec, path, lineno):
    try:
        x, y, w, h = rec["bbox"]
        return BoundingBox(int(x), int(y), int(w), int(h))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: line {lineno}: bad bbox ({exc})") from None


def read_detections(path):
    """Parse a detections file into (image, Detection) pairs."""
    out = []
    for lineno, rec in iter_jsonl(path):
        bbox = _parse_bbox(rec, path, lineno)
        try:
            det = Detection(bbox, float(rec["conf"]))
            image = rec["image"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: line {lineno}: bad detection ({exc})") from None
        out.append((image, det))
    return out


def read_annotations(path):
    """Parse an annotations/manifest file into (image, Annotation, source)."""
    out = []
    for lineno, rec in iter_jsonl(path):
        bbox = _parse_bbox(rec, path, lineno)
        try:
            ann = Annotation(bbox, float(rec["tilt"]), float(rec["pan"]))
            source = normalize_source(rec["source"])
            image = rec["image"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: line {lineno}: bad annotation ({exc})") from None
        out.append((image, ann, source))
    return out


# --- sample store -------------------------------------------------------


@dataclass
class IndexRecord:
    file: str
    tilt: float
    pan: float
    source: str
    class_id: int


def append_samples(out_dir, samples, start=0, index_name=INDEX_NAME):
    """Write samples as PGM files plus index lines; returns the next number."""
    os.makedirs(out_dir, exist_ok=True)
    index_path = os.path.join(out_dir, index_name)
    with open(index_path, "a", encoding="utf-8") as fh:
        for i, s in enumerate(samples, start=start):
            name = f"{i:06d}.pgm"
            write_pgm(os.path.join(out_dir, name), quantize(s.image))
            rec = {
                "file": name,
                "tilt": s.tilt,
                "pan": s.pan,
                "source": s.source,
                "class_id": s.class_id,
            }
            fh.write(json.dumps(rec) + "\n")
    return start + len(samples)


def read_index(path):
    out = []
    for lineno, rec in iter_jsonl(path):
        try:
            row = IndexRecord(
                rec["file"],
                float(rec["tilt"]),
                float(rec["pan"]),
                normalize_source(rec["source"]),
                int(rec["class_id"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: line {lineno}: bad index record ({exc})") from None
        if row.class_id != discretize_pose(row.tilt, row.pan):
            raise ValueError(
                f"{path}: line {lineno}: class_id {row.class_id} does not match pose"
            )
        out.append(row)
    return out


def load_samples(store_dir, records=None, index_name=INDEX_NAME):
    """Materialize Samples from a store directory (or a subset of records)."""
    if records is None:
        records = read_index(os.path.join(store_dir, index_name))
    out = []
    for rec in records:
        img = dequantize(read_pgm(os.path.join(store_dir, rec.file)))
        out.append(Sample(img, rec.tilt, rec.pan, rec.source, rec.class_id))
    return out


def write_index(path, records):
    write_jsonl(
        path,
        (
            {
                "file": r.file,
                "tilt": r.tilt,
                "pan": r.pan,
                "source": r.source,
                "class_id": r.class_id,
            }
            for r in records
        ),
    )
