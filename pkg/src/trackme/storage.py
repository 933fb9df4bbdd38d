"""Per-frame annotation files and project directory indexing.

The on-disk format is one UTF-8 JSON file per frame with keys ``version``,
``flags``, ``shapes``, ``imagePath``, ``imageHeight`` and ``imageWidth``.
Each shape is ``{label, points, group_id, shape_type, flags}``; the track ID
lives in ``group_id`` so files stay readable by tools that predate IDs.
Unknown keys are carried through unchanged on save.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .model import (
    FORMAT_VERSION,
    Finding,
    FrameAnnotation,
    ShapeRecord,
    TrackKey,
    clamp_corners,
)

ANNOTATION_EXT = ".json"
IMAGE_EXTS = {".jpg", ".jpeg", ".png", ".bmp", ".tif", ".tiff", ".webp"}

_FRAME_KEYS = {"version", "flags", "shapes", "imagePath", "imageHeight", "imageWidth"}
_SHAPE_KEYS = {"label", "points", "group_id", "shape_type", "flags"}


def _natural_key(name: str) -> tuple:
    """Sort key treating digit runs as numbers: img2 < img10."""
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if p.isdigit() else p.lower() for p in parts)


@dataclass
class ProjectIndex:
    """Ordered view of a project directory: image files and their annotation files."""

    root: Path
    frame_paths: list[Path]
    annotation_paths: list[Path]

    @property
    def frame_count(self) -> int:
        return len(self.frame_paths)

    def annotation_exists(self, i: int) -> bool:
        return self.annotation_paths[i].exists()

    def load(self, i: int) -> FrameAnnotation | None:
        """Load frame i's annotation, or None when the frame is unannotated."""
        if not self.annotation_exists(i):
            return None
        return load_frame(self.annotation_paths[i])

    def save(self, i: int, frame: FrameAnnotation) -> None:
        save_frame(frame, self.annotation_paths[i])


def open_project(directory: str | Path) -> ProjectIndex:
    """Index a directory of video frames in natural-numeric filename order.

    Annotation files are optional per frame; their path is the image path
    with the extension replaced by ``.json``.
    """
    root = Path(directory)
    if not root.is_dir():
        raise ValidationError(f"not a directory: {root}")
    try:
        entries = list(root.iterdir())
    except OSError as e:
        raise ValidationError(f"cannot read directory {root}: {e}") from e
    images = [
        p for p in entries
        if p.is_file() and p.suffix.lower() in IMAGE_EXTS
    ]
    if not images:
        raise ValidationError(f"no image files in {root}")
    images.sort(key=lambda p: (_natural_key(p.name), p.name))
    annotations = [p.with_suffix(ANNOTATION_EXT) for p in images]
    return ProjectIndex(root=root, frame_paths=images, annotation_paths=annotations)


def _shape_from_dict(raw: dict[str, Any]) -> ShapeRecord:
    missing = {"label", "points"} - raw.keys()
    if missing:
        raise ValidationError(f"shape missing keys: {sorted(missing)}")
    track_id = raw.get("group_id")
    if track_id is not None:
        if not isinstance(track_id, int) or isinstance(track_id, bool):
            raise ValidationError(f"group_id must be an integer, got {track_id!r}")
        if track_id < 0:
            raise ValidationError(f"negative group_id: {track_id}")
    flags = raw.get("flags") or {}
    extra = {k: v for k, v in raw.items() if k not in _SHAPE_KEYS}
    return ShapeRecord(
        label=raw["label"],
        track_id=track_id,
        points=raw["points"],
        flags=flags,
        extra=extra,
    )


def frame_from_dict(data: Any, origin: str = "annotation") -> FrameAnnotation:
    """Build a FrameAnnotation from decoded JSON, collecting findings.

    Shapes that are not usable rectangles are kept verbatim for write-back
    and flagged with an ``unsupported_shape`` finding. Duplicate (label, id)
    pairs and boxes past the image edge become findings, not errors, so a
    corrupt file can still be opened and repaired.
    """
    if not isinstance(data, dict):
        raise ValidationError(f"annotation root must be an object in {origin}")
    missing = {"imagePath", "imageHeight", "imageWidth"} - data.keys()
    if missing:
        raise ValidationError(f"{origin} missing keys: {sorted(missing)}")

    def _as_int(key: str) -> int:
        v = data[key]
        if isinstance(v, float) and v.is_integer():
            v = int(v)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValidationError(f"{key} must be an integer in {origin}, got {v!r}")
        return v

    findings: list[Finding] = []
    shapes: list[ShapeRecord] = []
    unsupported: list[dict[str, Any]] = []
    raw_shapes = data.get("shapes", [])
    if not isinstance(raw_shapes, list):
        raise ValidationError(f"'shapes' must be a list in {origin}")
    for raw in raw_shapes:
        if not isinstance(raw, dict):
            raise ValidationError(f"shape entries must be objects in {origin}")
        if raw.get("shape_type", "rectangle") != "rectangle":
            unsupported.append(raw)
            findings.append(Finding(
                kind="unsupported_shape",
                message=f"shape_type {raw.get('shape_type')!r} kept but not editable",
                severity="warning",
            ))
            continue
        try:
            shapes.append(_shape_from_dict(raw))
        except ValidationError as e:
            if "degenerate" in str(e) or "two 2-d points" in str(e):
                unsupported.append(raw)
                findings.append(Finding(
                    kind="unsupported_shape",
                    message=f"unusable rectangle kept but not editable: {e}",
                    severity="warning",
                ))
            else:
                raise

    frame = FrameAnnotation(
        image_path=data["imagePath"],
        image_width=_as_int("imageWidth"),
        image_height=_as_int("imageHeight"),
        shapes=shapes,
        version=data.get("version", FORMAT_VERSION),
        flags=data.get("flags") or {},
        extra={k: v for k, v in data.items() if k not in _FRAME_KEYS},
        unsupported_shapes=unsupported,
    )
    for key in frame.duplicate_keys():
        findings.append(Finding(
            kind="duplicate_key",
            message=f"duplicate (label, id) pair {key}",
            severity="error",
        ))
    for i in frame.out_of_bounds_shapes():
        findings.append(Finding(
            kind="out_of_bounds",
            message=f"shape {i} ({frame.shapes[i].key}) extends past the image edge",
            severity="warning",
        ))
    frame.findings = findings
    return frame


def load_frame(path: str | Path) -> FrameAnnotation:
    """Read one annotation file, normalizing corner order.

    Malformed JSON or missing required keys raise ValidationError; data
    problems that can be repaired in the tool are findings instead (see
    frame_from_dict).
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed JSON in {path}: {e}") from e
    return frame_from_dict(data, origin=str(path))


def _shape_to_dict(shape: ShapeRecord, width: int, height: int) -> dict[str, Any]:
    x1, y1 = shape.points[0]
    x2, y2 = shape.points[1]
    x1, y1, x2, y2 = clamp_corners(x1, y1, x2, y2, width, height)
    out: dict[str, Any] = {
        "label": shape.label,
        "points": [[x1, y1], [x2, y2]],
        "group_id": shape.track_id,
        "shape_type": shape.shape_type,
        "flags": shape.flags,
    }
    out.update(shape.extra)
    return out


def frame_to_dict(frame: FrameAnnotation) -> dict[str, Any]:
    """File-schema dict for a frame, with out-of-bounds boxes clamped."""
    data: dict[str, Any] = {
        "version": frame.version,
        "flags": frame.flags,
        "shapes": [
            _shape_to_dict(s, frame.image_width, frame.image_height)
            for s in frame.shapes
        ] + list(frame.unsupported_shapes),
        "imagePath": frame.image_path,
        "imageHeight": frame.image_height,
        "imageWidth": frame.image_width,
    }
    data.update(frame.extra)
    return data


def save_frame(frame: FrameAnnotation, path: str | Path) -> None:
    """Write one annotation file; refuses frames violating invariants.

    Boxes extending past the image rectangle are clamped to it; shapes not
    intersecting the image at all, and duplicate non-null (label, id) pairs,
    are refused before anything is written. The write is atomic (temp file
    plus rename).
    """
    frame.check_invariants()
    path = Path(path)
    data = frame_to_dict(frame)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(data, ensure_ascii=False, indent=2), encoding="utf-8")
    os.replace(tmp, path)


def image_size(path: str | Path) -> tuple[int, int]:
    """Width and height of an image file, reading only the header."""
    from PIL import Image

    with Image.open(path) as im:
        return im.size


def blank_frame(project: ProjectIndex, i: int) -> FrameAnnotation:
    """Fresh empty annotation for an unannotated frame."""
    w, h = image_size(project.frame_paths[i])
    return FrameAnnotation(
        image_path=project.frame_paths[i].name, image_width=w, image_height=h
    )


def load_or_blank(project: ProjectIndex, i: int) -> FrameAnnotation:
    frame = project.load(i)
    return frame if frame is not None else blank_frame(project, i)


@dataclass
class ValidationReport:
    """Collected findings for a whole project; never mutates anything."""

    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "findings": [f.to_dict() for f in self.findings]}


def validate_project(project: ProjectIndex) -> ValidationReport:
    """Check every annotation file and cross-frame track continuity.

    Per-frame findings are re-homed with their frame index; additionally a
    track that disappears and reappears later earns an informational
    ``track_gap`` finding.
    """
    report = ValidationReport()
    presence: dict[TrackKey, list[int]] = {}
    for i in range(project.frame_count):
        if not project.annotation_exists(i):
            continue
        try:
            frame = load_frame(project.annotation_paths[i])
        except ValidationError as e:
            report.findings.append(Finding(
                kind="unreadable", message=str(e), frame_index=i, severity="error",
            ))
            continue
        for f in frame.findings:
            f.frame_index = i
            report.findings.append(f)
        for s in frame.shapes:
            if s.track_id is not None:
                presence.setdefault(s.key, []).append(i)
    for key in sorted(presence, key=TrackKey.sort_key):
        frames = presence[key]
        gaps = [
            (frames[j], frames[j + 1])
            for j in range(len(frames) - 1)
            if frames[j + 1] - frames[j] > 1
        ]
        for a, b in gaps:
            report.findings.append(Finding(
                kind="track_gap",
                message=f"track {key} absent between frames {a} and {b}",
                frame_index=a,
                severity="info",
            ))
    return report
