"""Annotation data model: boxes, shapes, frames and track keys.

A frame annotation holds rectangle shapes, each carrying a label and an
optional integer track ID stored in the file's integer group-ID slot so
files remain loadable by older tools that know nothing about IDs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import ValidationError

FORMAT_VERSION = "1.0"

Point = list[float]
Points = list[Point]


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle as (center x, center y, width, height) in pixels."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        for v in (self.cx, self.cy, self.w, self.h):
            if not math.isfinite(v):
                raise ValidationError(f"non-finite box value: {self!r}")
        if self.w < 1 or self.h < 1:
            raise ValidationError(f"box smaller than 1px: {self!r}")

    @classmethod
    def from_corners(cls, x1: float, y1: float, x2: float, y2: float) -> "BoundingBox":
        return cls((x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1)

    @classmethod
    def from_points(cls, points: Points) -> "BoundingBox":
        (x1, y1), (x2, y2) = normalize_corners(points)
        return cls.from_corners(x1, y1, x2, y2)

    def corners(self) -> tuple[float, float, float, float]:
        """Return (x1, y1, x2, y2) with x1 < x2 and y1 < y2."""
        return (
            self.cx - self.w / 2.0,
            self.cy - self.h / 2.0,
            self.cx + self.w / 2.0,
            self.cy + self.h / 2.0,
        )

    def to_points(self) -> Points:
        x1, y1, x2, y2 = self.corners()
        return [[x1, y1], [x2, y2]]


def normalize_corners(points: Points) -> Points:
    """Order two corner points so the first is top-left, the second bottom-right.

    Idempotent; raises on degenerate (zero-extent) rectangles.
    """
    if len(points) != 2 or any(len(p) != 2 for p in points):
        raise ValidationError(f"rectangle needs exactly two 2-d points, got {points!r}")
    (ax, ay), (bx, by) = points
    for v in (ax, ay, bx, by):
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValidationError(f"non-finite corner coordinate in {points!r}")
    x1, x2 = (ax, bx) if ax < bx else (bx, ax)
    y1, y2 = (ay, by) if ay < by else (by, ay)
    if x1 == x2 or y1 == y2:
        raise ValidationError(f"degenerate rectangle: {points!r}")
    return [[float(x1), float(y1)], [float(x2), float(y2)]]


@dataclass(frozen=True)
class TrackKey:
    """Identity of one tracklet: object label plus optional integer ID.

    Null IDs compare equal only to null; sort order puts null IDs first
    within a label.
    """

    label: str
    track_id: int | None = None

    def __post_init__(self):
        if self.track_id is not None and self.track_id < 0:
            raise ValidationError(f"negative track id: {self.track_id}")

    def __str__(self) -> str:
        return f"{self.label}-{'null' if self.track_id is None else self.track_id}"

    def sort_key(self) -> tuple:
        return (self.label, self.track_id is not None, self.track_id or 0)

    def __lt__(self, other: "TrackKey") -> bool:
        return self.sort_key() < other.sort_key()


@dataclass
class Finding:
    """One validation observation about a frame or a project."""

    kind: str
    message: str
    frame_index: int | None = None
    severity: str = "error"  # "error" | "warning" | "info"

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "message": self.message,
            "frame_index": self.frame_index,
            "severity": self.severity,
        }


@dataclass
class ShapeRecord:
    """One annotated rectangle: label, optional track ID and two corner points."""

    label: str
    track_id: int | None
    points: Points
    shape_type: str = "rectangle"
    flags: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)  # unknown keys, kept for write-back

    def __post_init__(self):
        if not self.label:
            raise ValidationError("shape label must be a non-empty string")
        if self.track_id is not None:
            if not isinstance(self.track_id, int) or isinstance(self.track_id, bool):
                raise ValidationError(f"track id must be an integer, got {self.track_id!r}")
            if self.track_id < 0:
                raise ValidationError(f"negative track id: {self.track_id}")
        self.points = normalize_corners(self.points)

    @property
    def key(self) -> TrackKey:
        return TrackKey(self.label, self.track_id)

    @property
    def box(self) -> BoundingBox:
        return BoundingBox.from_points(self.points)

    @classmethod
    def from_box(
        cls,
        label: str,
        track_id: int | None,
        box: BoundingBox,
        flags: dict[str, Any] | None = None,
    ) -> "ShapeRecord":
        return cls(label=label, track_id=track_id, points=box.to_points(),
                   flags=dict(flags or {}))


@dataclass
class FrameAnnotation:
    """All shapes of one frame plus image metadata; persisted one file per frame.

    ``findings`` collects non-fatal problems noticed while loading (duplicate
    keys, boxes past the image edge, unsupported shape kinds); they are never
    written back. ``unsupported_shapes`` keeps non-rectangle shapes verbatim so
    saving does not lose data drawn with other tools.
    """

    image_path: str
    image_width: int
    image_height: int
    shapes: list[ShapeRecord] = field(default_factory=list)
    version: str = FORMAT_VERSION
    flags: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    unsupported_shapes: list[dict[str, Any]] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list, compare=False)

    def __post_init__(self):
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValidationError(
                f"image size must be positive, got {self.image_width}x{self.image_height}"
            )

    def iter_keys(self) -> Iterator[TrackKey]:
        for s in self.shapes:
            yield s.key

    def duplicate_keys(self) -> list[TrackKey]:
        """Non-null (label, id) pairs appearing more than once in this frame."""
        seen: set[TrackKey] = set()
        dups: list[TrackKey] = []
        for s in self.shapes:
            if s.track_id is None:
                continue
            if s.key in seen and s.key not in dups:
                dups.append(s.key)
            seen.add(s.key)
        return dups

    def find_shape(self, key: TrackKey) -> ShapeRecord | None:
        """First shape matching the key; null-ID keys match null-ID shapes by label."""
        for s in self.shapes:
            if s.label == key.label and s.track_id == key.track_id:
                return s
        return None

    def out_of_bounds_shapes(self) -> list[int]:
        """Indices of shapes extending past the image rectangle."""
        out = []
        for i, s in enumerate(self.shapes):
            x1, y1, x2, y2 = s.box.corners()
            if x1 < 0 or y1 < 0 or x2 > self.image_width or y2 > self.image_height:
                out.append(i)
        return out

    def disjoint_shapes(self) -> list[int]:
        """Indices of shapes that do not intersect the image rectangle at all."""
        out = []
        for i, s in enumerate(self.shapes):
            x1, y1, x2, y2 = s.box.corners()
            if x2 <= 0 or y2 <= 0 or x1 >= self.image_width or y1 >= self.image_height:
                out.append(i)
        return out

    def check_invariants(self) -> None:
        """Raise ValidationError if this frame may not be saved as-is."""
        dups = self.duplicate_keys()
        if dups:
            raise ValidationError(
                "duplicate (label, id) pairs in frame: "
                + ", ".join(str(k) for k in dups)
            )
        disjoint = self.disjoint_shapes()
        if disjoint:
            raise ValidationError(
                f"shapes entirely outside the image rectangle at indices {disjoint}"
            )


def clamp_corners(
    x1: float, y1: float, x2: float, y2: float, width: int, height: int
) -> tuple[float, float, float, float]:
    """Clip corner coordinates to the image rectangle, keeping ≥1px extent."""
    x1 = min(max(x1, 0.0), width - 1.0)
    y1 = min(max(y1, 0.0), height - 1.0)
    x2 = max(min(x2, float(width)), x1 + 1.0)
    y2 = max(min(y2, float(height)), y1 + 1.0)
    return x1, y1, x2, y2


def clamp_box(box: BoundingBox, width: int, height: int) -> BoundingBox:
    """Clip a box to the image rectangle, preserving at least 1px extent."""
    return BoundingBox.from_corners(*clamp_corners(*box.corners(), width, height))
