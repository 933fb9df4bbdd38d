"""Import externally produced detections as null-ID boxes.

Two input formats:

* MOT-det CSV, one row per box::

      frame,-1,bb_left,bb_top,w,h,conf,class,...

  ``frame`` is 1-based (matching the track export). ``class`` is an integer
  index translated through a label map; rows whose index is missing from
  the map are skipped and counted. Trailing columns are ignored.

* JSON: a list of objects ``{"frame": 1-based int, "bbox": [left, top, w, h],
  "confidence": float, "label": str}`` (``label`` may be replaced by an
  integer ``"class"`` resolved through the label map).

Imported boxes always carry a null track ID; assigning IDs is the
association engine's job.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .model import ShapeRecord
from .storage import ProjectIndex, load_or_blank

DEFAULT_MIN_CONFIDENCE = 0.5


@dataclass
class _Row:
    line: int
    frame_index: int  # 0-based
    points: list[list[float]]
    confidence: float
    label: str | None  # None when the class index is unmapped


def _resolve_label(cls_value: Any, label_map: dict[int, str] | None) -> str | None:
    if cls_value is None or (isinstance(cls_value, (int, float)) and cls_value == -1):
        return "object" if label_map is None else None
    idx = int(cls_value)
    if label_map is None:
        return str(idx)
    return label_map.get(idx)


def _parse_csv(text: str, label_map: dict[int, str] | None) -> tuple[list[_Row], list[str]]:
    rows: list[_Row] = []
    errors: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) < 6:
            errors.append(f"line {lineno}: expected at least 6 fields")
            continue
        try:
            frame = int(float(parts[0]))
            left, top, w, h = (float(p) for p in parts[2:6])
            conf = float(parts[6]) if len(parts) > 6 and parts[6].strip() else 1.0
            cls_value = None
            if len(parts) > 7 and parts[7].strip():
                cls_value = float(parts[7])
        except ValueError:
            errors.append(f"line {lineno}: unparseable number")
            continue
        if w <= 0 or h <= 0:
            errors.append(f"line {lineno}: non-positive box size")
            continue
        rows.append(_Row(
            line=lineno,
            frame_index=frame - 1,
            points=[[left, top], [left + w, top + h]],
            confidence=conf,
            label=_resolve_label(cls_value, label_map),
        ))
    return rows, errors


def _parse_json(data: Any, label_map: dict[int, str] | None) -> tuple[list[_Row], list[str]]:
    if not isinstance(data, list):
        raise ValidationError("JSON detections must be a list of objects")
    rows: list[_Row] = []
    errors: list[str] = []
    for n, obj in enumerate(data, start=1):
        if not isinstance(obj, dict) or "frame" not in obj or "bbox" not in obj:
            errors.append(f"entry {n}: needs 'frame' and 'bbox'")
            continue
        try:
            frame = int(obj["frame"])
            left, top, w, h = (float(v) for v in obj["bbox"])
        except (TypeError, ValueError):
            errors.append(f"entry {n}: unparseable frame or bbox")
            continue
        if w <= 0 or h <= 0:
            errors.append(f"entry {n}: non-positive box size")
            continue
        if "label" in obj and obj["label"]:
            label: str | None = str(obj["label"])
        else:
            label = _resolve_label(obj.get("class"), label_map)
        rows.append(_Row(
            line=n,
            frame_index=frame - 1,
            points=[[left, top], [left + w, top + h]],
            confidence=float(obj.get("confidence", 1.0)),
            label=label,
        ))
    return rows, errors


def import_detections(
    project: ProjectIndex,
    det_file: str | Path,
    label_map: dict[int, str] | None = None,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    replace: bool = False,
) -> dict[str, Any]:
    """Add detection boxes (track ID null) to the project's frames.

    Rows below ``min_confidence``, with unmapped class indices, out-of-range
    frames, or unparseable fields are skipped and counted; ingestion never
    stops at a bad row. With ``replace`` the frames that receive at least
    one accepted box are cleared first, which makes re-imports idempotent.
    Returns {boxes_added, rows_skipped, ...} with per-reason breakdowns.
    """
    path = Path(det_file)
    if not path.exists():
        raise ValidationError(f"detection file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        rows, malformed = _parse_json(json.loads(text), label_map)
    else:
        rows, malformed = _parse_csv(text, label_map)

    accepted: dict[int, list[_Row]] = {}
    low_confidence = unknown_class = 0
    out_of_range: list[str] = []
    for row in rows:
        if row.label is None:
            unknown_class += 1
            continue
        if row.confidence < min_confidence:
            low_confidence += 1
            continue
        if not 0 <= row.frame_index < project.frame_count:
            out_of_range.append(
                f"line {row.line}: frame {row.frame_index + 1} outside project"
            )
            continue
        accepted.setdefault(row.frame_index, []).append(row)

    boxes_added = 0
    for frame_index in sorted(accepted):
        frame = load_or_blank(project, frame_index)
        if replace:
            frame.shapes = []
        for row in accepted[frame_index]:
            frame.shapes.append(ShapeRecord(
                label=row.label,  # type: ignore[arg-type]
                track_id=None,
                points=row.points,
            ))
            boxes_added += 1
        project.save(frame_index, frame)

    return {
        "boxes_added": boxes_added,
        "rows_skipped": (low_confidence + unknown_class
                         + len(out_of_range) + len(malformed)),
        "low_confidence": low_confidence,
        "unknown_class": unknown_class,
        "out_of_range": out_of_range,
        "malformed": malformed,
    }
