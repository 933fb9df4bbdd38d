"""Range edits: delete, re-ID or re-label every matching box in one shot.

A request names a frame range and a target (label and/or ID; a blank field
is a wildcard). All edits are staged in memory and validated before any
file is written, so a request that would create a duplicate (label, id)
pair aborts atomically, naming the offending frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import ConflictError, ValidationError
from .storage import ProjectIndex

MODES = ("remove_all", "swap_id", "swap_label")


@dataclass(frozen=True)
class ModificationRequest:
    start_frame: int
    end_frame: int
    mode: str
    target_label: str | None = None
    target_id: int | None = None
    new_label: str | None = None
    new_id: int | None = None

    def __post_init__(self):
        if self.start_frame > self.end_frame:
            raise ValidationError(
                f"start frame {self.start_frame} after end frame {self.end_frame}"
            )
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.target_label is None and self.target_id is None:
            raise ValidationError("provide a target label, a target id, or both")
        if self.mode == "swap_id":
            if self.new_id is None:
                raise ValidationError("swap_id needs a new id")
            if self.new_label is not None:
                raise ValidationError("one swap per request: drop new_label")
            if self.new_id < 0:
                raise ValidationError(f"negative new id: {self.new_id}")
        elif self.mode == "swap_label":
            if not self.new_label:
                raise ValidationError("swap_label needs a non-empty new label")
            if self.new_id is not None:
                raise ValidationError("one swap per request: drop new_id")
        else:  # remove_all
            if self.new_label is not None or self.new_id is not None:
                raise ValidationError("remove_all takes no new values")
        if self.target_id is not None and self.target_id < 0:
            raise ValidationError(f"negative target id: {self.target_id}")

    def matches(self, label: str, track_id: int | None) -> bool:
        """Conjunctive over the provided fields; blank fields match anything."""
        if self.target_label is not None and label != self.target_label:
            return False
        if self.target_id is not None and track_id != self.target_id:
            return False
        return True

    def wildcard_fields(self) -> list[str]:
        out = []
        if self.target_label is None:
            out.append("label")
        if self.target_id is None:
            out.append("id")
        return out


def modify_range(project: ProjectIndex, req: ModificationRequest) -> dict[str, Any]:
    """Apply one modification to all matching boxes in [start, end].

    Either every touched frame is written or none is. Returns
    {frames_touched, shapes_modified} plus the wildcarded target fields so
    callers can surface how broad the match was.
    """
    if req.start_frame < 0 or req.end_frame >= project.frame_count:
        raise ValidationError(
            f"range [{req.start_frame}, {req.end_frame}] outside project "
            f"of {project.frame_count} frames"
        )

    staged = []  # (frame index, FrameAnnotation) pairs to flush
    shapes_modified = 0
    for i in range(req.start_frame, req.end_frame + 1):
        frame = project.load(i)
        if frame is None:
            continue
        hits = [s for s in frame.shapes if req.matches(s.label, s.track_id)]
        if not hits:
            continue
        if req.mode == "remove_all":
            hit_ids = {id(s) for s in hits}
            frame.shapes = [s for s in frame.shapes if id(s) not in hit_ids]
        elif req.mode == "swap_id":
            for s in hits:
                s.track_id = req.new_id
        else:
            for s in hits:
                s.label = req.new_label  # type: ignore[assignment]
        dups = frame.duplicate_keys()
        if dups:
            raise ConflictError(
                f"edit would duplicate {dups[0]} in frame {i}; nothing was changed",
                frame_index=i,
            )
        shapes_modified += len(hits)
        staged.append((i, frame))

    for i, frame in staged:
        project.save(i, frame)
    return {
        "frames_touched": len(staged),
        "shapes_modified": shapes_modified,
        "wildcard_fields": req.wildcard_fields(),
    }
