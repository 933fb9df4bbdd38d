"""Export project annotations as MOT-style comma-separated tracks.

One line per box carrying a track ID:
``frame,id,bb_left,bb_top,w,h,1,-1,-1,-1`` with frames numbered from 1.
Boxes without an ID cannot be exported and are counted as warnings.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from .storage import ProjectIndex


def _fmt(v: float) -> str:
    """Integers without a trailing .0, floats trimmed."""
    if float(v).is_integer():
        return str(int(v))
    return f"{v:.6g}"


def export_mot(project: ProjectIndex, out: str | Path) -> dict[str, Any]:
    """Write the MOT CSV for a project; returns {lines_written, skipped_null_id}."""
    lines: list[str] = []
    skipped = 0
    for i in range(project.frame_count):
        frame = project.load(i)
        if frame is None:
            continue
        for s in frame.shapes:
            if s.track_id is None:
                skipped += 1
                continue
            x1, y1, x2, y2 = s.box.corners()
            lines.append(
                f"{i + 1},{s.track_id},{_fmt(x1)},{_fmt(y1)},"
                f"{_fmt(x2 - x1)},{_fmt(y2 - y1)},1,-1,-1,-1"
            )
    Path(out).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return {"lines_written": len(lines), "skipped_null_id": skipped}
