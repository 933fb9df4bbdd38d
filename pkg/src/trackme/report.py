"""Project QA report: per-track coverage table plus rendered figures.

Writes ``tracks.csv`` (one row per (label, id) track with its frame span,
presence count and gap count) alongside two PNG figures: a timeline of
track presence and a per-frame box count. Useful for spotting holes before
exporting.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .colors import UNASSIGNED_COLOR, color_for_key
from .model import TrackKey
from .storage import ProjectIndex


def _collect(project: ProjectIndex):
    presence: dict[TrackKey, list[int]] = {}
    boxes_per_frame = [0] * project.frame_count
    null_per_frame = [0] * project.frame_count
    for i in range(project.frame_count):
        frame = project.load(i)
        if frame is None:
            continue
        for s in frame.shapes:
            boxes_per_frame[i] += 1
            if s.track_id is None:
                null_per_frame[i] += 1
            else:
                presence.setdefault(s.key, []).append(i)
    return presence, boxes_per_frame, null_per_frame


def write_report(project: ProjectIndex, out_dir: str | Path) -> dict[str, Any]:
    """Render the report into out_dir; returns paths and summary counts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    presence, boxes_per_frame, null_per_frame = _collect(project)
    keys = sorted(presence, key=TrackKey.sort_key)

    csv_path = out / "tracks.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["label", "track_id", "first_frame", "last_frame", "frames_present", "gaps"]
        )
        for key in keys:
            frames = presence[key]
            gaps = sum(
                1 for a, b in zip(frames, frames[1:]) if b - a > 1
            )
            writer.writerow(
                [key.label, key.track_id, frames[0], frames[-1], len(frames), gaps]
            )

    timeline_path = out / "track_timeline.png"
    fig, ax = plt.subplots(figsize=(10, max(2.0, 0.3 * len(keys) + 1)))
    for row, key in enumerate(keys):
        frames = presence[key]
        color = tuple(c / 255 for c in color_for_key(key))
        ax.scatter(frames, [row] * len(frames), s=6, color=color, marker="s")
    ax.set_yticks(range(len(keys)))
    ax.set_yticklabels([str(k) for k in keys], fontsize=7)
    ax.set_xlabel("frame")
    ax.set_title("track presence")
    ax.set_xlim(-0.5, project.frame_count - 0.5)
    fig.tight_layout()
    fig.savefig(timeline_path, dpi=120)
    plt.close(fig)

    counts_path = out / "boxes_per_frame.png"
    fig, ax = plt.subplots(figsize=(10, 3))
    xs = range(project.frame_count)
    ax.bar(xs, boxes_per_frame, width=1.0, label="boxes", color="#4878d0")
    ax.bar(
        xs, null_per_frame, width=1.0, label="without ID",
        color=tuple(c / 255 for c in UNASSIGNED_COLOR),
    )
    ax.set_xlabel("frame")
    ax.set_ylabel("boxes")
    ax.set_title("boxes per frame")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(counts_path, dpi=120)
    plt.close(fig)

    return {
        "tracks": len(keys),
        "frames": project.frame_count,
        "boxes": sum(boxes_per_frame),
        "boxes_without_id": sum(null_per_frame),
        "csv": str(csv_path),
        "figures": [str(timeline_path), str(counts_path)],
    }
