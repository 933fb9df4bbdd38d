"""Shared fixtures: tiny image projects and synthetic moving-box sequences."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from trackme.model import BoundingBox, FrameAnnotation, ShapeRecord
from trackme.storage import ProjectIndex, open_project, save_frame

DEFAULT_SIZE = (320, 240)


def make_images(
    root: Path, count: int, size: tuple[int, int] = DEFAULT_SIZE, stem: str = "frame"
) -> None:
    root.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        Image.new("RGB", size, (24, 32, 40)).save(root / f"{stem}_{i:04d}.jpg")


def annotate(
    project: ProjectIndex,
    i: int,
    shapes: list[ShapeRecord],
    size: tuple[int, int] = DEFAULT_SIZE,
) -> FrameAnnotation:
    frame = FrameAnnotation(
        image_path=project.frame_paths[i].name,
        image_width=size[0],
        image_height=size[1],
        shapes=shapes,
    )
    save_frame(frame, project.annotation_paths[i])
    return frame


def box_shape(label: str, track_id: int | None, cx, cy, w, h) -> ShapeRecord:
    return ShapeRecord.from_box(label, track_id, BoundingBox(cx, cy, w, h))


def file_hashes(root: Path) -> dict[str, str]:
    """SHA-256 of every annotation file, keyed by file name."""
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.glob("*.json"))
    }


@pytest.fixture
def project_dir(tmp_path: Path) -> Path:
    root = tmp_path / "proj"
    make_images(root, 8)
    return root


@pytest.fixture
def project(project_dir: Path) -> ProjectIndex:
    return open_project(project_dir)


class MovingObject:
    """Non-overlapping constant-velocity box for synthetic sequences."""

    def __init__(self, label: str, lane_cy: float, x0: float, vx: float, w: float, h: float):
        self.label = label
        self.lane_cy = lane_cy
        self.x0 = x0
        self.vx = vx
        self.w = w
        self.h = h

    def box_at(self, frame: int) -> BoundingBox:
        return BoundingBox(self.x0 + self.vx * frame, self.lane_cy, self.w, self.h)


def synthetic_sequence(
    root: Path,
    n_frames: int = 20,
    n_objects: int = 3,
    size: tuple[int, int] = (640, 480),
    seed: int = 0,
    label: str = "bird",
    with_ids: bool = False,
) -> tuple[ProjectIndex, list[MovingObject]]:
    """Project of constant-velocity boxes in separated lanes (IoU 0 between objects)."""
    rng = np.random.default_rng(seed)
    make_images(root, n_frames, size)
    project = open_project(root)
    lane_height = size[1] / n_objects
    objects = []
    for j in range(n_objects):
        h = float(rng.uniform(20, min(36, lane_height - 8)))
        objects.append(MovingObject(
            label=label,
            lane_cy=lane_height * (j + 0.5),
            x0=float(rng.uniform(30, 80)),
            vx=float(rng.uniform(1.0, 3.0)),
            w=float(rng.uniform(24, 44)),
            h=h,
        ))
    for f in range(n_frames):
        shapes = [
            ShapeRecord.from_box(o.label, (j if with_ids else None), o.box_at(f))
            for j, o in enumerate(objects)
        ]
        annotate(project, f, shapes, size=size)
    return project, objects
