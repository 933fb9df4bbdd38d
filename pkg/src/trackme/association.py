"""SORT-style ID association across frames.

Boxes already exist on every frame; this engine assigns consistent track IDs
by propagating constant-velocity Kalman predictions forward and matching
them to each next frame's boxes with an IoU cost and an optimal one-to-one
assignment. Matching is stratified by label, so objects of different classes
can never trade IDs. Two seeding modes exist: assign fresh IDs to every box
on the starting frame, or keep the IDs already present there.

The tracker sits behind a small method registry so alternative association
schemes can be plugged in; "sort" is the only built-in.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import get_float, get_int
from .errors import PreconditionError, ValidationError
from .model import BoundingBox
from .storage import ProjectIndex

MIN_AREA = 1.0

log = logging.getLogger(__name__)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes, 0 when disjoint."""
    ax1, ay1, ax2, ay2 = a.corners()
    bx1, by1, bx2, by2 = b.corners()
    iw = min(ax2, bx2) - max(ax1, bx1)
    ih = min(ay2, by2) - max(ay1, by1)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


@dataclass
class AssignmentResult:
    """One-to-one matching between track and detection indices."""

    matches: list[tuple[int, int]]
    unmatched_tracks: list[int]
    unmatched_detections: list[int]


def solve_assignment(cost: np.ndarray, iou_threshold: float) -> AssignmentResult:
    """Optimal assignment on a (tracks x detections) cost matrix of -IoU.

    Minimizes total cost, then demotes matches whose IoU falls below the
    threshold. Rectangular matrices are fine.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        if cost.size == 0:
            return AssignmentResult([], [], [])
        raise ValidationError(f"cost matrix must be 2-d, got shape {cost.shape}")
    n_tracks, n_dets = cost.shape
    if n_tracks == 0 or n_dets == 0:
        return AssignmentResult([], list(range(n_tracks)), list(range(n_dets)))
    rows, cols = linear_sum_assignment(cost)
    matches = []
    matched_t, matched_d = set(), set()
    for r, c in zip(rows, cols):
        if -cost[r, c] < iou_threshold:
            continue
        matches.append((int(r), int(c)))
        matched_t.add(int(r))
        matched_d.add(int(c))
    return AssignmentResult(
        matches=matches,
        unmatched_tracks=[t for t in range(n_tracks) if t not in matched_t],
        unmatched_detections=[d for d in range(n_dets) if d not in matched_d],
    )


@dataclass(frozen=True)
class AssociationParams:
    iou_threshold: float = 0.3
    max_age: int = 3  # frames a track survives unmatched
    min_hits: int = 1  # annotation use: IDs are emitted immediately
    next_id: int = 0

    def __post_init__(self):
        if not 0.0 <= self.iou_threshold <= 1.0:
            raise ValidationError("iou_threshold must be in [0, 1]")
        if self.max_age < 0:
            raise ValidationError("max_age must be >= 0")
        if self.min_hits < 1:
            raise ValidationError("min_hits must be >= 1")
        if self.next_id < 0:
            raise ValidationError("next_id must be >= 0")

    @classmethod
    def from_config(cls, cfg: dict[str, str]) -> "AssociationParams":
        return cls(
            iou_threshold=get_float(cfg, "assoc.iou_threshold", 0.3),
            max_age=get_int(cfg, "assoc.max_age", 3),
            min_hits=get_int(cfg, "assoc.min_hits", 1),
        )


# Constant-velocity transition over state [u, v, s, r, du, dv, ds]:
# center position, box area, aspect ratio and their velocities (r constant).
_F = np.eye(7)
_F[0, 4] = _F[1, 5] = _F[2, 6] = 1.0
_H = np.zeros((4, 7))
_H[:4, :4] = np.eye(4)
_R = np.diag([1.0, 1.0, 10.0, 10.0])
_P0 = np.diag([10.0, 10.0, 10.0, 10.0, 1e4, 1e4, 1e4])
_Q = np.diag([1.0, 1.0, 1.0, 1.0, 0.01, 0.01, 1e-4])


def _box_to_z(box: BoundingBox) -> np.ndarray:
    return np.array([box.cx, box.cy, box.w * box.h, box.w / box.h])


def _state_to_box(x: np.ndarray) -> BoundingBox:
    s = max(float(x[2]), MIN_AREA)
    r = max(float(x[3]), 1e-6)
    w = math.sqrt(s * r)
    h = s / w
    return BoundingBox(float(x[0]), float(x[1]), max(w, 1.0), max(h, 1.0))


@dataclass
class KalmanTrack:
    """Constant-velocity track state for one object."""

    track_id: int
    label: str
    x: np.ndarray = field(default_factory=lambda: np.zeros(7))
    P: np.ndarray = field(default_factory=lambda: _P0.copy())
    age_since_update: int = 0
    hit_count: int = 1

    @classmethod
    def from_box(cls, track_id: int, label: str, box: BoundingBox) -> "KalmanTrack":
        x = np.zeros(7)
        x[:4] = _box_to_z(box)
        return cls(track_id=track_id, label=label, x=x)

    def predicted_box(self) -> BoundingBox:
        return _state_to_box(self.x)


def kalman_predict(track: KalmanTrack) -> KalmanTrack:
    """Advance one frame under constant velocity; grows uncertainty and age."""
    if track.x[2] + track.x[6] <= 0:
        track.x[6] = 0.0  # never let area velocity drive the area negative
    track.x = _F @ track.x
    track.x[2] = max(track.x[2], MIN_AREA)
    track.P = _F @ track.P @ _F.T + _Q
    track.age_since_update += 1
    return track


def kalman_update(track: KalmanTrack, detection: BoundingBox) -> KalmanTrack:
    """Standard linear Kalman correction with measurement [u, v, s, r]."""
    z = _box_to_z(detection)
    y = z - _H @ track.x
    S = _H @ track.P @ _H.T + _R
    try:
        K = track.P @ _H.T @ np.linalg.inv(S)
    except np.linalg.LinAlgError:
        log.warning("singular innovation covariance on track %d; keeping prior",
                    track.track_id)
        track.age_since_update = 0
        track.hit_count += 1
        return track
    track.x = track.x + K @ y
    track.P = (np.eye(7) - K @ _H) @ track.P
    track.age_since_update = 0
    track.hit_count += 1
    return track


def _reading_order(items: list[tuple[str, BoundingBox]]) -> list[int]:
    """Indices sorted top-left to bottom-right (row-major on corner coords)."""
    def key(i: int):
        label, box = items[i]
        x1, y1, _, _ = box.corners()
        return (y1, x1, label)
    return sorted(range(len(items)), key=key)


class SortTracker:
    """Frame-by-frame SORT pipeline: predict, match per label, update, spawn."""

    def __init__(self, params: AssociationParams):
        self.params = params
        self.tracks: list[KalmanTrack] = []
        self.next_id = params.next_id

    def _new_track(self, label: str, box: BoundingBox) -> KalmanTrack:
        track = KalmanTrack.from_box(self.next_id, label, box)
        self.next_id += 1
        self.tracks.append(track)
        return track

    def seed_scratch(self, items: list[tuple[str, BoundingBox]]) -> list[int]:
        """Fresh IDs for every box, assigned in reading order."""
        ids: list[int | None] = [None] * len(items)
        for i in _reading_order(items):
            label, box = items[i]
            ids[i] = self._new_track(label, box).track_id
        return ids  # type: ignore[return-value]

    def seed_current(
        self, items: list[tuple[str, BoundingBox]], existing: list[int | None]
    ) -> list[int]:
        """Keep already-assigned IDs; boxes without one get fresh IDs."""
        if all(t is None for t in existing):
            raise PreconditionError("seed frame carries no track IDs")
        self.next_id = max(
            self.next_id, max(t for t in existing if t is not None) + 1
        )
        ids: list[int | None] = list(existing)
        for i, (label, box) in enumerate(items):
            if existing[i] is not None:
                self.tracks.append(KalmanTrack.from_box(existing[i], label, box))
        for i in _reading_order(items):
            if ids[i] is None:
                label, box = items[i]
                ids[i] = self._new_track(label, box).track_id
        return ids  # type: ignore[return-value]

    def step(self, items: list[tuple[str, BoundingBox]]) -> list[int]:
        """Advance one frame and return a track ID for every box, in order."""
        for track in self.tracks:
            kalman_predict(track)

        ids: list[int | None] = [None] * len(items)
        labels = sorted({label for label, _ in items} | {t.label for t in self.tracks})
        for label in labels:
            t_idx = [i for i, t in enumerate(self.tracks) if t.label == label]
            d_idx = [i for i, (lab, _) in enumerate(items) if lab == label]
            if t_idx and d_idx:
                cost = np.zeros((len(t_idx), len(d_idx)))
                for a, ti in enumerate(t_idx):
                    pred = self.tracks[ti].predicted_box()
                    for b, di in enumerate(d_idx):
                        cost[a, b] = -iou(pred, items[di][1])
                result = solve_assignment(cost, self.params.iou_threshold)
                for a, b in result.matches:
                    track = self.tracks[t_idx[a]]
                    kalman_update(track, items[d_idx[b]][1])
                    ids[d_idx[b]] = track.track_id

        for i in _reading_order(items):
            if ids[i] is None:
                label, box = items[i]
                ids[i] = self._new_track(label, box).track_id

        self.tracks = [
            t for t in self.tracks if t.age_since_update <= self.params.max_age
        ]
        return ids  # type: ignore[return-value]


TrackerFactory = Callable[[AssociationParams], SortTracker]
_METHODS: dict[str, TrackerFactory] = {}


def register_method(name: str, factory: TrackerFactory) -> None:
    _METHODS[name] = factory


def get_method(name: str) -> TrackerFactory:
    try:
        return _METHODS[name]
    except KeyError:
        raise ValidationError(
            f"unknown association method {name!r}; available: {sorted(_METHODS)}"
        ) from None


register_method("sort", SortTracker)


def _max_project_id(project: ProjectIndex) -> int:
    """Largest track ID anywhere in the project, or -1 when none exist."""
    best = -1
    for i in range(project.frame_count):
        frame = project.load(i)
        if frame is None:
            continue
        for s in frame.shapes:
            if s.track_id is not None:
                best = max(best, s.track_id)
    return best


def run_association(
    project: ProjectIndex,
    mode: str,
    current_frame: int = 0,
    end_frame: int | None = None,
    params: AssociationParams | None = None,
    method: str = "sort",
    progress: Callable[[int, int], None] | None = None,
) -> dict[str, Any]:
    """Assign track IDs from current_frame forward to end_frame (or the end).

    Mode "scratch" re-IDs every box on the starting frame in reading order;
    mode "current" keeps the IDs already on it (and requires at least one).
    Frames before current_frame are never touched. New IDs are always larger
    than any ID existing in the project beforehand. Returns
    {frames_processed, ids_created, ids_reassigned}.
    """
    if mode not in ("scratch", "current"):
        raise ValidationError(f"mode must be 'scratch' or 'current', got {mode!r}")
    params = params or AssociationParams()
    last = project.frame_count - 1
    end = last if end_frame is None else end_frame
    if not 0 <= current_frame <= last:
        raise PreconditionError(
            f"current frame {current_frame} outside project of {project.frame_count}"
        )
    if end < current_frame or end > last:
        raise PreconditionError(f"end frame {end} outside [{current_frame}, {last}]")

    # fresh IDs must exceed everything already in the project
    base_id = max(params.next_id, _max_project_id(project) + 1)
    tracker = get_method(method)(
        AssociationParams(
            iou_threshold=params.iou_threshold,
            max_age=params.max_age,
            min_hits=params.min_hits,
            next_id=base_id,
        )
    )

    ids_created_from = tracker.next_id
    ids_reassigned = 0
    frames_processed = 0
    total = end - current_frame + 1

    for f in range(current_frame, end + 1):
        frame = project.load(f)
        shapes = frame.shapes if frame is not None else []
        items = [(s.label, s.box) for s in shapes]
        if f == current_frame:
            if mode == "scratch":
                new_ids = tracker.seed_scratch(items)
            else:
                new_ids = tracker.seed_current(items, [s.track_id for s in shapes])
        else:
            new_ids = tracker.step(items)

        changed = False
        for s, new_id in zip(shapes, new_ids):
            if s.track_id != new_id:
                if s.track_id is not None:
                    ids_reassigned += 1
                s.track_id = new_id
                changed = True
        if changed:
            project.save(f, frame)
        frames_processed += 1
        if progress is not None:
            progress(frames_processed, total)

    return {
        "frames_processed": frames_processed,
        "ids_created": tracker.next_id - ids_created_from,
        "ids_reassigned": ids_reassigned,
    }
