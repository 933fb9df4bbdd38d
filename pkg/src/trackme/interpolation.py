"""Box generation between keyframes via Gaussian process regression.

A user annotates a sparse set of keyframes for one (label, id) track; the
engine fits a rational-quadratic-kernel GP per box channel (center x,
center y, width, height) over normalized frame time and writes the posterior
mean box into every frame in between. Fitting is closed-form on a handful of
points, so it is deterministic and effectively instant on a CPU.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .config import get_float
from .errors import PreconditionError, ValidationError
from .model import BoundingBox, ShapeRecord, TrackKey, clamp_box
from .storage import ProjectIndex, load_or_blank

CHANNELS = 4  # cx, cy, w, h
CONSTANT_STD = 1e-9
_SNAP_ATOL = 1e-12


@dataclass(frozen=True)
class RQKernelParams:
    """Rational quadratic kernel hyperparameters, all strictly positive."""

    signal_variance: float = 1.0
    length_scale: float = 0.25  # in normalized [0, 1] frame time
    alpha: float = 1.0
    noise_variance: float = 1e-6

    def __post_init__(self):
        for name in ("signal_variance", "length_scale", "alpha", "noise_variance"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"kernel parameter {name} must be positive")

    @classmethod
    def from_config(cls, cfg: dict[str, str]) -> "RQKernelParams":
        return cls(
            signal_variance=get_float(cfg, "gpr.signal_variance", 1.0),
            length_scale=get_float(cfg, "gpr.length_scale", 0.25),
            alpha=get_float(cfg, "gpr.alpha", 1.0),
            noise_variance=get_float(cfg, "gpr.noise_variance", 1e-6),
        )


def rq_kernel(x1, x2, params: RQKernelParams):
    """Rational quadratic covariance sf2 * (1 + d^2 / (2*alpha*l^2))^(-alpha).

    Accepts scalars or arrays (broadcast); symmetric and maximal at x1 == x2.
    """
    d2 = np.square(np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float))
    base = 1.0 + d2 / (2.0 * params.alpha * params.length_scale**2)
    out = params.signal_variance * np.power(base, -params.alpha)
    return out if out.ndim else float(out)


@dataclass
class _Channel:
    constant: bool
    value: float = 0.0  # constant channels only
    mean: float = 0.0
    std: float = 1.0
    targets_std: np.ndarray | None = None  # standardized training targets
    dual_weights: np.ndarray | None = None


@dataclass
class GPRModel:
    """Fitted four-channel GP sharing one kernel matrix factorization."""

    params: RQKernelParams
    t_min: float
    t_span: float
    train_inputs: np.ndarray  # normalized, strictly increasing
    train_targets: np.ndarray  # raw (n, 4), used verbatim at training times
    channels: list[_Channel]
    image_size: tuple[int, int] | None = None

    def normalize(self, times: Sequence[float]) -> np.ndarray:
        return (np.asarray(times, dtype=float) - self.t_min) / self.t_span


def fit_gpr(
    times: Sequence[int],
    boxes: Sequence[BoundingBox],
    params: RQKernelParams | None = None,
    image_size: tuple[int, int] | None = None,
) -> GPRModel:
    """Fit one GP per box channel over affinely normalized frame times.

    Needs at least two strictly increasing times. Channels whose targets are
    (numerically) constant are short-circuited to that constant, which keeps
    stationary objects exact. A kernel matrix that fails its Cholesky
    factorization is reported as an error, never a crash.
    """
    params = params or RQKernelParams()
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise PreconditionError("need at least 2 keyframe boxes to interpolate")
    if len(boxes) != len(t):
        raise ValidationError("times and boxes must have equal length")
    if np.any(np.diff(t) == 0):
        raise ValidationError("duplicate frame times")
    if np.any(np.diff(t) < 0):
        raise ValidationError("frame times must be strictly increasing")

    t_min = float(t[0])
    t_span = float(t[-1] - t[0])
    x = (t - t_min) / t_span
    targets = np.array([[b.cx, b.cy, b.w, b.h] for b in boxes], dtype=float)

    diff = x[:, None] - x[None, :]
    k_matrix = rq_kernel(diff, 0.0, params)
    a_matrix = k_matrix + params.noise_variance * np.eye(len(x))
    try:
        factor = cho_factor(a_matrix, lower=True)
    except np.linalg.LinAlgError as e:
        raise PreconditionError(f"kernel matrix is not positive definite: {e}") from e

    channels: list[_Channel] = []
    for c in range(CHANNELS):
        y = targets[:, c]
        if y.max() == y.min():
            channels.append(_Channel(constant=True, value=float(y[0])))
            continue
        mean, std = float(y.mean()), float(y.std())
        if std < CONSTANT_STD:
            channels.append(_Channel(constant=True, value=mean))
            continue
        z = (y - mean) / std
        channels.append(_Channel(
            constant=False,
            mean=mean,
            std=std,
            targets_std=z,
            dual_weights=cho_solve(factor, z),
        ))
    return GPRModel(
        params=params,
        t_min=t_min,
        t_span=t_span,
        train_inputs=x,
        train_targets=targets,
        channels=channels,
        image_size=image_size,
    )


def predict_boxes(model: GPRModel, times: Sequence[int]) -> list[BoundingBox]:
    """Posterior mean box at each requested frame.

    Queries landing exactly on a training time return the training box, so
    keyframes are reproduced bit for bit. Output widths and heights are
    floored at 1px and, when the model knows the canvas, boxes are clamped
    to it.
    """
    xq = model.normalize(times)
    k_star = rq_kernel(xq[:, None], model.train_inputs[None, :], model.params)
    out: list[BoundingBox] = []
    for row, x in enumerate(np.atleast_1d(xq)):
        snap = np.nonzero(np.isclose(model.train_inputs, x, rtol=0.0, atol=_SNAP_ATOL))[0]
        if snap.size:
            cx, cy, w, h = model.train_targets[snap[0]]
        else:
            vals = []
            for ch in model.channels:
                if ch.constant:
                    vals.append(ch.value)
                else:
                    vals.append(ch.mean + ch.std * float(k_star[row] @ ch.dual_weights))
            cx, cy, w, h = vals
        box = BoundingBox(cx, cy, max(w, 1.0), max(h, 1.0))
        if model.image_size is not None:
            width, height = model.image_size
            x1, y1, x2, y2 = box.corners()
            if x1 < 0 or y1 < 0 or x2 > width or y2 > height:
                box = clamp_box(box, width, height)
        out.append(box)
    return out


@dataclass(frozen=True)
class KeyframePlan:
    """The frames a user must annotate for one interpolation run."""

    start_frame: int
    end_frame: int
    interval: int
    keyframes: tuple[int, ...]
    label: str
    track_id: int | None = None

    @property
    def key(self) -> TrackKey:
        return TrackKey(self.label, self.track_id)


def build_keyframe_plan(
    start: int, end: int, interval: int, label: str, track_id: int | None = None
) -> KeyframePlan:
    """Interval-spaced keyframes from start, with the end frame always included."""
    if start >= end:
        raise ValidationError(f"start frame {start} must be before end frame {end}")
    if interval < 1:
        raise ValidationError(f"interval must be >= 1, got {interval}")
    if not label:
        raise ValidationError("label must be non-empty")
    if track_id is not None and track_id < 0:
        raise ValidationError(f"negative track id: {track_id}")
    frames = list(range(start, end, interval))
    if frames[-1] != end:
        frames.append(end)
    return KeyframePlan(
        start_frame=start,
        end_frame=end,
        interval=interval,
        keyframes=tuple(frames),
        label=label,
        track_id=track_id,
    )


@dataclass
class _Keyframe:
    frame: int
    box: BoundingBox


def collect_keyframe_boxes(
    project: ProjectIndex, plan: KeyframePlan
) -> tuple[list[_Keyframe], list[int]]:
    """Boxes present at plan keyframes for the plan's track, plus missing frames."""
    found: list[_Keyframe] = []
    missing: list[int] = []
    for k in plan.keyframes:
        frame = project.load(k)
        shape = frame.find_shape(plan.key) if frame is not None else None
        if shape is None:
            missing.append(k)
        else:
            found.append(_Keyframe(frame=k, box=shape.box))
    return found, missing


def interpolate_track(
    project: ProjectIndex,
    plan: KeyframePlan,
    params: RQKernelParams | None = None,
) -> dict[str, Any]:
    """Fill every non-keyframe in [start, end] with a generated box for the track.

    Keyframes are never altered; keyframes missing the track's box are
    skipped with a count as long as two remain, otherwise the run aborts
    with no writes. Existing boxes of the same (label, id) on in-between
    frames are replaced; everything else is untouched.
    """
    if plan.start_frame < 0 or plan.end_frame >= project.frame_count:
        raise ValidationError(
            f"plan range [{plan.start_frame}, {plan.end_frame}] outside project "
            f"of {project.frame_count} frames"
        )
    found, missing = collect_keyframe_boxes(project, plan)
    if len(found) < 2:
        raise PreconditionError(
            f"need at least 2 annotated keyframes for {plan.key}, found {len(found)}"
        )

    first = project.load(found[0].frame)
    image_size = (first.image_width, first.image_height)
    model = fit_gpr(
        [kf.frame for kf in found],
        [kf.box for kf in found],
        params,
        image_size=image_size,
    )

    keyframe_set = set(plan.keyframes)
    targets = [
        f for f in range(plan.start_frame, plan.end_frame + 1)
        if f not in keyframe_set
    ]
    boxes = predict_boxes(model, targets)

    generated = replaced = 0
    for f, box in zip(targets, boxes):
        frame = load_or_blank(project, f)
        existing = frame.find_shape(plan.key)
        if existing is not None:
            existing.points = box.to_points()
            replaced += 1
        else:
            frame.shapes.append(ShapeRecord.from_box(plan.label, plan.track_id, box))
        generated += 1
        project.save(f, frame)
    return {
        "generated": generated,
        "replaced": replaced,
        "skipped_keyframes_missing_box": len(missing),
    }
