"""trackme: multi-object-tracking video annotation engine.

Per-frame JSON annotations with track IDs, Gaussian-process box
interpolation between keyframes, SORT-style ID association, batch range
edits, detection import and MOT export; usable as a library, CLI and local
HTTP service.
"""

from .association import (
    AssignmentResult,
    AssociationParams,
    KalmanTrack,
    iou,
    kalman_predict,
    kalman_update,
    run_association,
    solve_assignment,
)
from .batch_edit import ModificationRequest, modify_range
from .colors import color_for_key, hex_for_key
from .detections import import_detections
from .errors import ConflictError, PreconditionError, TrackmeError, ValidationError
from .interpolation import (
    GPRModel,
    KeyframePlan,
    RQKernelParams,
    build_keyframe_plan,
    fit_gpr,
    interpolate_track,
    predict_boxes,
    rq_kernel,
)
from .model import BoundingBox, FrameAnnotation, ShapeRecord, TrackKey
from .mot import export_mot
from .storage import (
    ProjectIndex,
    load_frame,
    open_project,
    save_frame,
    validate_project,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentResult",
    "AssociationParams",
    "BoundingBox",
    "ConflictError",
    "FrameAnnotation",
    "GPRModel",
    "KalmanTrack",
    "KeyframePlan",
    "ModificationRequest",
    "PreconditionError",
    "ProjectIndex",
    "RQKernelParams",
    "ShapeRecord",
    "TrackKey",
    "TrackmeError",
    "ValidationError",
    "build_keyframe_plan",
    "color_for_key",
    "export_mot",
    "fit_gpr",
    "hex_for_key",
    "import_detections",
    "interpolate_track",
    "iou",
    "kalman_predict",
    "kalman_update",
    "load_frame",
    "modify_range",
    "open_project",
    "predict_boxes",
    "rq_kernel",
    "run_association",
    "save_frame",
    "solve_assignment",
    "validate_project",
]
