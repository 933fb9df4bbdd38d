"""Local HTTP service exposing one project to the browser UI.

One process serves one project directory. Reads are lock-free; every
mutation takes the project's write lock without blocking, so a second
conflicting mutation gets 409 instead of interleaving writes. During an
interpolation session, navigation is restricted to the session's keyframes:
other targets are answered with the nearest keyframe (ties toward the
session start).
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .association import AssociationParams, run_association
from .batch_edit import ModificationRequest, modify_range
from .colors import color_for_key, hex_for_key
from .config import load_project_config
from .errors import PreconditionError, TrackmeError
from .interpolation import (
    KeyframePlan,
    RQKernelParams,
    build_keyframe_plan,
    collect_keyframe_boxes,
    interpolate_track,
)
from .model import TrackKey
from .storage import (
    ProjectIndex,
    blank_frame,
    frame_from_dict,
    frame_to_dict,
    open_project,
    save_frame,
)

DEFAULT_PORT = 7654
DEFAULT_HOST = "127.0.0.1"


def navigation_guard(keyframes: tuple[int, ...], requested: int) -> int:
    """Allowed frame for a navigation request during a session.

    Keyframes pass through; anything else redirects to the nearest keyframe,
    ties resolved toward the session start.
    """
    if requested in keyframes:
        return requested
    return min(keyframes, key=lambda k: (abs(k - requested), k))


@dataclass
class InterpolationSession:
    session_id: str
    plan: KeyframePlan

    def completed_keyframes(self, project: ProjectIndex) -> list[int]:
        found, _ = collect_keyframe_boxes(project, self.plan)
        return [kf.frame for kf in found]


@dataclass
class AppState:
    project: ProjectIndex
    current_frame: int = 0
    session: InterpolationSession | None = None
    association_running: bool = False
    write_lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def editing_status(self) -> str:
        if self.association_running:
            return "association_running"
        if self.session is not None:
            return "interpolation_session"
        return "idle"

    def navigation(self) -> dict[str, Any]:
        pending = False
        if self.session is not None:
            pending = len(self.session.completed_keyframes(self.project)) >= 2
        return {
            "current_frame": self.current_frame,
            "total_frames": self.project.frame_count,
            "editing_status": self.editing_status,
            "pending_confirmation": pending,
        }

    def session_payload(self) -> dict[str, Any] | None:
        if self.session is None:
            return None
        plan = self.session.plan
        return {
            "session_id": self.session.session_id,
            "start_frame": plan.start_frame,
            "end_frame": plan.end_frame,
            "interval": plan.interval,
            "keyframes": list(plan.keyframes),
            "label": plan.label,
            "track_id": plan.track_id,
            "completed_keyframes": self.session.completed_keyframes(self.project),
        }


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def create_app(project_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    project = open_project(project_dir)
    state = AppState(project=project)
    app = FastAPI(title="trackme", version="0.1.0")
    app.state.trackme = state

    def config():
        return load_project_config(project.root)

    @app.exception_handler(TrackmeError)
    def _trackme_error(_, exc: TrackmeError):
        if isinstance(exc, PreconditionError):
            return _error(422, str(exc))
        return _error(400, str(exc))

    def _check_frame_index(i: int):
        if not 0 <= i < project.frame_count:
            return _error(404, f"unknown frame {i}")
        return None

    @app.get("/api/project")
    def get_project():
        return {
            "root": str(project.root),
            "frame_count": project.frame_count,
            "frames": [
                {
                    "index": i,
                    "image": project.frame_paths[i].name,
                    "annotated": project.annotation_exists(i),
                }
                for i in range(project.frame_count)
            ],
            "navigation": state.navigation(),
            "session": state.session_payload(),
        }

    @app.get("/api/frames/{i}")
    def get_frame(i: int):
        bad = _check_frame_index(i)
        if bad:
            return bad
        if project.annotation_exists(i):
            return json.loads(project.annotation_paths[i].read_text(encoding="utf-8"))
        return frame_to_dict(blank_frame(project, i))

    @app.put("/api/frames/{i}")
    def put_frame(i: int, body: dict = Body(...)):
        bad = _check_frame_index(i)
        if bad:
            return bad
        frame = frame_from_dict(body, origin=f"frame {i}")
        frame.check_invariants()
        if not state.write_lock.acquire(blocking=False):
            return _error(409, "another mutation is in progress")
        try:
            save_frame(frame, project.annotation_paths[i])
        finally:
            state.write_lock.release()
        return {"saved": i, "shapes": len(frame.shapes)}

    @app.get("/api/frames/{i}/image")
    def get_image(i: int):
        bad = _check_frame_index(i)
        if bad:
            return bad
        return FileResponse(project.frame_paths[i])

    @app.post("/api/navigate")
    def navigate(body: dict = Body(...)):
        if "frame" not in body:
            return _error(400, "body needs 'frame'")
        requested = int(body["frame"])
        bad = _check_frame_index(requested)
        if bad:
            return bad
        landed = requested
        if state.session is not None:
            landed = navigation_guard(state.session.plan.keyframes, requested)
        state.current_frame = landed
        return {
            "frame": landed,
            "redirected": landed != requested,
            "navigation": state.navigation(),
        }

    @app.post("/api/interpolation/sessions")
    def create_session(body: dict = Body(...)):
        if state.session is not None:
            return _error(409, "an interpolation session is already active")
        try:
            plan = build_keyframe_plan(
                start=int(body["start_frame"]),
                end=int(body["end_frame"]),
                interval=int(body["interval"]),
                label=body["label"],
                track_id=body.get("track_id"),
            )
        except KeyError as e:
            return _error(400, f"missing field {e}")
        if plan.end_frame >= project.frame_count:
            return _error(400, "plan extends past the last frame")
        state.session = InterpolationSession(session_id=uuid.uuid4().hex, plan=plan)
        state.current_frame = navigation_guard(plan.keyframes, state.current_frame)
        return JSONResponse(status_code=201, content=state.session_payload())

    @app.post("/api/interpolation/sessions/{session_id}/finish")
    def finish_session(session_id: str):
        if state.session is None or state.session.session_id != session_id:
            return _error(404, "no such session")
        if not state.write_lock.acquire(blocking=False):
            return _error(409, "another mutation is in progress")
        try:
            cfg = config()
            summary = interpolate_track(
                project, state.session.plan, RQKernelParams.from_config(cfg)
            )
        finally:
            state.write_lock.release()
        state.session = None  # only on success; 422 keeps the session alive
        return {"summary": summary}

    @app.delete("/api/interpolation/sessions/{session_id}")
    def cancel_session(session_id: str):
        if state.session is None or state.session.session_id != session_id:
            return _error(404, "no such session")
        state.session = None
        return {"cancelled": session_id}

    @app.post("/api/associate")
    def associate(body: dict = Body(default={})):
        mode = body.get("mode", "scratch")
        current = int(body.get("frame", 0))
        end = body.get("end_frame")
        end = None if end is None else int(end)
        method = body.get("method", "sort")
        stream = bool(body.get("stream", False))
        if state.session is not None:
            return _error(409, "finish or cancel the interpolation session first")
        if not state.write_lock.acquire(blocking=False):
            return _error(409, "another mutation is in progress")
        params = AssociationParams.from_config(config())

        if not stream:
            state.association_running = True
            try:
                summary = run_association(
                    project, mode, current, end, params, method=method
                )
            finally:
                state.association_running = False
                state.write_lock.release()
            return {"summary": summary}

        q: queue.Queue = queue.Queue()

        def worker():
            state.association_running = True
            try:
                summary = run_association(
                    project, mode, current, end, params, method=method,
                    progress=lambda done, total: q.put(
                        {"progress": {"done": done, "total": total}}
                    ),
                )
                q.put({"summary": summary})
            except TrackmeError as e:
                q.put({"error": str(e)})
            finally:
                state.association_running = False
                state.write_lock.release()
                q.put(None)

        threading.Thread(target=worker, daemon=True).start()

        def lines():
            while (item := q.get()) is not None:
                yield json.dumps(item) + "\n"

        return StreamingResponse(lines(), media_type="application/x-ndjson")

    @app.post("/api/modify")
    def modify(body: dict = Body(...)):
        try:
            req = ModificationRequest(
                start_frame=int(body["start_frame"]),
                end_frame=int(body["end_frame"]),
                mode=str(body["mode"]).replace("-", "_"),
                target_label=body.get("target_label"),
                target_id=body.get("target_id"),
                new_label=body.get("new_label"),
                new_id=body.get("new_id"),
            )
        except KeyError as e:
            return _error(400, f"missing field {e}")
        if not state.write_lock.acquire(blocking=False):
            return _error(409, "another mutation is in progress")
        try:
            summary = modify_range(project, req)
        finally:
            state.write_lock.release()
        return {"summary": summary}

    @app.get("/api/colors")
    def colors(label: str, id: int | None = None):
        key = TrackKey(label, id)
        r, g, b = color_for_key(key)
        return {
            "label": label,
            "track_id": id,
            "color": [r, g, b],
            "hex": hex_for_key(key),
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    project_dir: str | Path,
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
    ui_dir: str | Path | None = None,
) -> None:
    import uvicorn

    uvicorn.run(create_app(project_dir, ui_dir=ui_dir), host=host, port=port)
