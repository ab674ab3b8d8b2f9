"""HTTP surface of the trainer service.

JSON endpoints over an in-memory SessionStore (sessions do not survive the
process). Every error body is {"code": ..., "reason": ...}. The UI bundle, if
present, is served statically from the directory passed to create_app.

    POST /sessions                    {config, visibility} -> {id}
    GET  /sessions/{id}/state         -> snapshot
    POST /sessions/{id}/advance       {duration, controls[]} -> snapshot+results
    GET  /sessions/{id}/trajectory    -> {samples: [...]}
    POST /sessions/{id}/finish        -> snapshot
    GET  /sessions/{id}/score         -> report

Control JSON shapes: {"type": "present", "at": t, "element": i},
{"type": "set_auto_rate", "at": t, "rate": r}, {"type": "pause_auto", "at": t},
{"type": "probe", "at": t, "element": i}.
"""
from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import ConfigError
from .io import config_from_dict
from .trainer import (
    ApiError,
    Control,
    PauseAuto,
    Present,
    Probe,
    SessionStore,
    SetAutoRate,
    Visibility,
    trajectory_payload,
)

__all__ = ["create_app", "serve"]


class CreateSessionRequest(BaseModel):
    config: dict
    visibility: str = "instructor"


class ControlModel(BaseModel):
    type: str
    at: float
    element: int | None = None
    rate: float | None = None


class AdvanceRequest(BaseModel):
    duration: float
    controls: list[ControlModel] = []


def _to_control(model: ControlModel, idx: int) -> Control:
    if model.type == "present":
        if model.element is None:
            raise ApiError("invalid_control", f"control {idx}: present needs an element", 400)
        return Present(at=model.at, element=model.element)
    if model.type == "set_auto_rate":
        if model.rate is None:
            raise ApiError("invalid_control", f"control {idx}: set_auto_rate needs a rate", 400)
        return SetAutoRate(at=model.at, rate=model.rate)
    if model.type == "pause_auto":
        return PauseAuto(at=model.at)
    if model.type == "probe":
        if model.element is None:
            raise ApiError("invalid_control", f"control {idx}: probe needs an element", 400)
        return Probe(at=model.at, element=model.element)
    raise ApiError(
        "invalid_control",
        f"control {idx}: unknown type {model.type!r}; expected present, "
        f"set_auto_rate, pause_auto, or probe",
        400,
    )


def create_app(
    store: SessionStore | None = None, ui_dir: str | None = None
) -> FastAPI:
    app = FastAPI(title="forgetsim trainer", docs_url=None, redoc_url=None)
    sessions = store if store is not None else SessionStore()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            {"code": exc.code, "reason": exc.reason}, status_code=exc.http_status
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"code": "bad_request", "reason": str(exc.errors())}, status_code=400
        )

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            visibility = Visibility(req.visibility)
        except ValueError:
            raise ApiError(
                "invalid_config",
                f"visibility must be 'instructor' or 'blind', got {req.visibility!r}",
                400,
            ) from None
        try:
            config = config_from_dict(req.config)
            session = sessions.create(config, visibility)
        except ConfigError as exc:
            raise ApiError("invalid_config", str(exc), 400) from exc
        return {"id": session.id}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        return sessions.get(session_id).snapshot()

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, req: AdvanceRequest):
        session = sessions.get(session_id)
        controls = tuple(_to_control(c, i) for i, c in enumerate(req.controls))
        return session.advance(req.duration, controls)

    @app.get("/sessions/{session_id}/trajectory")
    def get_trajectory(session_id: str):
        session = sessions.get(session_id)
        return {"samples": trajectory_payload(session.trajectory())}

    @app.post("/sessions/{session_id}/finish")
    def finish(session_id: str):
        return sessions.get(session_id).finish()

    @app.get("/sessions/{session_id}/score")
    def score(session_id: str):
        return sessions.get(session_id).score()

    if ui_dir and os.path.isdir(ui_dir):
        # registered after the API routes, so those take precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | None = None,
    backend: str | None = None,
) -> None:
    import uvicorn

    app = create_app(store=SessionStore(backend=backend), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
