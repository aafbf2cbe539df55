"""Local HTTP service exposing the editing loop to the CLI and the web UI.

All bodies are JSON. Errors come back as ``{"error_kind", "message",
"location"?}`` with 404 for missing files/sessions, 409 for state conflicts,
422 for parse/range problems and 502 for model failures. The service binds
loopback by default: it is a local developer tool, not a shared server.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import ServiceConfig
from .errors import (
    InvalidStateError,
    LlmError,
    ParseError,
    PipelineError,
    RangeError,
    SchemaError,
    SummaryShapeError,
)
from .grammar import LineRange, lint, parse, render, to_interchange
from .llm import HttpBackend, LlmClient, ScriptedBackend, Transcript
from .sessions import Session, SessionStore, Workspace


class CreateSessionBody(BaseModel):
    source_path: str


class TranslateBody(BaseModel):
    direction: str


class ZoomBody(BaseModel):
    op: str
    start: int
    end: int


class PseudocodeBody(BaseModel):
    text: str


def build_client(config: ServiceConfig) -> LlmClient:
    if config.transcript_path:
        return LlmClient(config.llm, ScriptedBackend(Transcript.load(config.transcript_path)))
    return LlmClient(config.llm, HttpBackend())


def _session_view(session: Session) -> dict:
    view: dict = {
        "session_id": session.id,
        "source_path": session.source.path,
        "source_text": session.source.text,
        "content_hash": session.source.content_hash,
        "program": None,
        "pending_preview": None,
        "pending_edits": [op.to_payload() for op in session.edits_since_baseline()],
        "history_length": len(session.history),
    }
    if session.program is not None:
        text, line_map = render(session.program)
        view["program"] = {
            "text": text,
            "interchange": to_interchange(session.program),
            "line_count": line_map.line_count,
            "line_kinds": [entry.kind for entry in line_map.entries],
            "warnings": lint(session.program),
        }
    if session.pending_preview is not None:
        preview = session.pending_preview
        view["pending_preview"] = {
            "status": preview.status,
            "new_source_text": preview.new_source_text,
            "hunks": [{"old_start": h.old_start, "old_lines": list(h.old_lines),
                       "new_start": h.new_start, "new_lines": list(h.new_lines)}
                      for h in preview.hunks],
            "unified": preview.unified_text(),
        }
    return view


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="codezoom", version="0.1.0")
    store = SessionStore(config.state_dir)
    workspace = Workspace(store, build_client(config))
    app.state.workspace = workspace
    app.state.config = config

    # -- error mapping ------------------------------------------------------

    def _error(status: int, kind: str, message: str, location: Optional[dict] = None):
        body: dict = {"error_kind": kind, "message": message}
        if location:
            body["location"] = location
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(ParseError)
    async def _parse_error(_: Request, exc: ParseError):
        return _error(422, "parse-error", str(exc),
                      {"line": exc.line, "column": exc.column})

    @app.exception_handler(RangeError)
    async def _range_error(_: Request, exc: RangeError):
        return _error(422, "range-error", str(exc))

    @app.exception_handler(SchemaError)
    async def _schema_error(_: Request, exc: SchemaError):
        return _error(422, "schema-error", str(exc), {"path": exc.path})

    @app.exception_handler(InvalidStateError)
    async def _state_error(_: Request, exc: InvalidStateError):
        return _error(409, "invalid-state", str(exc))

    @app.exception_handler(LlmError)
    async def _llm_error(_: Request, exc: LlmError):
        body = {"error_kind": f"llm-{exc.kind}", "message": exc.message}
        if exc.attempts:
            body["attempts"] = exc.attempts
        return JSONResponse(status_code=502, content=body)

    @app.exception_handler(PipelineError)
    async def _pipeline_error(_: Request, exc: PipelineError):
        return JSONResponse(status_code=502,
                            content={"error_kind": exc.kind, "message": exc.message,
                                     "attempts": exc.attempts})

    @app.exception_handler(SummaryShapeError)
    async def _summary_error(_: Request, exc: SummaryShapeError):
        return _error(502, "summary-shape", str(exc))

    @app.exception_handler(KeyError)
    async def _missing_session(_: Request, exc: KeyError):
        return _error(404, "not-found", str(exc.args[0]) if exc.args else "not found")

    # -- endpoints ------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if not os.path.exists(body.source_path):
            return _error(404, "not-found", f"no such file: {body.source_path}")
        try:
            session = workspace.create_session(body.source_path)
        except (OSError, UnicodeDecodeError) as exc:
            return _error(422, "unreadable", f"cannot read {body.source_path}: {exc}")
        return {"session_id": session.id}

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.list_ids()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(workspace.get(session_id))

    @app.post("/sessions/{session_id}/translate")
    def translate(session_id: str, body: TranslateBody):
        if body.direction not in ("to_pseudo", "to_code"):
            return _error(422, "bad-request",
                          "direction must be 'to_pseudo' or 'to_code'")
        session, result = workspace.translate(session_id, body.direction)
        view = _session_view(session)
        if body.direction == "to_pseudo":
            view["attempts"] = result.attempts
        return view

    @app.post("/sessions/{session_id}/zoom")
    def zoom(session_id: str, body: ZoomBody):
        if body.op not in ("expand", "collapse"):
            return _error(422, "bad-request", "op must be 'expand' or 'collapse'")
        result = workspace.zoom(session_id, body.op, LineRange(body.start, body.end))
        view = _session_view(workspace.get(session_id))
        view["changed_range"] = {"start": result.changed_range.start,
                                 "end": result.changed_range.end}
        view["used_cache"] = result.used_cache
        return view

    @app.put("/sessions/{session_id}/pseudocode")
    def put_pseudocode(session_id: str, body: PseudocodeBody):
        program = parse(body.text)
        ops = workspace.put_pseudocode(session_id, program)
        return {"edit_ops": [op.to_payload() for op in ops],
                "canonical_text": render(program)[0],
                "warnings": lint(program)}

    @app.post("/sessions/{session_id}/apply")
    def apply_edits(session_id: str):
        workspace.apply(session_id)
        return _session_view(workspace.get(session_id))

    @app.post("/sessions/{session_id}/preview/confirm")
    def confirm(session_id: str):
        session = workspace.confirm(session_id)
        return _session_view(session)

    @app.post("/sessions/{session_id}/preview/reject")
    def reject(session_id: str):
        session = workspace.reject(session_id)
        return _session_view(session)

    # -- static web UI ---------------------------------------------------------

    static_dir = config.static_dir
    if static_dir and os.path.isdir(static_dir):
        index_path = os.path.join(static_dir, "index.html")

        @app.get("/", include_in_schema=False)
        def index():
            return FileResponse(index_path)

        app.mount("/ui", StaticFiles(directory=static_dir), name="ui")

    return app
