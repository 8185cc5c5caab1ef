"""HTTP session API over the annotation service.

Endpoints:
  POST /sessions                    create (body: {"text": ... | "lines": [...], "text_id": ...})
  GET  /sessions/{id}               state
  GET  /sessions/{id}/actions       legal actions + hint
  POST /sessions/{id}/decisions     apply a shift/reduce decision
  POST /sessions/{id}/undo          undo last decision
  POST /sessions/{id}/finalize      finalize; returns the ARTR and log
  GET  /sessions/{id}/log           export the annotation log document

Error bodies carry machine-readable codes: {"code": ..., "message": ...}.
"""

import os
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import jsonio, service
from .errors import ArsgError, SessionNotFound

_STATUS = {
    "IllegalShift": 409,
    "IncompleteReduce": 422,
    "SessionClosed": 409,
    "NothingToUndo": 409,
    "NotReducedToRoot": 409,
    "NoLexicalCores": 422,
    "SessionNotFound": 404,
    "EmptyInput": 422,
}


def create_app(dkb, cue_lexicon, grammar=None, overrides=None, token=None):
    app = FastAPI(title="arsg annotation service")
    sessions = {}
    locks = {}
    registry_lock = threading.Lock()
    token = token if token is not None else os.environ.get("ARSG_TOKEN")

    @app.exception_handler(ArsgError)
    async def _arsg_error(_request, exc):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 400),
            content={"code": exc.code, "message": str(exc)},
        )

    @app.middleware("http")
    async def _auth(request: Request, call_next):
        if token and request.headers.get("x-arsg-token") != token:
            return JSONResponse(
                status_code=401,
                content={"code": "Unauthorized", "message": "bad or missing token"},
            )
        return await call_next(request)

    def _get(session_id):
        session = sessions.get(session_id)
        if session is None:
            raise SessionNotFound("no session %r" % session_id)
        return session

    def _lock(session_id):
        with registry_lock:
            return locks.setdefault(session_id, threading.Lock())

    @app.post("/sessions")
    def create(body: dict):
        text = body.get("lines") or body.get("text")
        session = service.create_session(
            text,
            dkb,
            cue_lexicon,
            overrides=overrides,
            text_id=body.get("text_id"),
            grammar=grammar,
        )
        with registry_lock:
            sessions[session.id] = session
            locks[session.id] = threading.Lock()
        return service.view_state(session)

    @app.get("/sessions/{session_id}")
    def state(session_id: str):
        return service.view_state(_get(session_id))

    @app.get("/sessions/{session_id}/actions")
    def actions(session_id: str):
        session = _get(session_id)
        return {
            "legal": service.legal_actions(session),
            "hint": service.suggested_action(session),
        }

    @app.post("/sessions/{session_id}/decisions")
    def decide(session_id: str, body: dict):
        session = _get(session_id)
        with _lock(session_id):
            service.apply_decision(session, body)
            return service.view_state(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = _get(session_id)
        with _lock(session_id):
            service.undo(session)
            return service.view_state(session)

    @app.post("/sessions/{session_id}/finalize")
    def finalize(session_id: str):
        session = _get(session_id)
        with _lock(session_id):
            artr, log = service.finalize(session)
            return {"artr": artr.to_json(), "log": log.to_json()}

    @app.get("/sessions/{session_id}/log")
    def export_log(session_id: str):
        session = _get(session_id)
        if session.status == service.FINALIZED:
            from .learner import AnnotationLog

            log = AnnotationLog(
                text_id=session.text_id,
                basic_roots=tuple(session.basic_roots),
                events=tuple(session.events),
                artr=session.stack[0],
                schema=session.schema,
            )
            # canonical document, byte-stable across identical scripts
            return JSONResponse(content=jsonio.loads(jsonio.dumps(log.to_json())))
        return JSONResponse(content=service.session_log(session))

    return app
