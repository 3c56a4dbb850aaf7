"""HTTP face of a session: one net, one evolving state, stepped over the wire.

The server wraps a single Session.  Reads return snapshots of its
state; mutations (fire / reverse / undo / reset) are serialized by a
lock, so concurrent clients always observe a consistent session.
Disabled actions come back as 409 with the enabled sets at the moment
of refusal, never as a changed state.
"""

import threading
from pathlib import Path
from typing import Literal, Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .dsl import state_json
from .model import Marking, Net
from .semantics import HomelessComponentError, NotEnabledError
from .session import EmptyUndoError, Session, format_trace

__all__ = ["create_app", "serve"]


class FireRequest(BaseModel):
    transition: str


class ReverseRequest(BaseModel):
    transition: str
    mode: Literal["bt", "co", "o"]


def _label_dict(lab) -> dict:
    return {
        "bases": sorted(lab.bases),
        "bonds": sorted(sorted(b.ends) for b in lab.bonds),
        "neg_bases": sorted(lab.neg_bases),
        "neg_bonds": sorted(sorted(b.ends) for b in lab.neg_bonds),
    }


def net_dict(net: Net, m0: Marking) -> dict:
    """Static description of the net, arcs and initial marking included."""
    arcs = []
    for place, t in sorted(net.arcs_in):
        entry = {"source": place, "target": t, "kind": "in"}
        entry.update(_label_dict(net.arcs_in[(place, t)]))
        arcs.append(entry)
    for t, place in sorted(net.arcs_out):
        entry = {"source": t, "target": place, "kind": "out"}
        entry.update(_label_dict(net.arcs_out[(t, place)]))
        arcs.append(entry)
    return {
        "name": net.name,
        "bases": sorted(net.bases),
        "places": sorted(net.places),
        "transitions": sorted(net.transitions),
        "arcs": arcs,
        "initial": {
            place: {
                "bases": sorted(m0[place].bases),
                "bonds": sorted(sorted(b.ends) for b in m0[place].bonds),
            }
            for place in sorted(net.places)
        },
    }


def create_app(session: Session, static_dir: Optional[Path] = None) -> FastAPI:
    """Build the API around one session.

    If static_dir points at a built UI, it is served at / alongside the
    API routes.
    """
    app = FastAPI(title=f"rpn: {session.net.name}")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    lock = threading.Lock()

    def state_response() -> Response:
        return Response(
            content=state_json(session.net, session.current),
            media_type="application/json",
        )

    def not_enabled(action) -> JSONResponse:
        return JSONResponse(
            status_code=409,
            content={
                "error": "NOT-ENABLED",
                "action": str(action),
                "enabled": session.enabled(),
            },
        )

    ### reads

    @app.get("/net")
    def get_net() -> dict:
        return net_dict(session.net, session.m0)

    @app.get("/state")
    def get_state() -> Response:
        with lock:
            return state_response()

    @app.get("/enabled")
    def get_enabled() -> dict:
        with lock:
            return session.enabled()

    @app.get("/trace")
    def get_trace() -> dict:
        with lock:
            return {
                "trace": format_trace(session.log.actions),
                "actions": [
                    {
                        "transition": a.transition,
                        "direction": a.direction,
                        "mode": a.mode,
                    }
                    for a in session.log.actions
                ],
            }

    ### mutations

    @app.post("/fire")
    def post_fire(req: FireRequest) -> Response:
        with lock:
            try:
                session.fire(req.transition)
            except NotEnabledError as e:
                return not_enabled(e.action)
            return state_response()

    @app.post("/reverse")
    def post_reverse(req: ReverseRequest) -> Response:
        with lock:
            try:
                session.reverse(req.transition, req.mode)
            except NotEnabledError as e:
                return not_enabled(e.action)
            except HomelessComponentError as e:
                return JSONResponse(
                    status_code=409, content={"error": "NO-HOME", "detail": str(e)}
                )
            return state_response()

    @app.post("/undo")
    def post_undo() -> Response:
        with lock:
            try:
                session.undo()
            except EmptyUndoError:
                return JSONResponse(status_code=409, content={"error": "EMPTY-UNDO"})
            return state_response()

    @app.post("/reset")
    def post_reset() -> Response:
        with lock:
            session.reset()
            return state_response()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(
    session: Session,
    port: int,
    host: str = "127.0.0.1",
    static_dir: Optional[Path] = None,
) -> None:
    """Run the API until interrupted; one session per server instance."""
    import uvicorn

    uvicorn.run(create_app(session, static_dir), host=host, port=port, log_level="info")
