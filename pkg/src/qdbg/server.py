"""JSON wire protocol for debugger and real-time modes.

`handle` is a synchronous, total function from one client message to one
reply event; it never raises, which makes the protocol fuzzable without any
transport. The FastAPI app wires it to a WebSocket at /session and exposes
the stateless real-time path at POST /realtime. Blocking work runs in the
thread pool so one session's long step never stalls the event loop.

Session state lives in a SessionRegistry: token -> loaded program plus the
current DebugSession. Per-entry locks serialize concurrent ops on the same
session; distinct sessions proceed independently.
"""
from __future__ import annotations

import json
import threading
import uuid

try:
    from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
    from fastapi.concurrency import run_in_threadpool
    from fastapi.responses import JSONResponse
except ImportError:  # pragma: no cover
    # handle() works without fastapi; only create_app needs it. The names
    # must exist at module scope so route annotations resolve.
    FastAPI = Request = WebSocket = WebSocketDisconnect = None
    run_in_threadpool = JSONResponse = None

from .frontend import ast, check, parse
from .frontend.checker import executable_lines
from .render import NotReadyError, build_view, transform_view
from .trace import (
    REALTIME_MAX_EVENTS,
    REALTIME_WALL_CAP_S,
    BudgetExceededError,
    DebugSession,
    ProtocolError,
    Snapshot,
    UnknownFrameError,
    start_session,
)

REALTIME_TOO_LARGE = "program too large for real-time mode"


class _Entry:
    def __init__(self, token: str, source: str, program: ast.Program):
        self.token = token
        self.source = source
        self.program = program
        self.breakpoints: set[int] = set()
        self.session: DebugSession | None = None
        self.lock = threading.Lock()


class SessionRegistry:
    def __init__(self):
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def create(self, source: str, program: ast.Program) -> _Entry:
        entry = _Entry(uuid.uuid4().hex, source, program)
        with self._lock:
            self._entries[entry.token] = entry
        return entry

    def get(self, token: str) -> _Entry | None:
        with self._lock:
            return self._entries.get(token)

    def remove(self, token: str) -> bool:
        with self._lock:
            return self._entries.pop(token, None) is not None


def _error(code: str, message: str) -> dict:
    return {"ev": "error", "code": code, "message": message}


def _diagnostics(items) -> dict:
    return {"ev": "diagnostics", "items": [d.to_json_dict() for d in items]}


def _loaded(token: str, unbound) -> dict:
    return {"ev": "loaded", "token": token, "unbound_breakpoints": sorted(unbound)}


def _snapshot_event(snapshot: Snapshot) -> dict:
    if snapshot.status == "paused":
        return {"ev": "paused", "line": snapshot.line, "snapshot": snapshot.to_json_dict()}
    return {"ev": "finished", "snapshot": snapshot.to_json_dict()}


def handle(raw: str | bytes | dict, registry: SessionRegistry) -> dict:
    """Process one client message; always returns exactly one event."""
    try:
        return _dispatch(raw, registry)
    except Exception as e:  # protocol totality: a reply even for our own bugs
        return _error("internal", f"{type(e).__name__}: {e}")


def _dispatch(raw: str | bytes | dict, registry: SessionRegistry) -> dict:
    if isinstance(raw, dict):
        msg = raw
    else:
        try:
            msg = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError, TypeError):
            return _error("bad_json", "message is not valid JSON")
    if not isinstance(msg, dict):
        return _error("bad_message", "message must be a JSON object")
    op = msg.get("op")
    if not isinstance(op, str):
        return _error("bad_message", "missing or non-string 'op'")

    if op == "load":
        return _op_load(msg, registry)
    if op == "realtime":
        source = msg.get("source")
        if not isinstance(source, str):
            return _error("bad_message", "'source' must be a string")
        seed = msg.get("seed", 0)
        if not _is_int(seed):
            return _error("bad_message", "'seed' must be an integer")
        return realtime_update(source, seed)
    if op in ("breakpoints", "start", "next", "zoom", "detail", "stop"):
        token = msg.get("token")
        if not isinstance(token, str):
            return _error("bad_message", "missing or non-string 'token'")
        entry = registry.get(token)
        if entry is None:
            return _error("unknown_token", f"no session with token '{token}'")
        with entry.lock:
            if op == "breakpoints":
                return _op_breakpoints(msg, entry)
            if op == "start":
                return _op_start(msg, entry)
            if op == "next":
                return _op_next(entry)
            if op == "zoom":
                return _op_zoom(msg, entry)
            if op == "detail":
                return _op_detail(msg, entry)
            registry.remove(token)
            return {"ev": "stopped", "token": token}
    return _error("unknown_op", f"unknown op '{op}'")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _op_load(msg: dict, registry: SessionRegistry) -> dict:
    source = msg.get("source")
    if not isinstance(source, str):
        return _error("bad_message", "'source' must be a string")
    result = parse(ast.SourceProgram("<session>", source))
    if isinstance(result, list):
        return _diagnostics(result)
    diags = check(result)
    if diags:
        return _diagnostics(diags)
    entry = registry.create(source, result)
    return _loaded(entry.token, [])


def _op_breakpoints(msg: dict, entry: _Entry) -> dict:
    lines = msg.get("lines")
    if not isinstance(lines, list) or not all(_is_int(x) and x >= 1 for x in lines):
        return _error("bad_message", "'lines' must be a list of integers >= 1")
    entry.breakpoints = set(lines)
    unbound = entry.breakpoints - executable_lines(entry.program)
    return _loaded(entry.token, unbound)


def _op_start(msg: dict, entry: _Entry) -> dict:
    seed = msg.get("seed", 0)
    if not _is_int(seed):
        return _error("bad_message", "'seed' must be an integer")
    # A start while a session is live restarts from the current breakpoints.
    entry.session = start_session(entry.program, set(entry.breakpoints), seed)
    return _loaded(entry.token, entry.session.unbound_breakpoints)


def _op_next(entry: _Entry) -> dict:
    if entry.session is None:
        return _error("not_started", "send 'start' before 'next'")
    try:
        snapshot = entry.session.next()
    except ProtocolError:
        return _error("session_finished", "session already finished; restart with 'start'")
    except BudgetExceededError as e:
        return _error("budget_exceeded", str(e))
    return _snapshot_event(snapshot)


def _latest_snapshot(entry: _Entry) -> Snapshot | None:
    if entry.session is None or not entry.session.history:
        return None
    return entry.session.history[-1]


def _op_zoom(msg: dict, entry: _Entry) -> dict:
    frame = msg.get("frame")
    if not _is_int(frame):
        return _error("bad_message", "'frame' must be an integer")
    snapshot = _latest_snapshot(entry)
    if snapshot is None:
        return _error("not_started", "no snapshot yet; send 'start' then 'next'")
    try:
        rec = snapshot.frame_by_id(frame)
        if rec.kind == "transform_application":
            view = transform_view(snapshot, frame)
        else:
            view = build_view(snapshot, frame)
    except UnknownFrameError:
        return _error("unknown_frame", f"no frame {frame} in the current snapshot")
    except NotReadyError as e:
        return _error("transform_not_ready", str(e))
    return {"ev": "view", "frame": frame, "circuit": view.to_json_dict()}


def _op_detail(msg: dict, entry: _Entry) -> dict:
    frame = msg.get("frame")
    if not _is_int(frame):
        return _error("bad_message", "'frame' must be an integer")
    snapshot = _latest_snapshot(entry)
    if snapshot is None:
        return _error("not_started", "no snapshot yet; send 'start' then 'next'")
    try:
        rec = snapshot.frame_by_id(frame)
    except UnknownFrameError:
        return _error("unknown_frame", f"no frame {frame} in the current snapshot")
    output = None if rec.output is None else [v.to_json_dict() for v in rec.output]
    return {
        "ev": "detail",
        "frame": frame,
        "args": [[name, value] for name, value in rec.args],
        "output": output,
    }


def realtime_update(source: str, seed: int = 0) -> dict:
    """Parse, check and run in one shot under the tight real-time budget."""
    result = parse(ast.SourceProgram("<realtime>", source))
    if isinstance(result, list):
        return _diagnostics(result)
    diags = check(result)
    if diags:
        return _diagnostics(diags)
    session = start_session(
        result,
        frozenset(),
        seed,
        max_events=REALTIME_MAX_EVENTS,
        wall_cap=REALTIME_WALL_CAP_S,
    )
    try:
        snapshot = session.next()
    except BudgetExceededError:
        return _error("budget_exceeded", REALTIME_TOO_LARGE)
    event = _snapshot_event(snapshot)
    event["views"] = [
        {"frame": f.id, "circuit": build_view(snapshot, f.id).to_json_dict()}
        for f in snapshot.frames
        if f.kind == "qnode" and f.parent is None
    ]
    return event


def create_app(registry: SessionRegistry | None = None):
    """FastAPI app exposing /session (WebSocket) and /realtime (POST)."""
    if FastAPI is None:
        raise RuntimeError("fastapi is required to serve; install the package extras")

    app = FastAPI(title="qdbg")
    reg = registry if registry is not None else SessionRegistry()
    app.state.registry = reg

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        try:
            while True:
                raw = await ws.receive_text()
                reply = await run_in_threadpool(handle, raw, reg)
                await ws.send_text(json.dumps(reply))
        except WebSocketDisconnect:
            pass

    @app.post("/realtime")
    async def realtime_endpoint(request: Request):
        raw = await request.body()
        reply = await run_in_threadpool(handle, _as_realtime_msg(raw), reg)
        return JSONResponse(reply)

    return app


def _as_realtime_msg(raw: bytes) -> str | dict:
    """Recast a POST body {"source", "seed"?} as a realtime op message."""
    try:
        body = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return raw.decode("utf-8", errors="replace")  # handle() reports bad_json
    if isinstance(body, dict):
        body.setdefault("op", "realtime")
        body["op"] = "realtime"
    return body if isinstance(body, dict) else json.dumps(body)
