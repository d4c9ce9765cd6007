"""HTTP/WebSocket service around the engine and virtual controller.

One playback target per server: an Engine whose pose persists across
sessions, mirrored over the wire path to a VirtualController. Two clock
modes: "wall" free-runs a background ticker at the configured rate,
"virtual" advances only through POST /tick so tests and reproducible runs
control time exactly.

Telemetry is an event stream: {"t_ms", "angles", "status"} per tick, angles
one-decimal like the telemetry line format. WebSocket subscribers get a
snapshot of the current pose first, then the session's events (buffered ones
immediately, live ones as they happen).
"""

from __future__ import annotations

import asyncio
import json
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from mojikit import kernels
from mojikit.executor import IDLE, PLAYING, Engine
from mojikit.knowledge import (
    Affect,
    BehaviorPrimitive,
    Intent,
    Trigger,
    compute_stats,
    load_cards,
    load_patterns,
    query_patterns,
)
from mojikit.presets import PRESET_NAMES, load_preset, preset_text
from mojikit.protocol import Frame, Stop, compile_sequence_to_commands, encode_frame
from mojikit.sequence import (
    DocumentParseError,
    Sequence,
    import_sequence,
    validate_sequence,
)
from mojikit.simulator import VirtualController

DEFAULT_TICK_MS = 20


@dataclass
class Session:
    id: str
    name: str
    started_at_ms: int
    duration_ms: int
    blocks: int
    events: list[str] = field(default_factory=list)
    done: bool = False


@dataclass
class ServiceState:
    clock_mode: str
    tick_ms: int
    engine: Engine = field(default_factory=Engine)
    controller: VirtualController = field(default_factory=VirtualController)
    sessions: dict[str, Session] = field(default_factory=dict)
    current: Session | None = None
    pending_moves: list[tuple[int, Frame]] = field(default_factory=list)
    next_seq: int = 0
    session_counter: int = 0


def _event_json(t_ms: int, angles: list[float], status: str) -> str:
    rounded = [round(a, 1) + 0.0 for a in angles]
    return json.dumps({"t_ms": t_ms, "angles": rounded, "status": status},
                      separators=(",", ":"))


def _take_seq(state: ServiceState) -> int:
    seq = state.next_seq % 256
    state.next_seq += 1
    return seq


def _mirror_enqueue(state: ServiceState, seq_doc: Sequence) -> None:
    base = state.engine.clock_ms
    for tc in compile_sequence_to_commands(seq_doc):
        frame = Frame(_take_seq(state), tc.command)
        state.pending_moves.append((base + tc.at_ms, frame))


def _mirror_stop(state: ServiceState) -> None:
    state.pending_moves.clear()
    now = max(state.engine.clock_ms, state.controller.now_ms)
    state.controller.feed_frame(encode_frame(Frame(_take_seq(state), Stop())), now)


def _advance_one_tick(state: ServiceState) -> None:
    """One tick: deliver due mirror frames at their exact tags, advance the
    engine, record a telemetry event on the active session."""
    target = state.engine.clock_ms + state.tick_ms
    while state.pending_moves and state.pending_moves[0][0] <= target:
        tag, frame = state.pending_moves.pop(0)
        state.controller.feed_frame(encode_frame(frame), max(tag, state.controller.now_ms))
    pose = state.engine.tick(state.tick_ms)
    session = state.current
    if session is not None and not session.done:
        status = state.engine.status
        session.events.append(_event_json(state.engine.clock_ms, pose.vector(), status))
        if status != PLAYING:
            session.done = True
            if status == IDLE:
                state.current = None


def _error(status_code: int, kind: str, message: str, **extra) -> JSONResponse:
    payload = {"error": kind, "message": message}
    payload.update(extra)
    return JSONResponse(payload, status_code=status_code)


def create_app(clock: str = "wall", tick_ms: int = DEFAULT_TICK_MS) -> FastAPI:
    if clock not in ("wall", "virtual"):
        raise ValueError(f"clock must be 'wall' or 'virtual', got {clock!r}")
    if tick_ms <= 0:
        raise ValueError(f"tick_ms must be positive, got {tick_ms}")

    state = ServiceState(clock_mode=clock, tick_ms=tick_ms)
    cards = load_cards()
    patterns = load_patterns()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        ticker_task = None
        if state.clock_mode == "wall":
            async def ticker() -> None:
                interval = state.tick_ms / 1000.0
                while True:
                    await asyncio.sleep(interval)
                    _advance_one_tick(state)
            ticker_task = asyncio.create_task(ticker())
        try:
            yield
        finally:
            if ticker_task is not None:
                ticker_task.cancel()

    app = FastAPI(title="mojikit service", lifespan=lifespan)
    # the studio page is served by a separate static server on another port
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.service = state

    @app.get("/status")
    async def status() -> dict:
        return {
            "status": state.engine.status,
            "clock_ms": state.engine.clock_ms,
            "clock_mode": state.clock_mode,
            "tick_ms": state.tick_ms,
            "session": state.current.id if state.current else None,
            "kernel_backend": kernels.BACKEND,
        }

    @app.get("/presets")
    async def presets() -> dict:
        out = []
        for name in PRESET_NAMES:
            seq_doc = load_preset(name)
            out.append({
                "name": name,
                "blocks": seq_doc.block_count,
                "duration_ms": seq_doc.total_duration_ms,
                "structures": [t.structure.value for t in seq_doc.tracks],
            })
        return {"presets": out}

    @app.get("/presets/{name}")
    async def preset_document(name: str):
        if name not in PRESET_NAMES:
            return _error(404, "not_found", f"no preset named {name!r}")
        return PlainTextResponse(preset_text(name))

    @app.post("/validate")
    async def validate(request: Request):
        body = await request.body()
        try:
            seq_doc = import_sequence(body)
        except DocumentParseError as e:
            return _error(400, "parse", str(e))
        return validate_sequence(seq_doc).as_dict()

    @app.post("/play")
    async def play(request: Request):
        try:
            body = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as e:
            return _error(400, "parse", f"request body is not JSON: {e}")
        if not isinstance(body, dict):
            return _error(400, "parse", "request body must be an object")
        preset_name = body.get("preset")
        document = body.get("document")
        replace = bool(body.get("replace", False))
        if (preset_name is None) == (document is None):
            return _error(400, "usage", "provide exactly one of 'preset' or 'document'")

        if preset_name is not None:
            if preset_name not in PRESET_NAMES:
                return _error(404, "not_found", f"no preset named {preset_name!r}")
            seq_doc = load_preset(preset_name)
        else:
            if not isinstance(document, str):
                return _error(400, "parse", "'document' must be a string")
            try:
                seq_doc = import_sequence(document)
            except DocumentParseError as e:
                return _error(400, "parse", str(e))

        report = validate_sequence(seq_doc)
        if not report.ok:
            return _error(422, "validation", "sequence is invalid",
                          report=report.as_dict())

        if state.current is not None and not state.current.done:
            if not replace:
                return _error(409, "busy", f"session {state.current.id} is playing")
            state.engine.stop()
            _mirror_stop(state)
            state.current.events.append(_event_json(
                state.engine.clock_ms, state.engine.pose.vector(), state.engine.status))
            state.current.done = True
            state.current = None

        blocks = state.engine.enqueue(seq_doc)
        _mirror_enqueue(state, seq_doc)
        state.session_counter += 1
        session = Session(
            id=f"s{state.session_counter}",
            name=seq_doc.name,
            started_at_ms=state.engine.clock_ms,
            duration_ms=seq_doc.total_duration_ms,
            blocks=blocks,
        )
        state.sessions[session.id] = session
        state.current = session
        return {
            "session": session.id,
            "name": session.name,
            "blocks": blocks,
            "duration_ms": session.duration_ms,
            "started_at_ms": session.started_at_ms,
        }

    @app.post("/stop")
    async def stop(request: Request):
        raw = await request.body()
        session_id = None
        if raw:
            try:
                body = json.loads(raw)
            except json.JSONDecodeError as e:
                return _error(400, "parse", f"request body is not JSON: {e}")
            if isinstance(body, dict):
                session_id = body.get("session")
        if session_id is not None and session_id not in state.sessions:
            return _error(404, "not_found", f"no session {session_id!r}")
        # stopping an already-finished or absent session is idempotent success
        target = state.sessions.get(session_id) if session_id else state.current
        if target is None or target.done or target is not state.current:
            return {"status": state.engine.status,
                    "session": target.id if target else None}
        state.engine.stop()
        _mirror_stop(state)
        target.events.append(_event_json(
            state.engine.clock_ms, state.engine.pose.vector(), state.engine.status))
        target.done = True
        return {"status": state.engine.status, "session": target.id,
                "t_ms": state.engine.clock_ms}

    @app.post("/tick")
    async def tick(request: Request):
        if state.clock_mode != "virtual":
            return _error(409, "clock_mode", "manual ticking needs the virtual clock")
        raw = await request.body()
        ticks = 1
        if raw:
            try:
                body = json.loads(raw)
            except json.JSONDecodeError as e:
                return _error(400, "parse", f"request body is not JSON: {e}")
            if isinstance(body, dict) and "ticks" in body:
                ticks = body["ticks"]
        if not isinstance(ticks, int) or isinstance(ticks, bool) or ticks < 1:
            return _error(400, "usage", "'ticks' must be a positive integer")
        for _ in range(ticks):
            _advance_one_tick(state)
        return {
            "clock_ms": state.engine.clock_ms,
            "status": state.engine.status,
            "angles": [round(a, 1) + 0.0 for a in state.engine.pose.vector()],
            "controller_angles": [round(a, 1) + 0.0
                                  for a in state.controller.advance_to(state.engine.clock_ms)],
        }

    @app.websocket("/telemetry")
    async def telemetry(ws: WebSocket, session: str | None = Query(default=None)):
        await ws.accept()
        target = state.sessions.get(session) if session else state.current
        if session is not None and target is None:
            await ws.send_text(json.dumps(
                {"error": "not_found", "message": f"no session {session!r}"},
                separators=(",", ":")))
            await ws.close()
            return
        snapshot = _event_json(state.engine.clock_ms, state.engine.pose.vector(),
                               state.engine.status)
        try:
            await ws.send_text(snapshot)
            if target is None:
                await ws.close()
                return
            idx = 0
            while True:
                while idx < len(target.events):
                    await ws.send_text(target.events[idx])
                    idx += 1
                if target.done:
                    break
                await asyncio.sleep(0.005)
            await ws.close()
        except (WebSocketDisconnect, RuntimeError):
            # client went away mid-stream; nothing to clean up
            return

    @app.get("/cards")
    async def get_cards() -> dict:
        return {"cards": [c.as_dict() for c in cards]}

    @app.get("/cards/{card_id}")
    async def get_card(card_id: str):
        for c in cards:
            if c.id == card_id:
                return c.as_dict()
        return _error(404, "not_found", f"no card {card_id!r}")

    @app.get("/patterns")
    async def get_patterns(
        intent: Intent | None = Query(default=None),
        trigger: Trigger | None = Query(default=None),
        behavior: BehaviorPrimitive | None = Query(default=None),
        affect: Affect | None = Query(default=None),
        limit: int = Query(default=50, ge=1, le=100),
        offset: int = Query(default=0, ge=0),
    ) -> dict:
        matches = query_patterns(patterns, intent=intent, trigger=trigger,
                                 behavior=behavior, affect=affect)
        page = matches[offset:offset + limit]
        return {
            "total": len(matches),
            "offset": offset,
            "limit": limit,
            "patterns": [p.as_dict() for p in page],
        }

    @app.get("/stats")
    async def get_stats() -> dict:
        stats = compute_stats(patterns)
        return {
            "total": len(patterns),
            "dimensions": {
                dim: [{"category": r.category, "count": r.count, "percent": r.percent}
                      for r in rows]
                for dim, rows in stats.items()
            },
        }

    return app
