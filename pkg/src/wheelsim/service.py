"""Realtime session server.

One WebSocket connection drives one session: the client opens with Hello,
streams timestamped Input samples, and receives Welcome, FrameMsg, and a
final Ended{report}. Levels are served read-only over HTTP.

The loop ticks the simulation at a fixed wall rate but applies inputs by
their carried timestamps (zero-order hold keyed to sim time), so a session
is a pure function of the message sequence — wall-clock jitter moves frame
emission, never trajectory content.
"""

from __future__ import annotations

import asyncio
import logging
import os
from contextlib import asynccontextmanager
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .chair import ChairParams, JoystickSample
from .devices import default_calibration, normalize
from .errors import DecodeError, DescriptorMismatch, WheelsimError
from .level import Level, load_level_file
from .protocol import (
    ERR_BAD_MESSAGE,
    ERR_SESSION_ENDED,
    ERR_UNKNOWN_LEVEL,
    Ended,
    End,
    ErrorMsg,
    FrameMsg,
    Hello,
    Input,
    Welcome,
    decode_message,
    encode_message,
)
from .session import DEFAULT_MAX_DURATION, Frame, InputHold, Session
from .simulate import SimConfig

log = logging.getLogger("wheelsim.service")

LEVEL_DIR_ENV = "WHEELSIM_LEVEL_DIR"
DEFAULT_PORT = 8032

# Every 2nd tick is broadcast (60 Hz sim -> 30 Hz frames); event ticks always go out.
BROADCAST_DIVISOR = 2

# Upper bound on ticks run per scheduler wake, so a stalled loop catches up
# without starving the receiver/sender tasks.
MAX_CATCHUP = 32


def resolve_level_dir(level_dir=None) -> Path:
    if level_dir is not None:
        return Path(level_dir)
    return Path(os.environ.get(LEVEL_DIR_ENV, "levels"))


class LevelRegistry:
    """Immutable id -> Level map built once at startup."""

    def __init__(self, levels: dict[str, Level]):
        self._levels = dict(sorted(levels.items()))

    @classmethod
    def from_dir(cls, path) -> "LevelRegistry":
        levels: dict[str, Level] = {}
        path = Path(path)
        for f in sorted(path.glob("*.level.json")) if path.is_dir() else []:
            try:
                level = load_level_file(f)
            except WheelsimError as exc:
                log.warning("skipping %s: %s", f.name, exc)
                continue
            if level.id in levels:
                log.warning("skipping %s: duplicate level id '%s'", f.name, level.id)
                continue
            levels[level.id] = level
        return cls(levels)

    def get(self, level_id: str) -> Level | None:
        return self._levels.get(level_id)

    def ids(self) -> list[str]:
        return list(self._levels)

    def __len__(self) -> int:
        return len(self._levels)


class FrameSlot:
    """Latest-wins frame hand-off that never drops events.

    Ticks offer frames; the sender takes them. When the sender lags, newer
    state replaces older state but undelivered events accumulate, so each
    event reaches the client in exactly one FrameMsg.
    """

    def __init__(self) -> None:
        self._frame: Frame | None = None
        self._events: list = []
        self._ready = asyncio.Event()

    def offer(self, frame: Frame, deliver: bool) -> None:
        self._events.extend(frame.events)
        self._frame = frame
        if deliver or frame.events:
            self._ready.set()

    def pending(self) -> Frame | None:
        """Non-blocking take of whatever is due, if anything."""
        if not self._ready.is_set() or self._frame is None:
            return None
        frame = replace(self._frame, events=tuple(self._events))
        self._frame = None
        self._events = []
        self._ready.clear()
        return frame

    async def take(self) -> Frame:
        while True:
            await self._ready.wait()
            frame = self.pending()
            if frame is not None:
                return frame


def create_app(level_dir=None, *, params: ChairParams | None = None,
               cfg: SimConfig | None = None,
               max_duration: float = DEFAULT_MAX_DURATION,
               wall_dt: float | None = None,
               ui_dir=None) -> FastAPI:
    """Build the service app.

    wall_dt is the wall-clock tick period; None means realtime (equal to the
    sim dt). Tests pass a tiny value to run sessions faster than realtime —
    trajectories are unaffected by construction.

    ui_dir, when given, is a directory of static client assets mounted at
    /ui so the browser client is served from this same port.
    """
    chair_params = params or ChairParams()
    sim_cfg = cfg or SimConfig()
    tick_wall = sim_cfg.dt if wall_dt is None else wall_dt

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        # the loop handle lets signal handlers set shutdown from other threads
        app.state.loop = asyncio.get_running_loop()
        yield
        app.state.shutdown.set()
        await asyncio.sleep(0)

    app = FastAPI(lifespan=lifespan)
    app.state.registry = LevelRegistry.from_dir(resolve_level_dir(level_dir))
    app.state.shutdown = asyncio.Event()
    app.state.chair_params = chair_params
    app.state.sim_cfg = sim_cfg
    app.state.max_duration = max_duration
    app.state.tick_wall = tick_wall

    @app.get("/levels")
    async def list_levels():
        return [{"id": lid} for lid in app.state.registry.ids()]

    @app.get("/levels/{level_id}")
    async def get_level(level_id: str):
        level = app.state.registry.get(level_id)
        if level is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown level '{level_id}'"})
        return level.to_dict()

    @app.websocket("/session")
    async def session_ws(ws: WebSocket):
        await ws.accept()
        try:
            await _run_connection(app, ws)
        except WebSocketDisconnect:
            pass

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        ui_path = Path(ui_dir)
        if not ui_path.is_dir():
            raise ValueError(f"ui_dir '{ui_dir}' is not a directory")
        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


async def _recv_message(ws: WebSocket):
    msg = await ws.receive()
    if msg["type"] == "websocket.disconnect":
        raise WebSocketDisconnect(msg.get("code") or 1000)
    data = msg.get("text")
    if data is None:
        data = msg.get("bytes") or b""
    return decode_message(data)


async def _run_connection(app: FastAPI, ws: WebSocket) -> None:
    send_lock = asyncio.Lock()

    async def send(msg) -> None:
        async with send_lock:
            await ws.send_text(encode_message(msg))

    # Handshake: first message must be a well-formed Hello for a known level.
    try:
        hello = await _recv_message(ws)
    except DecodeError as exc:
        await send(ErrorMsg(code=ERR_BAD_MESSAGE, message=str(exc)))
        await ws.close()
        return
    if not isinstance(hello, Hello):
        await send(ErrorMsg(code=ERR_BAD_MESSAGE,
                            message="expected hello as the first message"))
        await ws.close()
        return
    level = app.state.registry.get(hello.level_id)
    if level is None:
        await send(ErrorMsg(code=ERR_UNKNOWN_LEVEL,
                            message=f"unknown level '{hello.level_id}'"))
        await ws.close()
        return

    descriptor = hello.device_descriptor
    calibration = hello.calibration
    if descriptor is not None and calibration is None:
        calibration = default_calibration(descriptor)

    session = Session(level, params=app.state.chair_params,
                      cfg=app.state.sim_cfg,
                      max_duration=app.state.max_duration)
    hold = InputHold()
    slot = FrameSlot()
    stop = asyncio.Event()

    await send(Welcome(level=level.to_dict(),
                       params={"chair": session.params.to_dict(),
                               "assist_gain": session.cfg.assist_gain,
                               "max_duration": session.max_duration},
                       dt=session.dt))

    def to_sample(inp: Input) -> tuple[float, float]:
        if descriptor is not None:
            s = normalize([int(a) for a in inp.axes], descriptor, calibration,
                          t=inp.t)
            return s.x, s.y
        if len(inp.axes) < 2:
            raise DescriptorMismatch("input needs at least 2 axes")
        x = min(max(inp.axes[0], -1.0), 1.0)
        y = min(max(inp.axes[1], -1.0), 1.0)
        return x, y

    async def receiver() -> None:
        while not stop.is_set():
            try:
                msg = await _recv_message(ws)
            except DecodeError as exc:
                await send(ErrorMsg(code=ERR_BAD_MESSAGE, message=str(exc)))
                continue
            except WebSocketDisconnect:
                session.end("disconnected")
                stop.set()
                return
            if isinstance(msg, Input):
                if session.ended:
                    await send(ErrorMsg(code=ERR_SESSION_ENDED,
                                        message="session already ended"))
                    continue
                try:
                    x, y = to_sample(msg)
                except (DescriptorMismatch, ValueError) as exc:
                    await send(ErrorMsg(code=ERR_BAD_MESSAGE, message=str(exc)))
                    continue
                hold.push(msg.t, x, y)
            elif isinstance(msg, End):
                session.end("ended")
                stop.set()
                return
            else:
                await send(ErrorMsg(
                    code=ERR_BAD_MESSAGE,
                    message=f"unexpected {type(msg).__name__.lower()} message"))

    async def ticker() -> None:
        loop = asyncio.get_running_loop()
        wall0 = loop.time()
        tick_wall = app.state.tick_wall
        shutdown: asyncio.Event = app.state.shutdown
        while not session.ended and not stop.is_set():
            if shutdown.is_set():
                session.end("server_shutdown")
                break
            if tick_wall > 0:
                now = loop.time()
                due = int((now - wall0) / tick_wall)
                if due <= session.tick_index:
                    target = wall0 + (session.tick_index + 1) * tick_wall
                    # Short sleeps keep shutdown/stop latency bounded.
                    await asyncio.sleep(min(max(target - now, 0.0), 0.05))
                    continue
                burst = min(due - session.tick_index, MAX_CATCHUP)
            else:
                burst = MAX_CATCHUP
            for _ in range(burst):
                if session.ended or stop.is_set():
                    break
                start_t = session.tick_index * session.dt
                x, y = hold.sample_at(start_t)
                frame = session.tick(JoystickSample(x=x, y=y, t=start_t))
                slot.offer(frame, deliver=frame.tick % BROADCAST_DIVISOR == 0)
            await asyncio.sleep(0)
        stop.set()

    async def sender() -> None:
        while True:
            frame = await slot.take()
            await send(FrameMsg(frame=frame))

    recv_task = asyncio.create_task(receiver())
    tick_task = asyncio.create_task(ticker())
    send_task = asyncio.create_task(sender())
    try:
        await stop.wait()
    finally:
        tick_task.cancel()
        recv_task.cancel()
        send_task.cancel()
        await asyncio.gather(tick_task, recv_task, send_task,
                             return_exceptions=True)

    session.end("disconnected")
    report = session.finalize()
    try:
        leftover = slot.pending()
        if leftover is not None:
            await send(FrameMsg(frame=leftover))
        await send(Ended(report=report))
        await ws.close()
    except (WebSocketDisconnect, RuntimeError):
        # Client went away first; the report still exists server-side.
        log.debug("session %s ended after disconnect", level.id)
