"""Session state machine: composes the simulation step with route tracking,
waypoint/goal detection, feedback events, and the end-of-run report.

Time bookkeeping is integer ticks (fixed dt); seconds are derived, so
splitting a run at any tick and resuming from the saved state reproduces
the unsplit metrics exactly.
"""

from __future__ import annotations

import datetime as _dt
import heapq
import json
from dataclasses import dataclass, replace

from .chair import ChairParams, ChairState, JoystickSample
from .errors import DecodeError, SessionEnded, SessionNotEnded
from .events import EventKind, SimEvent
from .fileio import atomic_write_text
from .level import Level
from .simulate import SimConfig, step

DEFAULT_MAX_DURATION = 180.0    # seconds; sessions are a few minutes by design


@dataclass(frozen=True)
class SessionMetrics:
    elapsed: float
    on_route_time: float
    off_route_time: float
    collision_count: int
    waypoints_hit: int
    completed: bool
    completion_time: float | None = None

    def to_dict(self) -> dict:
        d = {
            "elapsed": self.elapsed,
            "on_route_time": self.on_route_time,
            "off_route_time": self.off_route_time,
            "collision_count": self.collision_count,
            "waypoints_hit": self.waypoints_hit,
            "completed": self.completed,
        }
        if self.completion_time is not None:
            d["completion_time"] = self.completion_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SessionMetrics":
        try:
            return cls(
                elapsed=float(d["elapsed"]),
                on_route_time=float(d["on_route_time"]),
                off_route_time=float(d["off_route_time"]),
                collision_count=int(d["collision_count"]),
                waypoints_hit=int(d["waypoints_hit"]),
                completed=bool(d["completed"]),
                completion_time=(float(d["completion_time"])
                                 if "completion_time" in d else None),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"metrics: {exc!r}") from exc


@dataclass(frozen=True)
class Frame:
    """One broadcastable snapshot: state after a tick plus that tick's events."""

    tick: int
    sim_time: float
    chair: ChairState
    on_track: bool
    events: tuple[SimEvent, ...]
    metrics: SessionMetrics

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "sim_time": self.sim_time,
            "chair": self.chair.to_dict(),
            "on_track": self.on_track,
            "events": [e.to_dict() for e in self.events],
            "metrics": self.metrics.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Frame":
        try:
            return cls(
                tick=int(d["tick"]),
                sim_time=float(d["sim_time"]),
                chair=ChairState.from_dict(d["chair"]),
                on_track=bool(d["on_track"]),
                events=tuple(SimEvent.from_dict(e) for e in d["events"]),
                metrics=SessionMetrics.from_dict(d["metrics"]),
            )
        except DecodeError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"frame: {exc!r}") from exc


@dataclass(frozen=True)
class SessionReport:
    """Immutable end-of-session record; enough to replay the run."""

    level_id: str
    params: dict
    metrics: SessionMetrics
    events: tuple[SimEvent, ...]
    trace: tuple[tuple[float, float], ...]   # applied (x, y) per tick
    end_reason: str
    created_at: str

    def to_dict(self) -> dict:
        d = self.canonical_body()
        d["created_at"] = self.created_at
        return d

    def canonical_body(self) -> dict:
        """Report content minus wall-clock metadata."""
        return {
            "level_id": self.level_id,
            "params": self.params,
            "metrics": self.metrics.to_dict(),
            "events": [e.to_dict() for e in self.events],
            "trace": [list(s) for s in self.trace],
            "end_reason": self.end_reason,
        }

    def canonical_json(self) -> str:
        """Deterministic byte form: same run, same bytes."""
        return json.dumps(self.canonical_body(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "SessionReport":
        try:
            return cls(
                level_id=str(d["level_id"]),
                params=dict(d["params"]),
                metrics=SessionMetrics.from_dict(d["metrics"]),
                events=tuple(SimEvent.from_dict(e) for e in d["events"]),
                trace=tuple((float(x), float(y)) for x, y in d["trace"]),
                end_reason=str(d.get("end_reason", "")),
                created_at=str(d.get("created_at", "")),
            )
        except DecodeError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"report: {exc!r}") from exc


def save_report_file(report: SessionReport, path) -> None:
    atomic_write_text(path, json.dumps(report.to_dict(), indent=2,
                                       sort_keys=True) + "\n")


def load_report_file(path) -> SessionReport:
    with open(path, "r", encoding="utf-8") as fh:
        return SessionReport.from_dict(json.load(fh))


class Session:
    """Single-owner driving session over one level.

    Construct, call ``tick`` once per fixed timestep with the held joystick
    sample, and ``finalize`` after it ends (completion, timeout, or an
    explicit ``end``).
    """

    def __init__(self, level: Level, params: ChairParams | None = None,
                 cfg: SimConfig | None = None,
                 max_duration: float = DEFAULT_MAX_DURATION):
        if max_duration <= 0.0:
            raise ValueError("max_duration must be > 0")
        self.level = level
        self.params = params or ChairParams()
        self.cfg = cfg or SimConfig()
        self.max_duration = max_duration
        sx, sy, sh = level.start_pose
        self.state = ChairState(x=sx, y=sy, heading=sh)
        self.tick_index = 0
        self.on_track = level.is_on_track((sx, sy))
        self.next_waypoint = 0
        self.on_ticks = 0
        self.off_ticks = 0
        self.collision_count = 0
        self.waypoints_hit = 0
        self.completed = False
        self.completion_tick: int | None = None
        self.ended = False
        self.end_reason: str | None = None
        self.event_log: list[SimEvent] = []
        self.trace: list[tuple[float, float]] = []

    @property
    def dt(self) -> float:
        return self.cfg.dt

    @property
    def sim_time(self) -> float:
        return self.tick_index * self.cfg.dt

    def metrics(self) -> SessionMetrics:
        dt = self.cfg.dt
        return SessionMetrics(
            elapsed=self.tick_index * dt,
            on_route_time=self.on_ticks * dt,
            off_route_time=self.off_ticks * dt,
            collision_count=self.collision_count,
            waypoints_hit=self.waypoints_hit,
            completed=self.completed,
            completion_time=(None if self.completion_tick is None
                             else self.completion_tick * dt),
        )

    def tick(self, sample: JoystickSample) -> Frame:
        if self.ended:
            raise SessionEnded("session already ended")
        nxt, step_events = step(self.state, sample, self.level, self.params,
                                self.cfg)
        self.state = nxt
        self.tick_index += 1
        tick = self.tick_index
        self.trace.append((sample.x, sample.y))

        events = [replace(e, tick=tick) for e in step_events]
        self.collision_count += sum(
            1 for e in step_events if e.kind is EventKind.COLLISION)

        on = self.level.is_on_track((nxt.x, nxt.y))
        if on:
            self.on_ticks += 1
        else:
            self.off_ticks += 1
        if on != self.on_track:
            if on:
                events.append(SimEvent(kind=EventKind.ON_TRACK_ENTERED, tick=tick))
                events.append(SimEvent(kind=EventKind.REWARD_SHOWN, tick=tick))
            else:
                events.append(SimEvent(kind=EventKind.ON_TRACK_EXITED, tick=tick))
            self.on_track = on

        # Waypoints count in order; driving into a later circle first skips
        # the ones before it for good.
        for i in range(self.next_waypoint, len(self.level.waypoints)):
            w = self.level.waypoints[i]
            if (nxt.x - w.cx) ** 2 + (nxt.y - w.cy) ** 2 < w.r * w.r:
                events.append(SimEvent(kind=EventKind.WAYPOINT_REACHED,
                                       tick=tick, index=i))
                self.waypoints_hit += 1
                self.next_waypoint = i + 1
                break

        if self.level.goal_reached(nxt):
            self.completed = True
            self.completion_tick = tick
            events.append(SimEvent(kind=EventKind.LEVEL_COMPLETED, tick=tick))
            self.ended = True
            self.end_reason = "completed"
        elif tick * self.cfg.dt >= self.max_duration:
            events.append(SimEvent(kind=EventKind.SESSION_TIMEOUT, tick=tick))
            self.ended = True
            self.end_reason = "timeout"

        self.event_log.extend(events)
        return Frame(tick=tick, sim_time=tick * self.cfg.dt, chair=nxt,
                     on_track=on, events=tuple(events),
                     metrics=self.metrics())

    def end(self, reason: str = "ended") -> None:
        """Terminate externally (client hang-up, operator stop)."""
        if not self.ended:
            self.ended = True
            self.end_reason = reason

    def finalize(self) -> SessionReport:
        if not self.ended:
            raise SessionNotEnded("finalize requires an ended session")
        params = {
            "chair": self.params.to_dict(),
            "dt": self.cfg.dt,
            "assist_gain": self.cfg.assist_gain,
            "max_duration": self.max_duration,
        }
        return SessionReport(
            level_id=self.level.id,
            params=params,
            metrics=self.metrics(),
            events=tuple(self.event_log),
            trace=tuple(self.trace),
            end_reason=self.end_reason or "ended",
            created_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
        )


def session_tick(session: Session, sample: JoystickSample) -> tuple[Session, Frame]:
    """Advance one tick; the session object is updated in place and returned."""
    frame = session.tick(sample)
    return session, frame


def finalize(session: Session) -> SessionReport:
    return session.finalize()


class InputHold:
    """Zero-order hold over timestamped samples.

    Push samples as they arrive; ``sample_at`` returns the latest sample
    scheduled at or before the given sim time (initially neutral). Keying the
    hold to the sample's own timestamp instead of arrival wall time makes a
    run a pure function of the message sequence.
    """

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, float, float]] = []
        self._seq = 0
        self._current = (0.0, 0.0)

    def push(self, t: float, x: float, y: float) -> None:
        heapq.heappush(self._heap, (t, self._seq, x, y))
        self._seq += 1

    def sample_at(self, sim_time: float) -> tuple[float, float]:
        while self._heap and self._heap[0][0] <= sim_time:
            _, _, x, y = heapq.heappop(self._heap)
            self._current = (x, y)
        return self._current


def run_headless(session: Session, hold: InputHold,
                 on_frame=None) -> SessionReport:
    """Drive a session to termination as fast as the CPU allows.

    The sample applied during tick k is the hold's value at the tick's start
    time (k-1)·dt — the same rule the realtime loop uses.
    """
    while not session.ended:
        start_t = session.tick_index * session.dt
        x, y = hold.sample_at(start_t)
        frame = session.tick(JoystickSample(x=x, y=y, t=start_t))
        if on_frame is not None:
            on_frame(frame)
    return session.finalize()
