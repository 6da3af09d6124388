"""Feedback events emitted by the simulation and the session state machine."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DecodeError


class EventKind(str, Enum):
    MOVE_STARTED = "move_started"
    MOVE_STOPPED = "move_stopped"
    ON_TRACK_ENTERED = "on_track_entered"
    ON_TRACK_EXITED = "on_track_exited"
    WAYPOINT_REACHED = "waypoint_reached"
    COLLISION = "collision"
    REWARD_SHOWN = "reward_shown"
    LEVEL_COMPLETED = "level_completed"
    SESSION_TIMEOUT = "session_timeout"


@dataclass(frozen=True)
class SimEvent:
    """One feedback event. ``index`` is set for waypoint hits,
    ``obstacle_id`` for collisions."""

    kind: EventKind
    tick: int = 0
    index: int | None = None
    obstacle_id: str | None = None

    def to_dict(self) -> dict:
        d: dict = {"tick": self.tick, "kind": self.kind.value}
        if self.index is not None:
            d["index"] = self.index
        if self.obstacle_id is not None:
            d["obstacle_id"] = self.obstacle_id
        return d

    @classmethod
    def from_dict(cls, d: dict, path: str = "event") -> "SimEvent":
        try:
            kind = EventKind(d["kind"])
        except (KeyError, ValueError) as exc:
            raise DecodeError(f"{path}.kind: unknown event kind") from exc
        tick = d.get("tick", 0)
        if not isinstance(tick, int):
            raise DecodeError(f"{path}.tick: expected integer")
        index = d.get("index")
        obstacle_id = d.get("obstacle_id")
        if index is not None and not isinstance(index, int):
            raise DecodeError(f"{path}.index: expected integer")
        if obstacle_id is not None and not isinstance(obstacle_id, str):
            raise DecodeError(f"{path}.obstacle_id: expected string")
        return cls(kind=kind, tick=tick, index=index, obstacle_id=obstacle_id)
