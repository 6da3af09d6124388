"""Wire protocol for the realtime service: JSON text messages with a
"type" discriminator. Decoding ignores unknown fields so older servers
tolerate newer clients and vice versa.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .devices import Calibration, DeviceDescriptor
from .errors import DecodeError, ParseError
from .session import Frame, SessionReport

# Error codes carried by ErrorMsg.
ERR_UNKNOWN_LEVEL = "unknown_level"
ERR_BAD_MESSAGE = "bad_message"
ERR_SESSION_ENDED = "session_ended"


@dataclass(frozen=True)
class Hello:
    """Client opener: which level, and optionally how to read its device."""

    level_id: str
    device_descriptor: DeviceDescriptor | None = None
    calibration: Calibration | None = None


@dataclass(frozen=True)
class Input:
    """One timestamped axes sample; raw counts or prenormalized floats."""

    t: float
    axes: tuple[float, ...]


@dataclass(frozen=True)
class End:
    """Client asks to stop the session and get the report."""


@dataclass(frozen=True)
class Welcome:
    """Server accepts: full level document, effective params, tick size."""

    level: dict
    params: dict
    dt: float


@dataclass(frozen=True)
class FrameMsg:
    frame: Frame


@dataclass(frozen=True)
class Ended:
    report: SessionReport


@dataclass(frozen=True)
class ErrorMsg:
    code: str
    message: str


WireMessage = Hello | Input | End | Welcome | FrameMsg | Ended | ErrorMsg


def encode_message(msg: WireMessage) -> str:
    if isinstance(msg, Hello):
        body: dict = {"type": "hello", "level_id": msg.level_id}
        if msg.device_descriptor is not None:
            body["device_descriptor"] = msg.device_descriptor.to_dict()
        if msg.calibration is not None:
            body["calibration"] = msg.calibration.to_dict()
    elif isinstance(msg, Input):
        body = {"type": "input", "t": msg.t, "axes": list(msg.axes)}
    elif isinstance(msg, End):
        body = {"type": "end"}
    elif isinstance(msg, Welcome):
        body = {"type": "welcome", "level": msg.level, "params": msg.params,
                "dt": msg.dt}
    elif isinstance(msg, FrameMsg):
        body = {"type": "frame", "frame": msg.frame.to_dict()}
    elif isinstance(msg, Ended):
        body = {"type": "ended", "report": msg.report.to_dict()}
    elif isinstance(msg, ErrorMsg):
        body = {"type": "error", "code": msg.code, "message": msg.message}
    else:
        raise TypeError(f"not a wire message: {type(msg).__name__}")
    return json.dumps(body, separators=(",", ":"))


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise DecodeError(f"{path}: missing field '{key}'")
    return obj[key]


def _number(obj: dict, key: str, path: str) -> float:
    v = _require(obj, key, path)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DecodeError(f"{path}.{key}: expected a number")
    return float(v)


def decode_message(text: str | bytes) -> WireMessage:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"message: not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"message: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise DecodeError("message: expected a JSON object")
    kind = obj.get("type")
    if not isinstance(kind, str):
        raise DecodeError("message.type: missing or not a string")

    if kind == "hello":
        level_id = _require(obj, "level_id", "hello")
        if not isinstance(level_id, str):
            raise DecodeError("hello.level_id: expected a string")
        descriptor = None
        if obj.get("device_descriptor") is not None:
            try:
                descriptor = DeviceDescriptor.from_dict(obj["device_descriptor"])
            except (ParseError, ValueError) as exc:
                raise DecodeError(f"hello.device_descriptor: {exc}") from exc
        calibration = None
        if obj.get("calibration") is not None:
            try:
                calibration = Calibration.from_dict(obj["calibration"])
            except (ParseError, ValueError) as exc:
                raise DecodeError(f"hello.calibration: {exc}") from exc
        return Hello(level_id=level_id, device_descriptor=descriptor,
                     calibration=calibration)

    if kind == "input":
        t = _number(obj, "t", "input")
        axes = _require(obj, "axes", "input")
        if (not isinstance(axes, list)
                or any(isinstance(a, bool) or not isinstance(a, (int, float))
                       for a in axes)):
            raise DecodeError("input.axes: expected a list of numbers")
        return Input(t=t, axes=tuple(float(a) for a in axes))

    if kind == "end":
        return End()

    if kind == "welcome":
        level = _require(obj, "level", "welcome")
        params = _require(obj, "params", "welcome")
        if not isinstance(level, dict) or not isinstance(params, dict):
            raise DecodeError("welcome: level and params must be objects")
        return Welcome(level=level, params=params,
                       dt=_number(obj, "dt", "welcome"))

    if kind == "frame":
        frame = _require(obj, "frame", "frame")
        if not isinstance(frame, dict):
            raise DecodeError("frame.frame: expected an object")
        return FrameMsg(frame=Frame.from_dict(frame))

    if kind == "ended":
        report = _require(obj, "report", "ended")
        if not isinstance(report, dict):
            raise DecodeError("ended.report: expected an object")
        return Ended(report=SessionReport.from_dict(report))

    if kind == "error":
        code = _require(obj, "code", "error")
        message = _require(obj, "message", "error")
        if not isinstance(code, str) or not isinstance(message, str):
            raise DecodeError("error: code and message must be strings")
        return ErrorMsg(code=code, message=message)

    raise DecodeError(f"message.type: unknown type '{kind}'")
