"""Input-device abstraction: descriptors, calibration, normalization,
and recorded-trace sources.

Raw input is integer ADC-style counts per axis. ``normalize`` turns a raw
vector into a JoystickSample through: per-axis centering/scaling, invert,
gain, per-axis clamp, then a radial deadzone with magnitude re-scaling so
small diagonal intents are not snapped onto the axes.
"""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass
from typing import IO, Iterator

from .chair import JoystickSample
from .errors import (
    DescriptorMismatch,
    InsufficientSamples,
    NonMonotonicTimestamps,
    ParseError,
)
from .fileio import atomic_write_text

LATERAL = "lateral"
FORWARD = "forward"

MIN_CALIBRATION_SAMPLES = 30

# Floor deadzone: even a perfectly quiet stick gets a small dead region.
MIN_DEADZONE = 0.05
# Deadzone must stay < 1 or the stick can never leave the dead region.
MAX_DEADZONE = 0.99


@dataclass(frozen=True)
class DeviceDescriptor:
    """Static shape of an input device: raw ranges and which axis does what."""

    device_id: str
    axis_ranges: tuple[tuple[int, int], ...]   # (raw_min, raw_max) per axis
    axis_roles: tuple[str, ...]                # LATERAL / FORWARD / "" per axis

    def __post_init__(self) -> None:
        if len(self.axis_ranges) != len(self.axis_roles):
            raise ValueError("axis_ranges and axis_roles must align")
        for lo, hi in self.axis_ranges:
            if lo >= hi:
                raise ValueError("each axis needs raw_min < raw_max")
        if self.axis_roles.count(LATERAL) != 1 or self.axis_roles.count(FORWARD) != 1:
            raise ValueError("exactly one lateral and one forward axis required")

    @property
    def n_axes(self) -> int:
        return len(self.axis_ranges)

    @property
    def lateral_axis(self) -> int:
        return self.axis_roles.index(LATERAL)

    @property
    def forward_axis(self) -> int:
        return self.axis_roles.index(FORWARD)

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "axis_ranges": [list(r) for r in self.axis_ranges],
            "axis_roles": list(self.axis_roles),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeviceDescriptor":
        try:
            ranges = tuple((int(lo), int(hi)) for lo, hi in d["axis_ranges"])
            roles = tuple(str(r) for r in d["axis_roles"])
            return cls(device_id=str(d["device_id"]), axis_ranges=ranges,
                       axis_roles=roles)
        except ValueError:
            raise
        except (KeyError, TypeError) as exc:
            raise ParseError(f"device descriptor: {exc!r}") from exc


def adc_joystick(device_id: str = "adc-joystick") -> DeviceDescriptor:
    """2-axis 10-bit joystick board, lateral then forward."""
    return DeviceDescriptor(device_id=device_id,
                            axis_ranges=((0, 1023), (0, 1023)),
                            axis_roles=(LATERAL, FORWARD))


def synthetic_gamepad(device_id: str = "gamepad") -> DeviceDescriptor:
    """Browser gamepads prescale float axes onto this 16-bit range."""
    return DeviceDescriptor(device_id=device_id,
                            axis_ranges=((0, 65535), (0, 65535)),
                            axis_roles=(LATERAL, FORWARD))


@dataclass(frozen=True)
class Calibration:
    """Per-device tuning applied before the joystick mapping."""

    device_id: str
    center: tuple[int, ...]
    deadzone: float
    gain: tuple[float, ...]
    invert: tuple[bool, ...]

    def __post_init__(self) -> None:
        if not (0.0 <= self.deadzone < 1.0):
            raise ValueError("deadzone must be in [0, 1)")
        if len(self.center) != len(self.gain) or len(self.center) != len(self.invert):
            raise ValueError("center/gain/invert must have equal axis counts")
        if any(g <= 0.0 for g in self.gain):
            raise ValueError("gain must be > 0 per axis")

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "center": list(self.center),
            "deadzone": self.deadzone,
            "gain": list(self.gain),
            "invert": list(self.invert),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Calibration":
        try:
            return cls(
                device_id=str(d["device_id"]),
                center=tuple(int(c) for c in d["center"]),
                deadzone=float(d["deadzone"]),
                gain=tuple(float(g) for g in d["gain"]),
                invert=tuple(bool(v) for v in d["invert"]),
            )
        except ValueError:
            raise
        except (KeyError, TypeError) as exc:
            raise ParseError(f"calibration: {exc!r}") from exc


def default_calibration(d: DeviceDescriptor) -> Calibration:
    """Midpoint center, floor deadzone, unit gain, no inversion."""
    return Calibration(
        device_id=d.device_id,
        center=tuple((lo + hi) // 2 for lo, hi in d.axis_ranges),
        deadzone=MIN_DEADZONE,
        gain=(1.0,) * d.n_axes,
        invert=(False,) * d.n_axes,
    )


def _axis_unit(raw: int, center: int, lo: int, hi: int) -> float:
    """Map a raw count to [-1, 1] with independent per-side scales.

    Scaling each side of center by its own span makes full deflection hit
    exactly +/-1 even when the center is off the geometric middle.
    """
    r = min(max(raw, lo), hi)
    if r >= center:
        span = hi - center
        return 0.0 if span == 0 else (r - center) / span
    span = center - lo
    return 0.0 if span == 0 else (r - center) / span


def normalize(raw, d: DeviceDescriptor, c: Calibration,
              t: float = 0.0) -> JoystickSample:
    """Raw counts -> calibrated JoystickSample at time t."""
    raw = tuple(raw)
    if len(raw) != d.n_axes:
        raise DescriptorMismatch(
            f"device '{d.device_id}' has {d.n_axes} axes, got {len(raw)}")
    if len(c.center) != d.n_axes:
        raise DescriptorMismatch(
            f"calibration for '{c.device_id}' has {len(c.center)} axes, "
            f"descriptor has {d.n_axes}")

    units = []
    for i in range(d.n_axes):
        lo, hi = d.axis_ranges[i]
        u = _axis_unit(int(raw[i]), c.center[i], lo, hi)
        if c.invert[i]:
            u = -u
        u *= c.gain[i]
        units.append(min(max(u, -1.0), 1.0))

    x = units[d.lateral_axis]
    y = units[d.forward_axis]
    m = math.hypot(x, y)
    if m <= c.deadzone:
        return JoystickSample(x=0.0, y=0.0, t=t)
    scale = (m - c.deadzone) / ((1.0 - c.deadzone) * m)
    x *= scale
    y *= scale
    # Diagonal full deflection rescales past unit magnitude; pin to the box.
    return JoystickSample(x=min(max(x, -1.0), 1.0),
                          y=min(max(y, -1.0), 1.0), t=t)


def calibrate_center(resting_samples, d: DeviceDescriptor) -> Calibration:
    """Build a calibration from samples taken with the device at rest.

    Center is the per-axis mean (ties round away from zero); deadzone covers
    twice the largest resting deflection so drift and tremor at rest stay
    inside it, floored at MIN_DEADZONE.
    """
    samples = [tuple(s) for s in resting_samples]
    if len(samples) < MIN_CALIBRATION_SAMPLES:
        raise InsufficientSamples(
            f"calibration needs >= {MIN_CALIBRATION_SAMPLES} resting samples, "
            f"got {len(samples)}")
    for s in samples:
        if len(s) != d.n_axes:
            raise DescriptorMismatch(
                f"device '{d.device_id}' has {d.n_axes} axes, got {len(s)}")

    center = []
    for i in range(d.n_axes):
        mean = sum(s[i] for s in samples) / len(samples)
        center.append(int(math.copysign(math.floor(abs(mean) + 0.5), mean)))

    worst = 0.0
    for s in samples:
        ux = _axis_unit(int(s[d.lateral_axis]), center[d.lateral_axis],
                        *d.axis_ranges[d.lateral_axis])
        uy = _axis_unit(int(s[d.forward_axis]), center[d.forward_axis],
                        *d.axis_ranges[d.forward_axis])
        worst = max(worst, math.hypot(ux, uy))
    deadzone = min(max(MIN_DEADZONE, 2.0 * worst), MAX_DEADZONE)

    return Calibration(device_id=d.device_id, center=tuple(center),
                       deadzone=deadzone, gain=(1.0,) * d.n_axes,
                       invert=(False,) * d.n_axes)


# -- trace files ---------------------------------------------------------------


def trace_source(file) -> Iterator[tuple[float, tuple[int, ...]]]:
    """Stream (t, raw axes) pairs from a JSON Lines trace.

    Accepts a path or an open text file. Timestamps must be nondecreasing;
    blank lines are skipped.
    """
    if isinstance(file, (str, os.PathLike)):
        with open(file, "r", encoding="utf-8") as fh:
            yield from _read_trace(fh)
    else:
        yield from _read_trace(file)


def _read_trace(fh: IO[str]) -> Iterator[tuple[float, tuple[int, ...]]]:
    last_t = None
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"trace line {lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict) or "t" not in obj or "axes" not in obj:
            raise ParseError(f"trace line {lineno}: expected {{t, axes}}")
        t = obj["t"]
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise ParseError(f"trace line {lineno}: t must be a number")
        axes = obj["axes"]
        if (not isinstance(axes, list) or not axes
                or any(isinstance(a, bool) or not isinstance(a, int) for a in axes)):
            raise ParseError(f"trace line {lineno}: axes must be integers")
        t = float(t)
        if last_t is not None and t < last_t:
            raise NonMonotonicTimestamps(
                f"trace line {lineno}: t {t:g} decreases from {last_t:g}")
        last_t = t
        yield t, tuple(axes)


def write_trace(path, samples) -> None:
    """Write (t, axes) pairs as a JSON Lines trace (atomic replace)."""
    buf = io.StringIO()
    for t, axes in samples:
        buf.write(json.dumps({"t": t, "axes": list(axes)}) + "\n")
    atomic_write_text(path, buf.getvalue())


def load_calibration_file(path) -> Calibration:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"calibration file: invalid JSON at line {exc.lineno}: {exc.msg}"
            ) from exc
    return Calibration.from_dict(doc)


def save_calibration_file(cal: Calibration, path) -> None:
    atomic_write_text(path, json.dumps(cal.to_dict(), indent=2) + "\n")
