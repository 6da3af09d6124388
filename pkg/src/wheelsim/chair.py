"""Differential-drive chair model: parameters, state, mapping, integration.

The chair is a two-wheel differential drive with two passive front casters.
Body speed is the mean of the wheel speeds, yaw rate their difference over
the track width. Pose integration is the exact unicycle arc (closed form for
constant wheel speeds over one step) with a straight-line fallback for near
zero yaw rates, which keeps the step deterministic and analytically
checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import clamp, normalize_angle

# Yaw rates below this are integrated as straight lines (rad/s).
STRAIGHT_OMEGA_EPS = 1e-6


@dataclass(frozen=True)
class ChairParams:
    """Physical parameters of the virtual chair.

    Defaults are typical powered-chair magnitudes; levels and sessions may
    override them.
    """

    track_width: float = 0.6      # m, distance between driven wheels
    wheel_radius: float = 0.17    # m
    chair_radius: float = 0.45    # m, collision circle around the center
    max_speed: float = 1.5        # m/s per wheel
    max_yaw_rate: float = 1.2     # rad/s
    max_accel: float = 1.0        # m/s^2 per-wheel slew limit

    def __post_init__(self) -> None:
        for name in ("track_width", "wheel_radius", "chair_radius",
                     "max_speed", "max_yaw_rate", "max_accel"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.chair_radius < self.track_width / 2.0:
            raise ValueError("chair_radius must cover the track half-width")
        if self.max_yaw_rate * self.track_width / 2.0 > self.max_speed:
            raise ValueError(
                "turn-in-place at max_yaw_rate would exceed max_speed")

    def to_dict(self) -> dict:
        return {
            "track_width": self.track_width,
            "wheel_radius": self.wheel_radius,
            "chair_radius": self.chair_radius,
            "max_speed": self.max_speed,
            "max_yaw_rate": self.max_yaw_rate,
            "max_accel": self.max_accel,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChairParams":
        return cls(**{k: float(d[k]) for k in (
            "track_width", "wheel_radius", "chair_radius",
            "max_speed", "max_yaw_rate", "max_accel")})


@dataclass(frozen=True)
class JoystickSample:
    """Normalized 2-axis input: x lateral (+ = turn right), y forward."""

    x: float
    y: float
    t: float = 0.0  # seconds on the monotone session clock

    def __post_init__(self) -> None:
        if not (self.x * self.x <= 1.0 and self.y * self.y <= 1.0):
            raise ValueError(f"joystick axes out of [-1, 1]: ({self.x}, {self.y})")


REST = JoystickSample(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class WheelCommand:
    """Commanded speed per driven wheel, m/s."""

    v_left: float
    v_right: float


@dataclass(frozen=True)
class ChairState:
    """Kinematic state. ``wheel_spin`` angles (front-left, front-right,
    rear-left, rear-right) exist for rendering only."""

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0  # rad in (-pi, pi], CCW-positive, 0 = +x
    v_left: float = 0.0   # actual wheel speed, m/s
    v_right: float = 0.0
    wheel_spin: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "heading": self.heading,
            "v_left": self.v_left,
            "v_right": self.v_right,
            "wheel_spin": list(self.wheel_spin),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChairState":
        return cls(
            x=float(d["x"]), y=float(d["y"]), heading=float(d["heading"]),
            v_left=float(d["v_left"]), v_right=float(d["v_right"]),
            wheel_spin=tuple(float(a) for a in d["wheel_spin"]),
        )


def map_joystick(s: JoystickSample, p: ChairParams) -> WheelCommand:
    """Arcade mapping from joystick axes to wheel speed commands.

    y scales forward speed, x scales yaw rate (positive x = turn right, so
    the commanded yaw rate is -x * max_yaw_rate). Each wheel is clamped to
    [-max_speed, max_speed] afterwards.
    """
    v_cmd = s.y * p.max_speed
    omega_cmd = -s.x * p.max_yaw_rate
    half = omega_cmd * p.track_width / 2.0
    return WheelCommand(
        v_left=clamp(v_cmd - half, -p.max_speed, p.max_speed),
        v_right=clamp(v_cmd + half, -p.max_speed, p.max_speed),
    )


def apply_slew(current: ChairState, cmd: WheelCommand, dt: float,
               p: ChairParams) -> tuple[float, float]:
    """Move each wheel speed toward its command by at most max_accel * dt."""
    limit = p.max_accel * dt
    return (
        current.v_left + clamp(cmd.v_left - current.v_left, -limit, limit),
        current.v_right + clamp(cmd.v_right - current.v_right, -limit, limit),
    )


def integrate_pose(st: ChairState, dt: float, p: ChairParams) -> ChairState:
    """Advance the pose one step with the current wheel speeds.

    Exact circular-arc update for constant wheel speeds; straight-line
    update when |omega| < STRAIGHT_OMEGA_EPS. Caster spin advances with the
    body speed, driven-wheel spin with each wheel's own travel.
    """
    v = 0.5 * (st.v_left + st.v_right)
    omega = (st.v_right - st.v_left) / p.track_width
    h0 = st.heading
    if abs(omega) < STRAIGHT_OMEGA_EPS:
        x = st.x + v * math.cos(h0) * dt
        y = st.y + v * math.sin(h0) * dt
        heading = h0
    else:
        radius = v / omega
        h1 = h0 + omega * dt
        x = st.x + radius * (math.sin(h1) - math.sin(h0))
        y = st.y - radius * (math.cos(h1) - math.cos(h0))
        heading = normalize_angle(h1)

    caster = v * dt / p.wheel_radius
    left = st.v_left * dt / p.wheel_radius
    right = st.v_right * dt / p.wheel_radius
    fl, fr, rl, rr = st.wheel_spin
    spin = ((fl + caster) % math.tau, (fr + caster) % math.tau,
            (rl + left) % math.tau, (rr + right) % math.tau)

    return replace(st, x=x, y=y, heading=heading, wheel_spin=spin)
