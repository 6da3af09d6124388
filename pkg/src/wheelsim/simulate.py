"""Single-step simulation pipeline: command mapping, obstacle-avoid assist,
slew limiting, pose integration, and collision response.

Collision model: the chair is a disc of radius ``chair_radius``. Contact is
resolved by stopping the chair and pushing it out along the contact normal
(no sliding, no restitution), which keeps the response stable at any speed
the chair can reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .chair import (
    ChairParams,
    ChairState,
    JoystickSample,
    WheelCommand,
    apply_slew,
    integrate_pose,
    map_joystick,
)
from .events import EventKind, SimEvent
from .level import Level

# Push-out margin keeps clearance strictly positive after a resolve so the
# same contact does not re-fire on the next step from rounding alone.
PUSH_EPS = 1e-6

# Corner contacts can re-penetrate a second surface after a push; iterate
# until clear. The bound is generous — two or three passes settle in practice.
MAX_RESOLVE_ITERS = 32

# Below this wheel speed the chair counts as stopped; keeps slew tails from
# emitting start/stop chatter.
SPEED_EPS = 1e-3

# Assist softening term so repulsion stays finite at zero clearance.
ASSIST_EPS = 1e-3


@dataclass(frozen=True)
class CollisionInfo:
    """One chair/obstacle contact: which obstacle, push direction, depth."""

    obstacle_id: str
    contact_normal: tuple[float, float]   # unit vector, pushes the chair out
    penetration: float                    # meters, > 0
    index: int                            # position in level.obstacle_ids


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1.0 / 60.0
    assist_gain: float = 0.0    # 0 = off

    def __post_init__(self) -> None:
        if not (self.dt > 0.0):
            raise ValueError("dt must be > 0")
        if self.assist_gain < 0.0:
            raise ValueError("assist_gain must be >= 0")


def detect_collision(st: ChairState, level: Level,
                     p: ChairParams) -> CollisionInfo | None:
    """Deepest contact between the chair disc and any obstacle, or None.

    Contact requires strict penetration: resting at exactly chair_radius
    from a surface is not a collision.
    """
    dists, _ = level.surface_distances(st.x, st.y)
    if not len(dists):
        return None
    worst = int(dists.argmin())
    penetration = p.chair_radius - float(dists[worst])
    if penetration <= 0.0:
        return None
    normal = level.surface_normal(worst, st.x, st.y)
    return CollisionInfo(obstacle_id=level.obstacle_ids[worst],
                         contact_normal=normal, penetration=penetration,
                         index=worst)


def resolve_collision(st: ChairState, c: CollisionInfo,
                      p: ChairParams) -> ChairState:
    """Stop the chair and push it out of the contact by the penetration depth."""
    nx, ny = c.contact_normal
    shift = c.penetration + PUSH_EPS
    return replace(st, x=st.x + nx * shift, y=st.y + ny * shift,
                   v_left=0.0, v_right=0.0)


def assist_adjust(st: ChairState, cmd: WheelCommand, level: Level,
                  p: ChairParams, gain: float) -> WheelCommand:
    """Steer away from obstacles closing in ahead of the chair.

    Every obstacle surface within 3 chair radii of the chair's front gets a
    repulsive yaw contribution that grows as clearance shrinks; obstacles on
    the left push the turn right and vice versa, so a symmetric corridor
    cancels out and dead-ahead contacts break toward a right turn. gain = 0
    (or nothing in range) returns the command object untouched.
    """
    if gain <= 0.0:
        return cmd
    dists, points = level.surface_distances(st.x, st.y)
    if not len(dists):
        return cmd
    d_look = 3.0 * p.chair_radius
    hx, hy = math.cos(st.heading), math.sin(st.heading)
    yaw_repulse = 0.0
    for i in range(len(dists)):
        clearance = float(dists[i]) - p.chair_radius
        if clearance > d_look:
            continue
        dx, dy = float(points[i, 0]) - st.x, float(points[i, 1]) - st.y
        norm = math.hypot(dx, dy)
        if norm <= 1e-12:
            continue
        dx, dy = dx / norm, dy / norm
        if hx * dx + hy * dy <= 0.0:
            continue  # behind the axle line; steering cannot approach it
        side = hx * dy - hy * dx   # > 0: obstacle to the left
        away = -1.0 if side >= 0.0 else 1.0
        yaw_repulse += away * gain / (max(clearance, 0.0) + ASSIST_EPS)
    if yaw_repulse == 0.0:
        return cmd
    v = (cmd.v_left + cmd.v_right) / 2.0
    omega = (cmd.v_right - cmd.v_left) / p.track_width + yaw_repulse
    half = omega * p.track_width / 2.0
    lim = p.max_speed
    return WheelCommand(v_left=min(max(v - half, -lim), lim),
                        v_right=min(max(v + half, -lim), lim))


def _moving(vl: float, vr: float) -> bool:
    return max(abs(vl), abs(vr)) > SPEED_EPS


def step(st: ChairState, s: JoystickSample, level: Level, p: ChairParams,
         cfg: SimConfig) -> tuple[ChairState, list[SimEvent]]:
    """Advance one fixed timestep and report what happened.

    Pipeline: joystick -> wheel targets -> assist -> slew -> pose integration
    -> iterated collision resolve. Collision events are deduped per obstacle
    within the step; start/stop events compare against SPEED_EPS so slew
    tails don't chatter.
    """
    events: list[SimEvent] = []
    was_moving = _moving(st.v_left, st.v_right)

    cmd = map_joystick(s, p)
    cmd = assist_adjust(st, cmd, level, p, cfg.assist_gain)
    vl, vr = apply_slew(st, cmd, cfg.dt, p)
    nxt = integrate_pose(replace(st, v_left=vl, v_right=vr), cfg.dt, p)

    seen: set[str] = set()
    for _ in range(MAX_RESOLVE_ITERS):
        hit = detect_collision(nxt, level, p)
        if hit is None:
            break
        if hit.obstacle_id not in seen:
            seen.add(hit.obstacle_id)
            events.append(SimEvent(kind=EventKind.COLLISION,
                                   obstacle_id=hit.obstacle_id))
        nxt = resolve_collision(nxt, hit, p)

    now_moving = _moving(nxt.v_left, nxt.v_right)
    if now_moving and not was_moving:
        events.insert(0, SimEvent(kind=EventKind.MOVE_STARTED))
    elif was_moving and not now_moving:
        events.append(SimEvent(kind=EventKind.MOVE_STOPPED))
    return nxt, events
