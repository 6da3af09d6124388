"""Level geometry, route corridor math, loading, and accessibility checks.

A level is immutable after load. Obstacle geometry is kept in numpy arrays
so per-step distance queries stay cheap; every obstacle gets a stable string
id ("wall0", "circle2", "rect1") used in collision events.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .chair import ChairParams, ChairState
from .contrast import contrast_ratio, parse_hex_color
from .errors import ParseError, ValidationError
from .geometry import Polyline, normalize_angle

PALETTE_KEYS = ("background", "route", "chair", "obstacle", "reward")

# Accessibility thresholds: max decorative elements and minimum contrast
# ratio of chair/route/reward against the background.
CLUTTER_BUDGET = 5
MIN_CONTRAST = 4.5

MIN_SEGMENT_LENGTH = 1e-6


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float


@dataclass(frozen=True)
class Level:
    id: str
    walls: np.ndarray          # (Nw, 4) x1 y1 x2 y2
    circles: np.ndarray        # (Nc, 3) cx cy r
    rects: np.ndarray          # (Nr, 4) xmin ymin xmax ymax
    route: Polyline
    corridor_half_width: float
    start_pose: tuple[float, float, float]
    goal: Circle
    waypoints: tuple[Circle, ...]
    palette: dict[str, str]
    decoration_count: int
    obstacle_ids: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        ids = tuple(
            [f"wall{i}" for i in range(len(self.walls))]
            + [f"circle{i}" for i in range(len(self.circles))]
            + [f"rect{i}" for i in range(len(self.rects))]
        )
        object.__setattr__(self, "obstacle_ids", ids)

    # -- geometry queries ---------------------------------------------------

    def surface_distances(self, px: float, py: float) -> tuple[np.ndarray, np.ndarray]:
        """Distance from a point to every obstacle surface, plus the nearest
        surface point per obstacle.

        Wall segments: point-segment distance. Circles: center distance minus
        radius (negative inside). Rects: signed distance to the solid box
        (negative inside). Order matches ``obstacle_ids``.
        """
        dists = []
        points = []
        if len(self.walls):
            ax, ay, bx, by = self.walls.T
            vx, vy = bx - ax, by - ay
            len2 = vx * vx + vy * vy
            dot = (px - ax) * vx + (py - ay) * vy
            t = np.clip(np.where(len2 > 0.0, dot / np.where(len2 > 0.0, len2, 1.0), 0.0), 0.0, 1.0)
            qx, qy = ax + t * vx, ay + t * vy
            dists.append(np.hypot(px - qx, py - qy))
            points.append(np.column_stack((qx, qy)))
        if len(self.circles):
            cx, cy, r = self.circles.T
            dx, dy = px - cx, py - cy
            dc = np.hypot(dx, dy)
            safe = np.where(dc > 0.0, dc, 1.0)
            nx = np.where(dc > 0.0, dx / safe, 1.0)
            ny = np.where(dc > 0.0, dy / safe, 0.0)
            dists.append(dc - r)
            points.append(np.column_stack((cx + r * nx, cy + r * ny)))
        if len(self.rects):
            xmin, ymin, xmax, ymax = self.rects.T
            inx = np.clip(px, xmin, xmax)
            iny = np.clip(py, ymin, ymax)
            outside = np.hypot(px - inx, py - iny)
            # Inside: distance to the nearest face, as a negative clearance.
            face = np.minimum(np.minimum(px - xmin, xmax - px),
                              np.minimum(py - ymin, ymax - py))
            inside = outside == 0.0
            dists.append(np.where(inside, -face, outside))
            # Nearest surface point: the clamped point when outside, else the
            # projection onto the nearest face.
            fqx, fqy = self._rect_face_points(px, py, xmin, ymin, xmax, ymax)
            points.append(np.column_stack((np.where(inside, fqx, inx),
                                           np.where(inside, fqy, iny))))
        if not dists:
            return np.empty(0), np.empty((0, 2))
        return np.concatenate(dists), np.concatenate(points)

    @staticmethod
    def _rect_face_points(px, py, xmin, ymin, xmax, ymax):
        dl, dr = px - xmin, xmax - px
        db, dt = py - ymin, ymax - py
        best = np.minimum(np.minimum(dl, dr), np.minimum(db, dt))
        qx = np.where(best == dl, xmin, np.where(best == dr, xmax, px))
        qy = np.where((best == dl) | (best == dr), py,
                      np.where(best == db, ymin, ymax))
        return qx, qy

    def surface_normal(self, index: int, px: float, py: float) -> tuple[float, float]:
        """Outward unit normal of obstacle ``index`` at query point (px, py)."""
        nw, nc = len(self.walls), len(self.circles)
        if index < nw:
            x1, y1, x2, y2 = self.walls[index]
            vx, vy = x2 - x1, y2 - y1
            len2 = vx * vx + vy * vy
            t = 0.0 if len2 == 0.0 else min(max(((px - x1) * vx + (py - y1) * vy) / len2, 0.0), 1.0)
            qx, qy = x1 + t * vx, y1 + t * vy
            dx, dy = px - qx, py - qy
            d = math.hypot(dx, dy)
            if d > 1e-12:
                return dx / d, dy / d
            # Center exactly on the wall: use the segment's left perpendicular.
            n = math.sqrt(len2) or 1.0
            return -vy / n, vx / n
        if index < nw + nc:
            cx, cy, _ = self.circles[index - nw]
            dx, dy = px - cx, py - cy
            d = math.hypot(dx, dy)
            if d > 1e-12:
                return dx / d, dy / d
            return 1.0, 0.0
        xmin, ymin, xmax, ymax = self.rects[index - nw - nc]
        inx = min(max(px, xmin), xmax)
        iny = min(max(py, ymin), ymax)
        dx, dy = px - inx, py - iny
        d = math.hypot(dx, dy)
        if d > 1e-12:
            return dx / d, dy / d
        # Inside or on the border: push through the nearest face.
        dl, dr, db, dt = px - xmin, xmax - px, py - ymin, ymax - py
        best = min(dl, dr, db, dt)
        if best == dl:
            return -1.0, 0.0
        if best == dr:
            return 1.0, 0.0
        if best == db:
            return 0.0, -1.0
        return 0.0, 1.0

    # -- route queries ------------------------------------------------------

    def project_to_route(self, pt) -> tuple[float, float]:
        """Distance to the route and arc length of the nearest route point."""
        return self.route.project(pt)

    def is_on_track(self, pt) -> bool:
        """True iff the point is within the corridor (inclusive boundary)."""
        distance, _ = self.route.project(pt)
        return distance <= self.corridor_half_width

    def goal_reached(self, st: ChairState) -> bool:
        """True iff the chair center is strictly inside the goal circle."""
        return math.hypot(st.x - self.goal.cx, st.y - self.goal.cy) < self.goal.r

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "walls": self.walls.tolist(),
            "circles": self.circles.tolist(),
            "rects": self.rects.tolist(),
            "route": self.route.vertices.tolist(),
            "corridor_half_width": self.corridor_half_width,
            "start": list(self.start_pose),
            "goal": [self.goal.cx, self.goal.cy, self.goal.r],
            "waypoints": [[w.cx, w.cy, w.r] for w in self.waypoints],
            "palette": dict(self.palette),
            "decoration_count": self.decoration_count,
        }


def project_to_route(pt, route: Polyline) -> tuple[float, float]:
    """Module-level form of route projection for bare polylines."""
    return route.project(pt)


def is_on_track(pt, level: Level) -> bool:
    return level.is_on_track(pt)


def goal_reached(st: ChairState, level: Level) -> bool:
    return level.goal_reached(st)


# -- loading ------------------------------------------------------------------


def _number(obj, key, path, minimum=None):
    if key not in obj:
        raise ParseError(f"{path}: missing field '{key}'")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{path}.{key}: expected a number")
    if minimum is not None and v < minimum:
        raise ParseError(f"{path}.{key}: must be >= {minimum}")
    return float(v)


def _point_list(obj, key, path, width, required=False):
    if key not in obj:
        if required:
            raise ParseError(f"{path}: missing field '{key}'")
        return []
    rows = obj[key]
    if not isinstance(rows, list):
        raise ParseError(f"{path}.{key}: expected a list")
    out = []
    for i, row in enumerate(rows):
        if (not isinstance(row, list) or len(row) != width
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in row)):
            raise ParseError(f"{path}.{key}[{i}]: expected {width} numbers")
        out.append([float(v) for v in row])
    return out


def parse_level(doc: dict, source: str = "level", check: bool = True) -> Level:
    """Build a Level from a parsed JSON document.

    With check=True (the default) structural violations raise
    ValidationError; check=False returns the level for callers that want to
    collect violations themselves.
    """
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: expected a JSON object")
    if "id" not in doc:
        raise ParseError(f"{source}: missing field 'id'")
    if not isinstance(doc["id"], str) or not doc["id"]:
        raise ParseError(f"{source}.id: expected a non-empty string")
    level_id = doc["id"]

    walls = _point_list(doc, "walls", source, 4)
    circles = _point_list(doc, "circles", source, 3)
    rects = _point_list(doc, "rects", source, 4)
    route = _point_list(doc, "route", source, 2, required=True)
    if len(route) < 2:
        raise ParseError(f"{source}.route: needs at least 2 vertices")
    half_width = _number(doc, "corridor_half_width", source)

    start = doc.get("start")
    if (not isinstance(start, list) or len(start) != 3
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in start)):
        raise ParseError(f"{source}.start: expected [x, y, heading]")
    goal_row = doc.get("goal")
    if (not isinstance(goal_row, list) or len(goal_row) != 3
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in goal_row)):
        raise ParseError(f"{source}.goal: expected [cx, cy, r]")
    waypoints = _point_list(doc, "waypoints", source, 3)

    palette = doc.get("palette")
    if not isinstance(palette, dict):
        raise ParseError(f"{source}: missing field 'palette'")
    for key in PALETTE_KEYS:
        if key not in palette:
            raise ParseError(f"{source}.palette: missing color '{key}'")
        try:
            parse_hex_color(palette[key])
        except ParseError as exc:
            raise ParseError(f"{source}.palette.{key}: {exc}") from exc

    count = doc.get("decoration_count", 0)
    if isinstance(count, bool) or not isinstance(count, int) or count < 0:
        raise ParseError(f"{source}.decoration_count: expected integer >= 0")

    level = Level(
        id=level_id,
        walls=np.asarray(walls, dtype=float).reshape(-1, 4),
        circles=np.asarray(circles, dtype=float).reshape(-1, 3),
        rects=np.asarray(rects, dtype=float).reshape(-1, 4),
        route=Polyline(route),
        corridor_half_width=half_width,
        start_pose=(float(start[0]), float(start[1]),
                    normalize_angle(float(start[2]))),
        goal=Circle(*[float(v) for v in goal_row]),
        waypoints=tuple(Circle(*[float(v) for v in w]) for w in waypoints),
        palette={k: str(v) for k, v in palette.items()},
        decoration_count=count,
    )
    if check:
        violations = validate_level(level)
        if violations:
            raise ValidationError(violations)
    return level


def load_level(data: bytes | str, check: bool = True) -> Level:
    """Parse (and by default validate) a UTF-8 level document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"level file is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"level file: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_level(doc, check=check)


def load_level_file(path) -> Level:
    with open(path, "rb") as fh:
        return load_level(fh.read())


def validate_level(level: Level, params: ChairParams | None = None) -> list[str]:
    """Structural invariant violations (empty list when the level is sound).

    The start pose is checked against the default chair dimensions unless
    explicit params are given.
    """
    from .simulate import detect_collision  # cycle: simulate needs Level

    p = params or ChairParams()
    violations = []
    if level.corridor_half_width <= 0.0:
        violations.append("corridor_half_width must be > 0")
    seg_len = level.route.seg_len
    for i, length in enumerate(seg_len):
        if length <= MIN_SEGMENT_LENGTH:
            violations.append(f"route segment {i} is degenerate (length {length:g})")
    if level.goal.r <= 0.0:
        violations.append("goal radius must be > 0")
    for i, w in enumerate(level.waypoints):
        if w.r <= 0.0:
            violations.append(f"waypoint {i} radius must be > 0")
    if len(level.circles) and (level.circles[:, 2] <= 0.0).any():
        violations.append("circle obstacles need radius > 0")
    if len(level.rects):
        bad = (level.rects[:, 0] >= level.rects[:, 2]) | (level.rects[:, 1] >= level.rects[:, 3])
        if bad.any():
            violations.append("rect obstacles need xmin < xmax and ymin < ymax")

    if not violations:
        sx, sy, sh = level.start_pose
        if not level.is_on_track((sx, sy)):
            violations.append("start pose is off the route corridor")
        hit = detect_collision(ChairState(x=sx, y=sy, heading=sh), level, p)
        if hit is not None:
            violations.append(f"start collides with {hit.obstacle_id}")
        gd, _ = level.project_to_route((level.goal.cx, level.goal.cy))
        if gd > level.corridor_half_width:
            violations.append("goal center lies outside the route corridor")
    return violations


def validate_accessibility(level: Level) -> list[str]:
    """Accessibility violations: clutter budget and palette contrast."""
    violations = []
    if level.decoration_count > CLUTTER_BUDGET:
        violations.append(
            f"clutter: decoration_count {level.decoration_count} exceeds "
            f"budget {CLUTTER_BUDGET}")
    background = level.palette["background"]
    for key in ("chair", "route", "reward"):
        ratio = contrast_ratio(level.palette[key], background)
        if ratio < MIN_CONTRAST:
            violations.append(
                f"contrast: {key} {level.palette[key]} on background "
                f"{background} is {ratio:.2f}, below {MIN_CONTRAST}")
    return violations
