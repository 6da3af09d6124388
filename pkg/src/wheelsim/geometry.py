"""2D geometry helpers: angles, point-segment distance, polyline projection."""

from __future__ import annotations

import math

import numpy as np

TAU = 2.0 * math.pi


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    return math.pi - (math.pi - a) % TAU


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def point_segment_distance(px: float, py: float,
                           ax: float, ay: float,
                           bx: float, by: float) -> tuple[float, float, float]:
    """Distance from (px, py) to segment (a, b) and the closest point on it."""
    vx, vy = bx - ax, by - ay
    len2 = vx * vx + vy * vy
    if len2 <= 0.0:
        t = 0.0
    else:
        t = clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0)
    qx, qy = ax + t * vx, ay + t * vy
    return math.hypot(px - qx, py - qy), qx, qy


class Polyline:
    """Piecewise-linear path with precomputed segment geometry.

    Vertices are an (N, 2) float array, N >= 2. Degenerate (zero-length)
    segments are tolerated here; level validation rejects them.
    """

    def __init__(self, vertices) -> None:
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] != 2:
            raise ValueError("polyline needs at least two 2D vertices")
        self.vertices = v
        self.seg_vec = np.diff(v, axis=0)
        self.seg_len = np.hypot(self.seg_vec[:, 0], self.seg_vec[:, 1])
        self.cum_len = np.concatenate(([0.0], np.cumsum(self.seg_len)))
        self.total_length = float(self.cum_len[-1])

    def project(self, pt) -> tuple[float, float]:
        """Project a point onto the path.

        Returns (distance to the nearest path point, arc length s of that
        point from the path start). Ties between segments break toward the
        smaller s (argmin keeps the first minimum).
        """
        p = np.asarray(pt, dtype=float)
        a = self.vertices[:-1]
        len2 = self.seg_len * self.seg_len
        dot = ((p - a) * self.seg_vec).sum(axis=1)
        t = np.where(len2 > 0.0, dot / np.where(len2 > 0.0, len2, 1.0), 0.0)
        t = np.clip(t, 0.0, 1.0)
        closest = a + t[:, None] * self.seg_vec
        d = p - closest
        dist = np.hypot(d[:, 0], d[:, 1])
        i = int(np.argmin(dist))
        return float(dist[i]), float(self.cum_len[i] + t[i] * self.seg_len[i])
