"""Planar primitives: rotations, open rectangles, disks, strips, exact disk/rectangle areas.

Rectangles are stored by an anchor corner, two side lengths and a raw angle.
Membership and clipping compare projections ``e . p`` against per-rectangle
constant thresholds, so every point is classified against the same four lines.
This keeps multi-scale configurations (points spanning tens of binary orders of
magnitude near the origin) consistent under rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

HALF_PI = math.pi / 2
EPS = 1e-12


def canonical_slope(angle: float) -> float:
    """Reduce an angle mod pi/2 into [0, pi/2)."""
    s = math.fmod(angle, HALF_PI)
    if s < 0:
        s += HALF_PI
    if s >= HALF_PI:
        s = 0.0
    return s


@dataclass(frozen=True)
class Slope:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", canonical_slope(float(self.value)))

    @property
    def perp(self) -> float:
        return self.value + HALF_PI


def rot_point(x, s: float) -> np.ndarray:
    """Rotate ``x`` (shape (..., 2)) by ``s`` about the origin."""
    x = np.asarray(x, dtype=float)
    c, sn = math.cos(s), math.sin(s)
    return np.stack([c * x[..., 0] - sn * x[..., 1], sn * x[..., 0] + c * x[..., 1]], axis=-1)


def arg_line(p, q) -> float:
    """Minimal nonnegative angle between the line pq and the x-axis, in [0, pi/2]."""
    dx = float(q[0]) - float(p[0])
    dy = float(q[1]) - float(p[1])
    if dx == 0.0 and dy == 0.0:
        raise ValueError("arg_line: degenerate line, p == q")
    return math.atan2(abs(dy), abs(dx))


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


@dataclass(frozen=True)
class Strip:
    """Open strip {|x_2| < half_width} rotated by ``slope``."""

    slope: float
    half_width: float

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("strip half_width must be positive")

    def contains(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        v = -math.sin(self.slope) * x[..., 0] + math.cos(self.slope) * x[..., 1]
        out = np.abs(v) < self.half_width
        return bool(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Rectangle:
    """Open rectangle ``corner + rot_angle((0, a) x (0, b))``.

    ``angle`` is kept raw (signed); ``slope`` is its canonical class mod pi/2.
    """

    corner: tuple[float, float]
    a: float
    b: float
    angle: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"rectangle sides must be positive, got {self.a}, {self.b}")
        object.__setattr__(self, "corner", (float(self.corner[0]), float(self.corner[1])))

    @classmethod
    def from_center(cls, center, a: float, b: float, angle: float = 0.0) -> "Rectangle":
        c, s = math.cos(angle), math.sin(angle)
        cx = center[0] - (c * a - s * b) / 2
        cy = center[1] - (s * a + c * b) / 2
        return cls((cx, cy), a, b, angle)

    @cached_property
    def frame(self) -> tuple[float, float, float, float]:
        """(cos, sin, u0, v0): axis direction and the projections of the corner."""
        c, s = math.cos(self.angle), math.sin(self.angle)
        u0 = c * self.corner[0] + s * self.corner[1]
        v0 = -s * self.corner[0] + c * self.corner[1]
        return c, s, u0, v0

    @property
    def half_a(self) -> float:
        return self.a / 2

    @property
    def half_b(self) -> float:
        return self.b / 2

    @property
    def center(self) -> tuple[float, float]:
        c, s = math.cos(self.angle), math.sin(self.angle)
        return (self.corner[0] + (c * self.a - s * self.b) / 2,
                self.corner[1] + (s * self.a + c * self.b) / 2)

    @property
    def slope(self) -> float:
        return canonical_slope(self.angle)

    @property
    def area(self) -> float:
        return self.a * self.b

    @property
    def diameter(self) -> float:
        return math.hypot(self.a, self.b)

    def vertices(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        ea = np.array([c, s]) * self.a
        eb = np.array([-s, c]) * self.b
        o = np.array(self.corner)
        return np.array([o, o + ea, o + ea + eb, o + eb])

    def translate(self, d) -> "Rectangle":
        return Rectangle((self.corner[0] + d[0], self.corner[1] + d[1]), self.a, self.b, self.angle)

    def scale(self, t: float) -> "Rectangle":
        """Image under x -> t x."""
        return Rectangle((self.corner[0] * t, self.corner[1] * t), self.a * t, self.b * t, self.angle)

    def rotate(self, s: float) -> "Rectangle":
        """Image under rotation by s about the origin."""
        p = rot_point(self.corner, s)
        return Rectangle((p[0], p[1]), self.a, self.b, self.angle + s)

    def split(self, along_a: bool = True) -> tuple["Rectangle", "Rectangle"]:
        c, s = math.cos(self.angle), math.sin(self.angle)
        if along_a:
            h = self.a / 2
            mid = (self.corner[0] + c * h, self.corner[1] + s * h)
            return Rectangle(self.corner, h, self.b, self.angle), Rectangle(mid, self.a - h, self.b, self.angle)
        h = self.b / 2
        mid = (self.corner[0] - s * h, self.corner[1] + c * h)
        return Rectangle(self.corner, self.a, h, self.angle), Rectangle(mid, self.a, self.b - h, self.angle)

    def to_dict(self) -> dict:
        return {"corner": list(self.corner), "a": self.a, "b": self.b, "angle": self.angle}

    @classmethod
    def from_dict(cls, d: dict) -> "Rectangle":
        return cls(tuple(d["corner"]), d["a"], d["b"], d["angle"])


def rect_contains(R: Rectangle, x) -> np.ndarray | bool:
    """Strict membership in the open rectangle; ``x`` may be (2,) or (n, 2)."""
    x = np.asarray(x, dtype=float)
    c, s, u0, v0 = R.frame
    u = c * x[..., 0] + s * x[..., 1]
    v = -s * x[..., 0] + c * x[..., 1]
    out = (u > u0) & (u < u0 + R.a) & (v > v0) & (v < v0 + R.b)
    return bool(out) if out.ndim == 0 else out


def _h(x):
    return 0.5 * (x * np.sqrt(np.maximum(1.0 - x * x, 0.0)) + np.arcsin(x))


def quadrant_area_unit(X, Y):
    """Area of the unit disk intersected with {x < X, y < Y}, vectorized."""
    X = np.clip(np.asarray(X, dtype=float), -1.0, 1.0)
    Y = np.clip(np.asarray(Y, dtype=float), -1.0, 1.0)
    xs = np.sqrt(np.maximum(1.0 - Y * Y, 0.0))
    hxs = _h(xs)
    hX = _h(X)
    xm = np.clip(X, -xs, xs)
    hxm = _h(xm)
    # central band |x| < xs: slice length h(x) + Y
    mid = hxm + hxs + Y * (xm + xs)
    # outer caps, present only for Y >= 0: slice length 2 h(x)
    left = 2.0 * (np.minimum(hX, -hxs) + math.pi / 4)
    right = 2.0 * np.maximum(hX - hxs, 0.0)
    upper = np.where(X <= -xs, left, left + mid + right)
    lower = np.where(X <= -xs, 0.0, mid)
    return np.where(Y >= 0, upper, lower)


def unit_box_areas(cu, cv, r, u0, u1, v0, v1):
    """|disk((cu, cv), r) cap (u0, u1) x (v0, v1)| / r^2, broadcastable."""
    r = np.asarray(r, dtype=float)
    X0 = (u0 - cu) / r
    X1 = (u1 - cu) / r
    Y0 = (v0 - cv) / r
    Y1 = (v1 - cv) / r
    q = (quadrant_area_unit(X1, Y1) - quadrant_area_unit(X0, Y1)
         - quadrant_area_unit(X1, Y0) + quadrant_area_unit(X0, Y0))
    return np.clip(q, 0.0, math.pi)


def disk_box_areas(cu, cv, r, u0, u1, v0, v1):
    """|disk((cu, cv), r) cap (u0, u1) x (v0, v1)| for broadcastable arrays."""
    r = np.asarray(r, dtype=float)
    return unit_box_areas(cu, cv, r, u0, u1, v0, v1) * r * r


def disk_rect_area(d: Disk, R: Rectangle) -> float:
    """Exact area of ``d`` intersected with ``R`` (up to floating-point roundoff)."""
    c, s, u0, v0 = R.frame
    cu = c * d.center[0] + s * d.center[1]
    cv = -s * d.center[0] + c * d.center[1]
    return float(disk_box_areas(cu, cv, d.radius, u0, u0 + R.a, v0, v0 + R.b))


def line_stab_count(direction: float, disks) -> int:
    """Max number of (open) disks met by a single line of the given direction."""
    if len(disks) == 0:
        raise ValueError("line_stab_count needs at least one disk")
    centers = np.array([d.center for d in disks], dtype=float)
    radii = np.array([d.radius for d in disks], dtype=float)
    return stab_count_arrays(direction, centers, radii)


def stab_count_arrays(direction: float, centers: np.ndarray, radii) -> int:
    nx, ny = -math.sin(direction), math.cos(direction)
    p = centers[:, 0] * nx + centers[:, 1] * ny
    radii = np.broadcast_to(np.asarray(radii, dtype=float), p.shape)
    # open intervals: at equal coordinates, closings sort before openings
    ev = np.concatenate([p - radii, p + radii])
    kind = np.concatenate([np.ones_like(p), -np.ones_like(p)])
    order = np.lexsort((kind, ev))
    return int(np.max(np.cumsum(kind[order])))
