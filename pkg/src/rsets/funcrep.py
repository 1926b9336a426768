"""Signed disk-indicator sums, their lattice periodizations, dilations and finite series."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .geometry import Disk, Rectangle, rot_point, unit_box_areas

# rectangles x atoms evaluated per numpy block
_BLOCK = 1 << 20
# beyond this many binary orders below the base scale a cell underflows doubles
_MAX_DEPTH = 900


@dataclass(frozen=True)
class Estimate:
    """A value with a rigorous additive error radius."""

    value: float
    err: float = 0.0

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err

    def __add__(self, other: "Estimate") -> "Estimate":
        return Estimate(self.value + other.value, self.err + other.err)

    def scaled(self, t: float) -> "Estimate":
        return Estimate(self.value * t, self.err * abs(t))


class DiskSum:
    """Finite sum of weighted indicators of open disks: ``sum_i w_i 1_{|x - c_i| < r_i}``."""

    def __init__(self, cx, cy, r, w=None, *, wr2=None):
        self.cx = np.atleast_1d(np.asarray(cx, dtype=float))
        self.cy = np.atleast_1d(np.asarray(cy, dtype=float))
        self.r = np.atleast_1d(np.asarray(r, dtype=float))
        n = len(self.cx)
        if not (len(self.cy) == len(self.r) == n):
            raise ValueError("DiskSum arrays must have equal length")
        if n and not np.all(self.r > 0):
            raise ValueError("DiskSum radii must be positive")
        # weights are kept as w r^2 so that tiny disks with huge densities stay finite
        if wr2 is None:
            w = np.atleast_1d(np.asarray(w, dtype=float))
            wr2 = (w * self.r) * self.r
        self.wr2 = np.atleast_1d(np.asarray(wr2, dtype=float))
        if len(self.wr2) != n:
            raise ValueError("DiskSum arrays must have equal length")
        for a in (self.cx, self.cy, self.r, self.wr2):
            a.setflags(write=False)

    @property
    def w(self) -> np.ndarray:
        return self.wr2 / self.r / self.r

    @classmethod
    def empty(cls) -> "DiskSum":
        return cls([], [], [], [])

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[Disk, float]]) -> "DiskSum":
        atoms = list(atoms)
        return cls([d.center[0] for d, _ in atoms], [d.center[1] for d, _ in atoms],
                   [d.radius for d, _ in atoms], [w for _, w in atoms])

    def __len__(self) -> int:
        return len(self.cx)

    @property
    def disks(self) -> list[Disk]:
        return [Disk((x, y), r) for x, y, r in zip(self.cx, self.cy, self.r)]

    @property
    def masses(self) -> np.ndarray:
        """Signed integral of each atom, ``w pi r^2``."""
        return math.pi * self.wr2

    @cached_property
    def enclosing(self) -> tuple[tuple[float, float], float]:
        """A disk (center, radius) containing every atom."""
        if len(self) == 0:
            return (0.0, 0.0), 0.0
        cx = 0.5 * (self.cx.min() + self.cx.max())
        cy = 0.5 * (self.cy.min() + self.cy.max())
        rad = float(np.max(np.hypot(self.cx - cx, self.cy - cy) + self.r))
        return (float(cx), float(cy)), rad

    def eval(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        pts = x.reshape(-1, 2)
        out = np.zeros(len(pts))
        w = self.w
        for i in range(len(self)):
            inside = np.hypot(pts[:, 0] - self.cx[i], pts[:, 1] - self.cy[i]) < self.r[i]
            out[inside] += w[i]
        return float(out[0]) if x.ndim == 1 else out.reshape(x.shape[:-1])

    def integral(self, R: Rectangle) -> float:
        """Exact signed integral over the open rectangle ``R``."""
        if len(self) == 0:
            return 0.0
        c, s, u0, v0 = R.frame
        cu = c * self.cx + s * self.cy
        cv = -s * self.cx + c * self.cy
        q = unit_box_areas(cu, cv, self.r, u0, u0 + R.a, v0, v0 + R.b)
        return float(np.sum(self.wr2 * q))

    def integrals(self, corners, a, b, angles) -> np.ndarray:
        """Vectorized ``integral`` over many rectangles given as arrays."""
        corners = np.asarray(corners, dtype=float).reshape(-1, 2)
        a = np.broadcast_to(np.asarray(a, dtype=float), (len(corners),))
        b = np.broadcast_to(np.asarray(b, dtype=float), (len(corners),))
        angles = np.broadcast_to(np.asarray(angles, dtype=float), (len(corners),))
        out = np.zeros(len(corners))
        if len(self) == 0:
            return out
        step = max(1, _BLOCK // len(self))
        for lo in range(0, len(corners), step):
            sl = slice(lo, lo + step)
            c = np.cos(angles[sl])[:, None]
            s = np.sin(angles[sl])[:, None]
            u0 = c * corners[sl, 0:1] + s * corners[sl, 1:2]
            v0 = -s * corners[sl, 0:1] + c * corners[sl, 1:2]
            cu = c * self.cx + s * self.cy
            cv = -s * self.cx + c * self.cy
            q = unit_box_areas(cu, cv, self.r, u0, u0 + a[sl, None], v0, v0 + b[sl, None])
            out[sl] = q @ self.wr2
        return out

    def total_integral(self) -> float:
        return float(np.sum(self.masses))

    def assert_disjoint(self) -> None:
        n = len(self)
        if n < 2:
            return
        order = np.argsort(self.cx)
        cx, cy, r = self.cx[order], self.cy[order], self.r[order]
        rmax = float(r.max())
        for i in range(n):
            # sweep: only atoms whose x-extent can overlap
            j = i + 1
            while j < n and cx[j] - cx[i] < r[i] + rmax:
                if math.hypot(cx[j] - cx[i], cy[j] - cy[i]) < r[i] + r[j]:
                    raise ValueError(f"atoms overlap: {order[i]} and {order[j]}")
                j += 1

    def translate(self, d) -> "DiskSum":
        return DiskSum(self.cx + d[0], self.cy + d[1], self.r, wr2=self.wr2)

    def rotate(self, s: float) -> "DiskSum":
        if s == 0.0:
            return self
        p = rot_point(np.stack([self.cx, self.cy], axis=-1), s)
        return DiskSum(p[:, 0], p[:, 1], self.r, wr2=self.wr2)

    def scale(self, t: float) -> "DiskSum":
        """Geometric scaling of the supports by ``t``, densities unchanged."""
        return DiskSum(self.cx * t, self.cy * t, self.r * t, wr2=self.wr2 * (t * t))

    def to_json(self) -> dict:
        return {"atoms": [{"cx": float(x), "cy": float(y), "r": float(r), "w": float(w)}
                          for x, y, r, w in zip(self.cx, self.cy, self.r, self.w)]}

    @classmethod
    def from_json(cls, d: dict | str) -> "DiskSum":
        if isinstance(d, str):
            d = json.loads(d)
        atoms = d["atoms"]
        return cls([a["cx"] for a in atoms], [a["cy"] for a in atoms],
                   [a["r"] for a in atoms], [a["w"] for a in atoms])


def total_abs_integral(f: DiskSum) -> float:
    """``int |f|``; atoms must be pairwise disjoint for this to equal sum |w| |disk|."""
    f.assert_disjoint()
    return float(np.sum(np.abs(f.masses)))


def _lattice_points_near_segment(p, q, rho: float) -> set[tuple[int, int]]:
    """Integer points within distance ``rho`` of the segment pq (superset-free)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    L = float(np.hypot(*d))
    out: set[tuple[int, int]] = set()
    swap = abs(d[1]) > abs(d[0])
    if swap:
        p, q, d = p[::-1], q[::-1], d[::-1]
    # iterate over the major axis; the tube spans +-h on the minor axis
    lo = math.floor(min(p[0], q[0]) - rho)
    hi = math.ceil(max(p[0], q[0]) + rho)
    slope = d[1] / d[0] if d[0] != 0 else 0.0
    h = rho * math.sqrt(1 + slope * slope) + 1e-9
    for xi in range(lo, hi + 1):
        t = min(max(xi, min(p[0], q[0])), max(p[0], q[0]))
        yc = p[1] + slope * (t - p[0]) if d[0] != 0 else p[1]
        for yi in range(math.floor(yc - h - rho), math.ceil(yc + h + rho) + 1):
            # exact point-segment distance
            w = np.array([xi, yi], dtype=float) - p
            tt = 0.0 if L == 0 else min(max(float(w @ d) / (L * L), 0.0), 1.0)
            if math.hypot(*(w - tt * d)) <= rho:
                out.add((yi, xi) if swap else (xi, yi))
    return out


class LatticeFunction:
    """``sum_c bump_c(x - c)`` over lattice points ``c`` in Z^2.

    The bump at ``c`` is ``base`` scaled geometrically by ``2^-(|c1|+|c2|)``
    (densities rescaled so each bump keeps the same signed/absolute masses).
    Cells with ``max(|c1|, |c2|) > window`` are not materialized; their
    contribution is reported as an error radius using ``tail_mass``.
    """

    def __init__(self, base: DiskSum, window: int | None = None, params: dict | None = None,
                 tail_mass: float = 0.5, restricted: bool = False):
        self.base = base
        self.window = window
        # restricted: cells beyond the window are absent (a finite sum), not a tail
        self.restricted = restricted
        self.params = dict(params or {})
        self.tail_mass = tail_mass
        (bx, by), brad = base.enclosing
        self.base_radius = float(math.hypot(bx, by) + brad)
        rmin = float(base.r.min()) if len(base) else 1.0
        self.max_depth = min(_MAX_DEPTH, int(math.log2(rmin / 1e-290)))

    def cell_scale(self, c) -> float:
        return 2.0 ** -(abs(int(c[0])) + abs(int(c[1])))

    def support_radius(self, c) -> float:
        return self.base_radius * self.cell_scale(c)

    @lru_cache(maxsize=4096)
    def cell(self, c1: int, c2: int) -> DiskSum:
        """The bump of cell (c1, c2), placed at the lattice point."""
        t = self.cell_scale((c1, c2))
        b = self.base
        # masses are kept: w r^2 is invariant
        return DiskSum(b.cx * t + c1, b.cy * t + c2, b.r * t, wr2=b.wr2)

    @lru_cache(maxsize=4096)
    def local(self, c1: int, c2: int) -> DiskSum:
        """The bump of cell (c1, c2) centered at the origin.  Integrating it
        over ``R - c`` avoids absorbing tiny offsets into the large coordinate c."""
        t = self.cell_scale((c1, c2))
        b = self.base
        return DiskSum(b.cx * t, b.cy * t, b.r * t, wr2=b.wr2)

    def present(self, c) -> bool:
        """False for cells that are not part of a restricted function."""
        return not (self.restricted and self.window is not None
                    and max(abs(c[0]), abs(c[1])) > self.window)

    def _materialized(self, c) -> bool:
        if abs(c[0]) + abs(c[1]) > self.max_depth:
            return False
        return self.window is None or max(abs(c[0]), abs(c[1])) <= self.window

    def eval(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        pts = x.reshape(-1, 2)
        out = np.zeros(len(pts))
        cells = np.rint(pts).astype(int)
        for i, (p, c) in enumerate(zip(pts, cells)):
            c = (int(c[0]), int(c[1]))
            if self._materialized(c) and math.hypot(p[0] - c[0], p[1] - c[1]) < self.support_radius(c):
                out[i] = self.cell(*c).eval(p)
        return float(out[0]) if x.ndim == 1 else out.reshape(x.shape[:-1])

    def boundary_cells(self, R: Rectangle) -> set[tuple[int, int]]:
        """Cells whose support can meet the boundary of ``R``."""
        rho = self.base_radius
        v = R.vertices()
        cells: set[tuple[int, int]] = set()
        for i in range(4):
            cells |= _lattice_points_near_segment(v[i], v[(i + 1) % 4], rho)
        return cells

    def integral_rect(self, R: Rectangle) -> Estimate:
        """Signed integral over ``R``; cells fully inside or outside contribute 0."""
        val, err = 0.0, 0.0
        c, s, u0, v0 = R.frame
        for cell in self.boundary_cells(R):
            rho = self.support_radius(cell)
            cu = c * cell[0] + s * cell[1]
            cv = -s * cell[0] + c * cell[1]
            if (cu - rho >= u0 + R.a or cu + rho <= u0 or cv - rho >= v0 + R.b or cv + rho <= v0):
                continue
            if (cu - rho > u0 and cu + rho < u0 + R.a and cv - rho > v0 and cv + rho < v0 + R.b):
                continue
            if not self.present(cell):
                continue
            if self._materialized(cell):
                val += self.local(*cell).integral(R.translate((-cell[0], -cell[1])))
            else:
                err += self.tail_mass
        return Estimate(val, err)

    def cell_masses(self, c) -> tuple[float, float]:
        """(signed, absolute) integral of the bump of cell ``c``."""
        bump = self.cell(int(c[0]), int(c[1]))
        m = bump.masses
        return float(m.sum()), float(np.abs(m).sum())

    def to_json(self) -> dict:
        return {"type": "LatticeFunction", "params": self.params, "window": self.window,
                "restricted": self.restricted}


class Dilated:
    """``x -> f(n x)``."""

    def __init__(self, f, n: int):
        if int(n) != n or n < 1:
            raise ValueError("dilation factor must be a positive integer")
        self.f = f
        self.n = int(n)

    def eval(self, x):
        return self.f.eval(np.asarray(x, dtype=float) * self.n)

    def integral_rect(self, R: Rectangle) -> Estimate:
        return integral_rect(self.f, R.scale(self.n)).scaled(1.0 / (self.n * self.n))


def dilate(f, n: int):
    """The function ``x -> f(n x)``; integrals scale by ``1/n^2``."""
    if int(n) != n or n < 1:
        raise ValueError("dilation factor must be a positive integer")
    if n == 1:
        return f
    if isinstance(f, DiskSum):
        return f.scale(1.0 / n)
    if isinstance(f, Dilated):
        return Dilated(f.f, f.n * n)
    return Dilated(f, n)


@dataclass
class SeriesFunction:
    """Finite series ``sum_j coeff_j * base_j(n_j x)``."""

    terms: list[tuple[float, object, int]] = field(default_factory=list)
    levels: list[int] = field(default_factory=list)

    def __post_init__(self):
        ns = [n for _, _, n in self.terms]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("series dilations must be strictly increasing")

    def term(self, i: int):
        coeff, base, n = self.terms[i]
        return coeff, dilate(base, n)

    def eval(self, x):
        total = 0.0
        for i in range(len(self.terms)):
            coeff, g = self.term(i)
            total = total + coeff * np.asarray(g.eval(x))
        return total

    def integral_rect(self, R: Rectangle) -> Estimate:
        out = Estimate(0.0)
        for i in range(len(self.terms)):
            coeff, g = self.term(i)
            out = out + integral_rect(g, R).scaled(coeff)
        return out


def integral_rect(f, R: Rectangle) -> Estimate:
    """Integral of any supported function over ``R`` with an error radius."""
    if isinstance(f, DiskSum):
        return Estimate(f.integral(R))
    if hasattr(f, "integral_rect"):
        return f.integral_rect(R)
    raise TypeError(f"cannot integrate {type(f).__name__}")


def eval_f(f, x):
    return f.eval(x)


class ZeroFunction:
    def eval(self, x):
        x = np.asarray(x, dtype=float)
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[:-1])

    def integral_rect(self, R: Rectangle) -> Estimate:
        return Estimate(0.0)
