"""Measures of periodic planar sets: pixel carriers, delta-sets, the refinement
chain B -> B' -> B'' -> B~ and unions of dilated refined sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Rectangle
from .sampling import chunk_rng


# ---------------------------------------------------------------------------
# pixel sets

@dataclass
class PixelSet:
    """Boolean mask over a W x W window of unit cells, G pixels per unit side.

    Pixel (i, j) (row i, column j) covers
    [o1 - 1/2 + j/G, o1 - 1/2 + (j+1)/G) x [o2 - 1/2 + i/G, o2 - 1/2 + (i+1)/G)
    where (o1, o2) is the lower-left cell of the window.
    """

    mask: np.ndarray
    G: int
    origin: tuple[int, int] = (0, 0)

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        H, W = self.mask.shape
        if H != W or H % self.G:
            raise ValueError("mask must cover a square window of whole cells")

    @property
    def cells(self) -> int:
        return self.mask.shape[0] // self.G

    @classmethod
    def full(cls, G: int, cells: int = 1) -> "PixelSet":
        return cls(np.ones((G * cells, G * cells), bool), G)

    @classmethod
    def empty(cls, G: int, cells: int = 1) -> "PixelSet":
        return cls(np.zeros((G * cells, G * cells), bool), G)

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.mask.shape[0]
        t = (np.arange(n) + 0.5) / self.G - 0.5
        return t + self.origin[0], t + self.origin[1]

    @classmethod
    def from_predicate(cls, pred, G: int, cells: int = 1, origin=(0, 0), block: int = 1 << 20) -> "PixelSet":
        """Evaluate ``pred(points (k, 2)) -> bool (k,)`` at pixel centers."""
        n = G * cells
        t = (np.arange(n) + 0.5) / G - 0.5
        xs, ys = t + origin[0], t + origin[1]
        mask = np.zeros((n, n), bool)
        rows = max(1, block // n)
        for i in range(0, n, rows):
            X, Y = np.meshgrid(xs, ys[i:i + rows])
            mask[i:i + rows] = np.asarray(pred(np.stack([X.ravel(), Y.ravel()], -1))).reshape(X.shape)
        return cls(mask, G, tuple(origin))

    def _check(self, other: "PixelSet"):
        if self.G != other.G or self.mask.shape != other.mask.shape or self.origin != other.origin:
            raise ValueError("pixel sets live on different grids")

    def __or__(self, other):
        self._check(other)
        return PixelSet(self.mask | other.mask, self.G, self.origin)

    def __and__(self, other):
        self._check(other)
        return PixelSet(self.mask & other.mask, self.G, self.origin)

    def __invert__(self):
        return PixelSet(~self.mask, self.G, self.origin)

    @property
    def density(self) -> float:
        return float(self.mask.mean())

    def cell_areas(self) -> np.ndarray:
        W, G = self.cells, self.G
        return self.mask.reshape(W, G, W, G).mean(axis=(1, 3))

    def pullback(self, n: int) -> "PixelSet":
        """dil_n on a single periodic cell: pixel p is in the result iff the pixel
        containing n p (mod 1) is in the set.  Sampling at pixel corners makes the
        index map exact; density is preserved whenever the set is constant on the
        aligned n x n pixel blocks."""
        if self.cells != 1:
            raise ValueError("pullback acts on a single periodic cell")
        if self.G % n:
            raise ValueError("G must be a multiple of n")
        shift = 0 if n % 2 else self.G // 2
        idx = (n * np.arange(self.G) + shift) % self.G
        return PixelSet(self.mask[np.ix_(idx, idx)], self.G, self.origin)

    def to_pbm(self) -> bytes:
        """Plain PBM (P1), top row = largest y."""
        rows = np.flipud(self.mask).astype(np.uint8)
        h, w = rows.shape
        body = "\n".join(" ".join(map(str, r)) for r in rows)
        return f"P1\n{w} {h}\n{body}\n".encode()

    @classmethod
    def from_pbm(cls, data: bytes, G: int, origin=(0, 0)) -> "PixelSet":
        toks = [t for line in data.decode().splitlines() if not line.startswith("#") for t in line.split()]
        if toks[0] != "P1":
            raise ValueError("only plain PBM is supported")
        w, h = int(toks[1]), int(toks[2])
        bits = np.array([int(c) for t in toks[3:] for c in t], dtype=bool)
        return cls(np.flipud(bits.reshape(h, w)), G, tuple(origin))

    def to_csv(self) -> str:
        """Per-cell areas, one line per cell."""
        A = self.cell_areas()
        lines = ["cell_k1,cell_k2,area"]
        for i in range(self.cells):
            for j in range(self.cells):
                lines.append(f"{self.origin[0] + j},{self.origin[1] + i},{float(A[i, j])!r}")
        return "\n".join(lines) + "\n"


def mes_bounds(A, window: int | None = None, tail: float | None = None) -> tuple[float, float, float | None]:
    """(mes_*, mes^*, tail) over a window of cells.

    ``A`` may be a PixelSet (pixel counting), an object with ``cell_area(k)``
    (exact per-cell areas, evaluated on |k|_inf <= window) or a number (a
    periodic set's common cell area).  Cells outside the window are bounded by
    ``tail``, which is required for non-periodic analytic sets.
    """
    if isinstance(A, PixelSet):
        a = A.cell_areas()
        return float(a.min()), float(a.max()), tail
    if isinstance(A, (int, float)):
        return float(A), float(A), tail
    if hasattr(A, "cell_area"):
        if window is None:
            raise ValueError("window required for analytic sets")
        if not getattr(A, "periodic", False) and tail is None:
            raise ValueError("missing tail bound for a non-periodic set")
        vals = [A.cell_area((i, j)) for i in range(-window, window + 1) for j in range(-window, window + 1)]
        lo, hi = min(vals), max(vals)
        if tail is not None:
            hi = max(hi, tail)
        return float(lo), float(hi), tail
    raise TypeError(f"cannot measure {type(A).__name__}")


# ---------------------------------------------------------------------------
# convex polygon areas

def _clip(poly: np.ndarray, axis: int, bound: float, keep_below: bool) -> np.ndarray:
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        pin = p[axis] <= bound if keep_below else p[axis] >= bound
        qin = q[axis] <= bound if keep_below else q[axis] >= bound
        if pin:
            out.append(p)
        if pin != qin:
            t = (bound - p[axis]) / (q[axis] - p[axis])
            out.append(p + t * (q - p))
    return np.array(out) if out else np.empty((0, 2))


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def rect_box_area(R: Rectangle, lo, hi) -> float:
    """|R cap [lo, hi)| for an axis-aligned box."""
    poly = R.vertices()
    for axis in (0, 1):
        poly = _clip(poly, axis, lo[axis], False)
        if len(poly) == 0:
            return 0.0
        poly = _clip(poly, axis, hi[axis], True)
        if len(poly) == 0:
            return 0.0
    return polygon_area(poly)


# ---------------------------------------------------------------------------
# delta-sets

def _frame_boxes(rects: list[Rectangle], s: float) -> np.ndarray:
    """(u0, u1, v0, v1) of each rectangle in the frame of slope s."""
    c, sn = math.cos(s), math.sin(s)
    out = np.empty((len(rects), 4))
    for i, R in enumerate(rects):
        u0 = c * R.corner[0] + sn * R.corner[1]
        v0 = -sn * R.corner[0] + c * R.corner[1]
        out[i] = (u0, u0 + R.a, v0, v0 + R.b)
    return out


def _overlap_open(b1, b2) -> bool:
    return b1[0] < b2[1] and b2[0] < b1[1] and b1[2] < b2[3] and b2[2] < b1[3]


@dataclass
class DeltaSet:
    """Disjoint rectangles of a common angle with all sides >= delta, repeated with
    period ``period`` in both coordinates (cells k with 0 <= k_i < period form one period)."""

    rects: list[Rectangle]
    slope: float
    delta: float
    period: int = 1
    periodic: bool = field(default=True, init=False)

    def __post_init__(self):
        for R in self.rects:
            if abs(R.angle - self.slope) > 1e-15:
                raise ValueError("all rectangles must share the slope")
            if R.a < self.delta or R.b < self.delta:
                raise ValueError(f"rectangle side below delta={self.delta}")
        boxes = self._periodic_boxes(self.rects)
        n = len(self.rects)
        for i in range(n):
            for j, bj in enumerate(boxes):
                if j % n == i and j < n:
                    continue
                if _overlap_open(boxes[i], bj):
                    raise ValueError("delta-set rectangles overlap")

    def _translates(self):
        P = self.period
        return [(P * i, P * j) for i in (-1, 0, 1) for j in (-1, 0, 1)]

    def _periodic_boxes(self, rects):
        c, sn = math.cos(self.slope), math.sin(self.slope)
        base = _frame_boxes(rects, self.slope)
        out = []
        for dx, dy in [(0, 0)] + [t for t in self._translates() if t != (0, 0)]:
            du, dv = c * dx + sn * dy, -sn * dx + c * dy
            out.extend(base + np.array([du, du, dv, dv]))
        return np.array(out)

    def all_copies(self) -> list[Rectangle]:
        return [R.translate(t) for t in self._translates() for R in self.rects]

    def cell_area(self, k) -> float:
        k = (int(k[0]) % self.period, int(k[1]) % self.period)
        lo = np.array(k, float) - 0.5
        return sum(rect_box_area(R, lo, lo + 1) for R in self.all_copies())

    def mes_lower(self) -> float:
        P = self.period
        return min(self.cell_area((i, j)) for i in range(P) for j in range(P))

    def contains(self, x) -> np.ndarray:
        """Membership of points (k, 2), reduced into one period."""
        x = np.asarray(x, dtype=float).reshape(-1, 2)
        P = self.period
        y = np.mod(x + 0.5, P) - 0.5
        out = np.zeros(len(y), bool)
        c, sn = math.cos(self.slope), math.sin(self.slope)
        u = c * y[:, 0] + sn * y[:, 1]
        v = -sn * y[:, 0] + c * y[:, 1]
        for b in self._periodic_boxes(self.rects):
            out |= (u > b[0]) & (u < b[1]) & (v > b[2]) & (v < b[3])
        return out


def synthetic_delta_set(rng: np.random.Generator, density: float, delta: float, slope: float = 0.0,
                        period: int = 1, pieces: int = 1) -> DeltaSet:
    """``pieces`` disjoint rectangles per cell with total cell area ``density``,
    randomly placed (axis-aligned when slope = 0)."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rects = []
    for i in range(period):
        for j in range(period):
            # split the cell into `pieces` horizontal bands, one rectangle each
            h = 1.0 / pieces
            area = density / pieces
            for p in range(pieces):
                for _ in range(1000):
                    if slope:
                        b = min(h, math.sqrt(area) * rng.uniform(0.9, 1.1))
                    else:
                        b = rng.uniform(max(delta, area), h) if area <= h * h else h
                    a = area / b
                    if a <= 1 and a >= delta and b >= delta:
                        break
                else:
                    raise ValueError("cannot fit the requested density")
                x0 = i - 0.5 + rng.uniform(0, 1 - a)
                y0 = j - 0.5 + p * h + rng.uniform(0, h - b)
                R = Rectangle((x0, y0), a, b, 0.0)
                if slope:
                    R = Rectangle.from_center((i + rng.uniform(-0.05, 0.05), j - 0.5 + (p + 0.5) * h),
                                              a, b, slope)
                rects.append(R)
    return DeltaSet(rects, slope, delta, period)


# ---------------------------------------------------------------------------
# greedy disjoint selection

def union_area_boxes(boxes: np.ndarray) -> float:
    """Exact area of a union of axis-parallel boxes (u0, u1, v0, v1)."""
    if len(boxes) == 0:
        return 0.0
    us = np.unique(boxes[:, :2])
    vs = np.unique(boxes[:, 2:])
    cover = np.zeros((len(us) - 1, len(vs) - 1), bool)
    for b in boxes:
        i0, i1 = np.searchsorted(us, b[0]), np.searchsorted(us, b[1])
        j0, j1 = np.searchsorted(vs, b[2]), np.searchsorted(vs, b[3])
        cover[i0:i1, j0:j1] = True
    return float(np.diff(us) @ cover @ np.diff(vs))


@dataclass
class Selection:
    picked: list[int]
    ratio: float
    fallback: bool = False


def greedy_disjoint(rects: list[Rectangle]) -> Selection:
    """Pairwise disjoint subfamily of congruent same-angle rectangles, scanned in
    row-major order of their centers; the covered fraction must reach 1/4."""
    if not rects:
        return Selection([], 1.0)
    R0 = rects[0]
    for R in rects:
        if abs(R.angle - R0.angle) > 1e-15 or abs(R.a - R0.a) > 1e-12 * R0.a or abs(R.b - R0.b) > 1e-12 * R0.b:
            raise ValueError("greedy_disjoint needs congruent rectangles of one slope")
    boxes = _frame_boxes(rects, R0.angle)
    order = np.lexsort((boxes[:, 0], boxes[:, 2]))
    picked: list[int] = []
    for i in order:
        if all(not _overlap_open(boxes[i], boxes[j]) for j in picked):
            picked.append(int(i))
    total = union_area_boxes(boxes)
    ratio = union_area_boxes(boxes[picked]) / total if total > 0 else 1.0
    if ratio >= 0.25:
        return Selection(sorted(picked), ratio)
    best = _exhaustive(boxes)
    ratio = union_area_boxes(boxes[best]) / total
    if ratio < 0.25:
        raise AssertionError(f"disjoint selection covers only {ratio:.4f} of the union")
    return Selection(sorted(best), ratio, True)


def _exhaustive(boxes: np.ndarray, limit: int = 22) -> list[int]:
    n = len(boxes)
    if n > limit:
        raise AssertionError(f"greedy ratio below 1/4 and {n} rectangles is too many to enumerate")
    best: list[int] = []

    def rec(i, cur):
        nonlocal best
        if len(cur) + (n - i) <= len(best):
            return
        if i == n:
            best = list(cur)
            return
        if all(not _overlap_open(boxes[i], boxes[j]) for j in cur):
            rec(i + 1, cur + [i])
        rec(i + 1, cur)

    rec(0, [])
    return best


# ---------------------------------------------------------------------------
# refinement chain

def cover_by_squares(R: Rectangle, side: float) -> list[Rectangle]:
    """Squares of the given side (same angle) covering R exactly, the last row and
    column shifted back to end flush with R."""
    if R.a < side * (1 - 1e-12) or R.b < side * (1 - 1e-12):
        raise ValueError("rectangle smaller than the covering square")
    na, nb = math.ceil(R.a / side - 1e-9), math.ceil(R.b / side - 1e-9)
    us = [min(i * side, R.a - side) for i in range(na)]
    vs = [min(j * side, R.b - side) for j in range(nb)]
    c, s = math.cos(R.angle), math.sin(R.angle)
    out = []
    for v in vs:
        for u in us:
            out.append(Rectangle((R.corner[0] + c * u - s * v, R.corner[1] + s * u + c * v), side, side, R.angle))
    return out


@dataclass
class Refined:
    """B~ for a delta-set B: for every cell type k (mod period) of the 1/m grid, the
    boolean pattern of selected 1/n sub-squares, q = n/m per side."""

    m: int
    n: int
    period: int
    patterns: dict
    count: int
    stats: dict

    @property
    def q(self) -> int:
        return self.n // self.m

    @property
    def cell_density(self) -> float:
        """|B~ cap Q_k^m| / |Q_k^m|, the same for every k."""
        return self.count / self.q**2

    def contains_int(self, X: np.ndarray, Y: np.ndarray, F: int) -> np.ndarray:
        """Membership of the points ((X + 1/2)/F - 1/2, (Y + 1/2)/F - 1/2) of the cell
        Q_0 given by integer coordinates on a grid of resolution F (n | F)."""
        if F % self.n:
            raise ValueError("resolution must be a multiple of n")
        Qt = F // self.m
        out = np.zeros(X.shape, bool)
        idx = []
        for Z in (X, Y):
            num = 2 * Z + 1 - F + Qt  # 2 Qt (m z + 1/2)
            K = num // (2 * Qt)
            sub = ((num - 2 * Qt * K) * self.q) // (2 * Qt)
            idx.append((K, sub))
        (K1, s1), (K2, s2) = idx
        P = self.period
        for (k1, k2), pat in self.patterns.items():
            sel = (np.mod(K1, P) == k1) & (np.mod(K2, P) == k2)
            if np.any(sel):
                out[sel] = pat[s2[sel], s1[sel]]
        return out


def refine_delta_set(B: DeltaSet, m: int, n: int) -> Refined:
    """B -> B' (squares of side delta/m inside single cells of the 1/m grid) ->
    B'' (greedy disjoint) -> B~ (contained 1/n grid squares, equalized counts).

    Works in cell coordinates y = m x - k, where the cell is [-1/2, 1/2)^2 and
    the squares have side delta; the type of cell k is k mod period.
    """
    mes = B.mes_lower()
    if not mes > 12 * B.delta:
        raise ValueError(f"precondition mes_*B > 12 delta fails: {mes:.6g} <= {12 * B.delta:.6g}")
    if not n > 4 / B.delta * m:
        raise ValueError(f"precondition n > (4/delta) m fails: {n} <= {4 / B.delta * m:.6g}")
    if n % m or (n // m) % 2 == 0:
        raise ValueError("n/m must be an odd integer so the 1/n grid refines the 1/m cells")
    q = n // m
    P = B.period
    squares = [sq for R in B.all_copies() for sq in cover_by_squares(R, B.delta)]
    boxes_all = _frame_boxes(squares, B.slope) if squares else np.empty((0, 4))
    verts = np.array([sq.vertices() for sq in squares]) if squares else np.empty((0, 4, 2))
    # sub-square corners in cell coordinates
    g = np.arange(q + 1) / q - 0.5
    c, sn = math.cos(B.slope), math.sin(B.slope)
    patterns, stats = {}, {}
    for k1 in range(P):
        for k2 in range(P):
            lo = np.array([k1, k2], float) - 0.5
            inside = np.all((verts >= lo - 1e-12) & (verts <= lo + 1 + 1e-12), axis=(1, 2))
            idx = np.nonzero(inside)[0]
            cell_sq = [squares[i] for i in idx]
            union_prime = union_area_boxes(boxes_all[idx])
            sel = greedy_disjoint(cell_sq)
            picked = [cell_sq[i] for i in sel.picked]
            union_second = sum(R.area for R in picked)
            pat = np.zeros((q, q), bool)
            X, Y = np.meshgrid(g + k1, g + k2)
            U = c * X + sn * Y
            V = -sn * X + c * Y
            for R in picked:
                _, _, u0, v0 = R.frame
                ok = (U >= u0 - 1e-12) & (U <= u0 + R.a + 1e-12) & (V >= v0 - 1e-12) & (V <= v0 + R.b + 1e-12)
                pat |= ok[:-1, :-1] & ok[1:, :-1] & ok[:-1, 1:] & ok[1:, 1:]
            patterns[(k1, k2)] = pat
            stats[(k1, k2)] = {"B_prime": union_prime, "B_second": union_second,
                               "greedy_ratio": sel.ratio, "fallback": sel.fallback,
                               "squares": int(pat.sum())}
    count = min(int(p.sum()) for p in patterns.values())
    for key, pat in patterns.items():
        extra = int(pat.sum()) - count
        if extra:
            flat = pat.ravel()
            on = np.nonzero(flat)[0]
            flat[on[len(on) - extra:]] = False  # drop the last squares in row-major order
            patterns[key] = flat.reshape(q, q)
    ref = Refined(m, n, P, patterns, count, {"mes_B": mes, "cells": stats})
    check_refinement(B, ref)
    return ref


def check_refinement(B: DeltaSet, ref: Refined) -> dict:
    """Assert properties 1)-4) of B~ and the intermediate measure bounds."""
    mes = ref.stats["mes_B"]
    q = ref.q
    g = np.arange(q + 1) / q - 0.5
    res = {}
    # 1) B~ inside dil_m B: every selected sub-square lies in one rectangle of B
    copies = B.all_copies()
    for (k1, k2), pat in ref.patterns.items():
        ii, jj = np.nonzero(pat)
        if not len(ii):
            continue
        corners = []
        for di, dj in ((0, 0), (0, 1), (1, 0), (1, 1)):
            corners.append(np.stack([g[jj + dj] + k1, g[ii + di] + k2], -1))
        ok = np.zeros(len(ii), bool)
        for R in copies:
            c, s, u0, v0 = R.frame
            inR = np.ones(len(ii), bool)
            for p in corners:
                u = c * p[:, 0] + s * p[:, 1]
                v = -s * p[:, 0] + c * p[:, 1]
                inR &= (u >= u0 - 1e-12) & (u <= u0 + R.a + 1e-12) & (v >= v0 - 1e-12) & (v <= v0 + R.b + 1e-12)
            ok |= inR
        if not ok.all():
            raise AssertionError(f"property 1 fails in cell {(k1, k2)}")
    res["subset_of_dilation"] = True
    # 2) union of 1/n grid squares: by construction of the pattern grid
    res["grid_squares"] = True
    # 3) equal counts
    counts = {int(p.sum()) for p in ref.patterns.values()}
    if len(counts) != 1:
        raise AssertionError("property 3 fails: per-cell counts differ")
    res["equal_counts"] = ref.count
    # 4) measure
    dens = ref.cell_density
    if not dens > mes / 32:
        raise AssertionError(f"property 4 fails: {dens} <= {mes / 32}")
    res["density"] = dens
    res["bound"] = mes / 32
    for key, st in ref.stats["cells"].items():
        if not st["B_prime"] > mes / 2:
            raise AssertionError(f"B' measure bound fails in cell {key}")
        if not st["B_second"] > mes / 8:
            raise AssertionError(f"B'' measure bound fails in cell {key}")
    ref.stats["properties"] = res
    return res


# ---------------------------------------------------------------------------
# unions of dilated refined sets

@dataclass
class UnionReport:
    density: float
    bound: float
    identity_gap: float
    product_density: float
    cell_densities: list
    samples: int

    @property
    def margin(self) -> float:
        return self.density - self.bound

    def to_json(self) -> dict:
        return {"density": self.density, "bound": self.bound, "margin": self.margin,
                "identity_gap": self.identity_gap, "product_density": self.product_density,
                "cell_densities": self.cell_densities, "samples": self.samples}


def dilation_growth_ok(deltas, ns) -> bool:
    return ns[0] == 1 and all(ns[t + 1] > 4 / deltas[t] * ns[t] for t in range(len(ns) - 1))


def dilation_union(refined: list[Refined], mes_lowers: list[float], G: int = 2048, seed: int = 0) -> UnionReport:
    """Density of the union of the refined sets (each already on its own 1/n_t
    grid) on Q_0, measured by one exact membership test per G-pixel at a jittered
    point of the common fine grid F = n_{T+1}.

    The independence identity compares the measured union density with
    1 - prod(1 - |A~_t cap Q_0|).
    """
    if refined[0].m != 1:
        raise ValueError("the first dilation must be 1")
    for a, b in zip(refined, refined[1:]):
        if b.m != a.n:
            raise ValueError("consecutive refinements must chain (m_{t+1} = n_t)")
    F = refined[-1].n
    rng = chunk_rng(seed, 5)
    # one jittered fine-grid point per pixel
    base = np.arange(G)
    total = 0
    hits = 0
    rows = max(1, (1 << 20) // G)
    for r0 in range(0, G, rows):
        ri = base[r0:r0 + rows]
        I, J = np.meshgrid(ri, base, indexing="ij")
        # a uniform point of the pixel, mapped to the fine cell containing it
        X = np.floor((J + rng.random(J.shape)) * (F / G)).astype(np.int64)
        Y = np.floor((I + rng.random(I.shape)) * (F / G)).astype(np.int64)
        inside = np.zeros(X.shape, bool)
        for ref in refined:
            inside |= ref.contains_int(X, Y, F)
        hits += int(inside.sum())
        total += inside.size
    density = hits / total
    dens_t = [ref.cell_density for ref in refined]
    product = 1 - math.prod(1 - d for d in dens_t)
    bound = 1 - math.prod(1 - mu / 32 for mu in mes_lowers)
    return UnionReport(density, bound, abs(density - product), product, [density], total)


# ---------------------------------------------------------------------------
# level sets of maximal functions

@dataclass
class LevelSetEstimate:
    """Classification of sample points against ``M > threshold``.

    ``above``: a searched rectangle exceeds the threshold (sound lower bound);
    ``below``: an analytic certificate keeps the supremum at or below it;
    everything else is undetermined and counted against the claim.
    """

    above: np.ndarray
    below: np.ndarray
    threshold: float

    @property
    def undetermined(self) -> np.ndarray:
        return ~(self.above | self.below)

    @property
    def total(self) -> int:
        return int(self.above.size)

    @property
    def density_lo(self) -> float:
        """Certified lower estimate of the density of {M > threshold}."""
        return float(self.above.mean())

    @property
    def density_hi(self) -> float:
        """Pessimistic upper estimate of the density of {M > threshold}."""
        return float((~self.below).mean())

    @property
    def undetermined_fraction(self) -> float:
        return float(self.undetermined.mean())


def level_set(points: np.ndarray, threshold: float, certificate=None, search=None) -> LevelSetEstimate:
    """Classify ``points`` (k, 2) using ``certificate(x) -> upper bound`` and
    ``search(x) -> lower bound``; either may be None."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    below = np.zeros(len(points), bool)
    above = np.zeros(len(points), bool)
    for i, x in enumerate(points):
        if certificate is not None and certificate(x) <= threshold:
            below[i] = True
        elif search is not None and search(x) > threshold:
            above[i] = True
    return LevelSetEstimate(above, below, threshold)
