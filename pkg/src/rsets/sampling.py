"""Seeded random generation.  Every chunk of trials gets its own generator derived
from (seed, chunk index), so results do not depend on how chunks are scheduled."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

CHUNK = 20_000


def chunk_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *map(int, keys)]))


def chunks(total: int, size: int = CHUNK):
    for i, lo in enumerate(range(0, total, size)):
        yield i, min(size, total - lo)


def map_chunks(fn, jobs: list, workers: int = 1) -> list:
    """``[fn(j) for j in jobs]``, optionally over a process pool; order is kept."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def cluster_rects(rng: np.random.Generator, n: int, pts: np.ndarray, eps: float,
                  angle_lo: float, angle_hi: float):
    """Rectangles probing a multi-scale point cluster near the origin.

    A binary scale level is drawn first, then a center near a cluster point (or
    the origin) at that scale, log-uniform sides around the scale, and a uniform
    angle in [angle_lo, angle_hi].  Returns (corners, a, b, angles).
    """
    levels = int(np.max(np.abs(np.log2(np.abs(pts[:, 0]) / eps)))) + 2
    j = rng.integers(0, levels + 1, n)
    L = eps * np.ldexp(1.0, -j)
    anchor = pts[rng.integers(0, len(pts), n)]
    anchor = np.where(rng.random(n)[:, None] < 0.25, 0.0, anchor)
    center = anchor + (rng.random((n, 2)) * 2 - 1) * L[:, None] * 1.5
    a = L * np.exp(rng.uniform(math.log(1 / 8), math.log(8), n))
    b = L * np.exp(rng.uniform(math.log(1 / 8), math.log(8), n))
    ang = rng.uniform(angle_lo, angle_hi, n)
    c, s = np.cos(ang), np.sin(ang)
    corners = np.stack([center[:, 0] - (c * a - s * b) / 2, center[:, 1] - (s * a + c * b) / 2], -1)
    return corners, a, b, ang


def hugging_rects(rng: np.random.Generator, groups: list[np.ndarray], angle_lo: float,
                  angle_hi: float, slack: float = 0.5):
    """Rectangles that tightly enclose each given point group (bounding box in
    the rotated frame plus small random margins relative to the group size)."""
    n = len(groups)
    ang = rng.uniform(angle_lo, angle_hi, n)
    corners = np.empty((n, 2))
    a = np.empty(n)
    b = np.empty(n)
    for i, g in enumerate(groups):
        c, s = math.cos(ang[i]), math.sin(ang[i])
        u = c * g[:, 0] + s * g[:, 1]
        v = -s * g[:, 0] + c * g[:, 1]
        size = max(float(np.ptp(u)), float(np.ptp(v)), float(np.min(np.hypot(g[:, 0], g[:, 1]))))
        m = rng.uniform(1e-3, slack, 4) * size
        u0, u1 = u.min() - m[0], u.max() + m[1]
        v0, v1 = v.min() - m[2], v.max() + m[3]
        corners[i] = (c * u0 - s * v0, s * u0 + c * v0)
        a[i] = u1 - u0
        b[i] = v1 - v0
    return corners, a, b, ang
