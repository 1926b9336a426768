"""Builders: two-ray point configurations, the signed bump, its periodization,
the hyperbolic witness region, slope-set splitting, schedules and series."""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .funcrep import DiskSum, LatticeFunction, SeriesFunction, integral_rect
from .geometry import HALF_PI, Disk, Rectangle, rect_contains, stab_count_arrays

# fraction of the tightest constraint used for the common radius
RADIUS_SAFETY = 0.45
# levels up to which triple spreads are enumerated exactly before bounding the rest
_SPREAD_LEVELS = 24


def default_n(eps: float) -> int:
    return int(math.floor(10.0 * eps**-3)) + 1


@dataclass(frozen=True)
class ThetaConfig:
    eps: float
    gamma: float
    n: int | None = None

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < self.gamma <= math.pi / 12 + 1e-15:
            raise ValueError(f"gamma must lie in (0, pi/12], got {self.gamma}")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be positive")

    @property
    def N(self) -> int:
        return default_n(self.eps) if self.n is None else self.n

    @property
    def overridden(self) -> bool:
        return self.n is not None and self.n != default_n(self.eps)

    @property
    def flat_bound(self) -> float:
        """The bound 10/N on |int_R phi| for rectangles in the flat slope band."""
        return 10.0 / self.N

    @property
    def bound_vacuous(self) -> bool:
        return not self.flat_bound < self.eps**3


def theta_points(cfg: ThetaConfig) -> tuple[np.ndarray, np.ndarray]:
    """Indices k = 1..N, -1..-N and the points (eps 2^-|k|, sign(k) tan(gamma) eps 2^-|k|)."""
    N = cfg.N
    if N > 1000:
        raise ValueError(f"N={N} underflows double precision; pass an explicit n")
    lev = np.arange(1, N + 1)
    idx = np.concatenate([lev, -lev])
    x = cfg.eps * np.ldexp(1.0, -np.abs(idx))
    pts = np.stack([x, np.sign(idx) * math.tan(cfg.gamma) * x], axis=-1)
    return idx, pts


def sign_sum(R: Rectangle, idx: np.ndarray, pts: np.ndarray, m: int | None = None) -> int:
    """Brute-force sum of sign(k) over theta_k in R with 0 < |k| <= m."""
    sel = np.ones(len(idx), bool) if m is None else np.abs(idx) <= m
    inside = rect_contains(R, pts[sel])
    return int(np.sum(np.sign(idx[sel])[inside]))


def sign_sums_batch(corners, a, b, angles, idx, pts) -> tuple[np.ndarray, np.ndarray]:
    """Membership matrix (rects x points) and sign sums, vectorized."""
    c = np.cos(angles)[:, None]
    s = np.sin(angles)[:, None]
    u0 = c * corners[:, 0:1] + s * corners[:, 1:2]
    v0 = -s * corners[:, 0:1] + c * corners[:, 1:2]
    u = c * pts[:, 0] + s * pts[:, 1]
    v = -s * pts[:, 0] + c * pts[:, 1]
    inside = (u > u0) & (u < u0 + a[:, None]) & (v > v0) & (v < v0 + b[:, None])
    return inside, inside @ np.sign(idx).astype(np.int64)


# ---------------------------------------------------------------------------
# radius selection

def _dir_ok(theta, lo, hi):
    t = np.mod(theta, math.pi)
    return (t >= lo) & (t <= hi)


def triple_min_spread(p1, p2, p3, lo: float, hi: float) -> np.ndarray:
    """min over line directions psi in [lo, hi] of the spread of the three
    projections onto the line normal; arrays of shape (n, 2).

    The spread is max_i |n(psi) . e_i| over the triangle edges e_i.  On each
    piece where one term dominates it is concave, so the minimum sits at an
    endpoint or where two terms cross; crossings of c1|sin(psi-b1)| and
    c2|sin(psi-b2)| are the directions of e1 +- e2.
    """
    e1 = p1 - p2
    e2 = p2 - p3
    e3 = p1 - p3
    cands = [e1, e2, e3, e1 - e2, e1 + e3, e2 + e3]
    n = len(p1)
    best = np.full(n, np.inf)

    def spread_at(psi):
        nx, ny = -np.sin(psi), np.cos(psi)
        return np.maximum.reduce([np.abs(nx * e[:, 0] + ny * e[:, 1]) for e in (e1, e2, e3)])

    for psi in (lo, hi):
        best = np.minimum(best, spread_at(np.full(n, psi)))
    for v in cands:
        psi = np.mod(np.arctan2(v[:, 1], v[:, 0]), math.pi)
        ok = (psi >= lo) & (psi <= hi)
        val = spread_at(psi)
        best = np.where(ok, np.minimum(best, val), best)
    return best


def _spread_rows(pts: np.ndarray, lo: float, hi: float, combos: np.ndarray) -> np.ndarray:
    out = np.empty(len(combos))
    step = 200_000
    for s in range(0, len(combos), step):
        c = combos[s:s + step]
        out[s:s + step] = triple_min_spread(pts[c[:, 0]], pts[c[:, 1]], pts[c[:, 2]], lo, hi)
    return out


def brute_min_spread(pts: np.ndarray, gamma: float) -> float:
    """Oracle: enumerate every triple."""
    combos = np.array(list(itertools.combinations(range(len(pts)), 3)))
    return float(_spread_rows(pts, 3 * gamma, math.pi - 3 * gamma, combos).min())


def min_triple_spread(cfg: ThetaConfig) -> float:
    """Minimum over all point triples and all banned directions of the projection spread.

    The configuration is self-similar (theta_{k+1} = theta_k / 2 on each ray),
    so a triple whose smallest level is m has spread 2^-(m-1) times that of its
    shift to level 1.  Triples with a point deeper than ``_SPREAD_LEVELS`` are
    bounded below by replacing the deep points with the origin, which moves each
    projection by at most the deep point's norm.
    """
    N = cfg.N
    lo, hi = 3 * cfg.gamma, math.pi - 3 * cfg.gamma
    M0 = min(N, _SPREAD_LEVELS)
    idx, pts = theta_points(ThetaConfig(cfg.eps, cfg.gamma, M0))
    lev = np.abs(idx)
    # triples with min level 1, max level <= M0, tagged by max level
    combos = np.array([c for c in itertools.combinations(range(len(pts)), 3)
                       if lev[list(c)].min() == 1])
    if len(combos):
        sp = _spread_rows(pts, lo, hi, combos)
        maxlev = lev[combos].max(axis=1)
    else:
        sp = np.array([]); maxlev = np.array([], int)
    S = {M: float(sp[maxlev <= M].min()) for M in range(2, M0 + 1) if np.any(maxlev <= M)}
    if N > M0:
        d = cfg.eps * 2.0 ** -(M0 + 1) / math.cos(cfg.gamma)
        origin = np.zeros((1, 2))
        ext = np.concatenate([pts, origin])
        o = len(pts)
        ones = np.where(lev == 1)[0]
        withO = np.array([(i, j, o) for i in ones for j in range(len(pts)) if j != i])
        lb = _spread_rows(ext, lo, hi, withO).min() - d
        single = _spread_rows(ext, lo, hi, np.array([(i, o, o) for i in ones])).min() - 2 * d
        s_far = min(S[M0], lb, single)
        if not s_far > 0:
            raise ValueError("spread lower bound is not positive; raise _SPREAD_LEVELS")
    best = math.inf
    for m in range(1, N):
        M = N - m + 1
        if M < 2:
            continue
        sm = S[M] if M <= M0 else s_far
        best = min(best, 2.0 ** -(m - 1) * sm)
    return best


@dataclass(frozen=True)
class RadiusChoice:
    r: float
    min_gap: float
    min_height: float
    min_spread: float
    containment: float


def select_radius(cfg: ThetaConfig) -> RadiusChoice:
    """Common ball radius satisfying disjointness, half-plane separation and the
    at-most-two-disks-per-steep-line condition; validated independently."""
    idx, pts = theta_points(cfg)
    # adjacent points realize the minimum gap; check all pairs anyway for N small
    if len(pts) <= 400:
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        np.fill_diagonal(d, np.inf)
        min_gap = float(d.min())
    else:
        min_gap = min_pair_gap(cfg)
    min_height = float(np.min(np.abs(pts[:, 1])))
    min_spread = min_triple_spread(cfg)
    containment = cfg.eps - float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
    r = RADIUS_SAFETY * min(min_gap / 2, min_height, min_spread / 2, containment)
    if not r > 0:
        raise AssertionError("radius selection produced no positive radius")
    choice = RadiusChoice(r, min_gap, min_height, min_spread, containment)
    check_ball_conditions(cfg, r)
    return choice


def min_pair_gap(cfg: ThetaConfig) -> float:
    # self-similar: the smallest gap is at the deepest level
    idx, pts = theta_points(ThetaConfig(cfg.eps, cfg.gamma, min(cfg.N, 8)))
    d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    np.fill_diagonal(d, np.inf)
    k = min(cfg.N, 8)
    return float(d.min()) * 2.0 ** -(cfg.N - k)


def steep_directions(gamma: float, count: int) -> np.ndarray:
    return np.linspace(3 * gamma, math.pi - 3 * gamma, count)


def check_ball_conditions(cfg: ThetaConfig, r: float, sweep: int = 721, refine: int = 2) -> None:
    """Assert the three ball conditions for radius ``r``; raises AssertionError."""
    idx, pts = theta_points(cfg)
    if not np.all(np.hypot(pts[:, 0], pts[:, 1]) + r < cfg.eps):
        raise AssertionError("a ball leaves B(eps)")
    if len(pts) <= 400:
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        np.fill_diagonal(d, np.inf)
        if not d.min() > 2 * r:
            raise AssertionError("balls overlap")
    if not np.all(np.sign(idx) * pts[:, 1] > r):
        raise AssertionError("a ball crosses the x-axis")
    dirs = steep_directions(cfg.gamma, sweep)
    counts = np.array([stab_count_arrays(t, pts, r) for t in dirs])
    # refine around the directions with the most hits
    for _ in range(refine):
        h = (dirs[1] - dirs[0]) if len(dirs) > 1 else 0.0
        worst = dirs[counts >= counts.max()]
        dirs = np.unique(np.clip(np.concatenate([w + np.linspace(-h, h, 21) for w in worst[:64]]),
                                 3 * cfg.gamma, math.pi - 3 * cfg.gamma))
        counts = np.array([stab_count_arrays(t, pts, r) for t in dirs])
        if counts.max() > 2:
            break
    if counts.max() > 2:
        raise AssertionError(f"a steep line meets {counts.max()} balls")


def build_phi(cfg: ThetaConfig, radius: RadiusChoice | None = None) -> tuple[DiskSum, RadiusChoice]:
    """Signed bump: weight +1/(2 pi N r^2) on upper balls, -1/(2 pi N r^2) on lower."""
    radius = radius or select_radius(cfg)
    idx, pts = theta_points(cfg)
    r = radius.r
    N = cfg.N
    # w r^2 = sign / (2 pi N)
    wr2 = np.sign(idx) / (2 * math.pi * N)
    phi = DiskSum(pts[:, 0], pts[:, 1], np.full(len(idx), r), wr2=wr2)
    return phi, radius


# ---------------------------------------------------------------------------
# slope intervals and periodization

@dataclass(frozen=True)
class SlopeInterval:
    """Closed slope interval [alpha - gamma, alpha + gamma]."""

    alpha: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("slope interval half-width must be positive")

    @property
    def lo(self) -> float:
        return self.alpha - self.gamma

    @property
    def hi(self) -> float:
        return self.alpha + self.gamma

    def contains(self, s: float) -> bool:
        return self.lo <= s <= self.hi

    def dilate(self, t: float = 3.0) -> "SlopeInterval":
        return SlopeInterval(self.alpha, t * self.gamma)

    def in_flat_band(self, s: float) -> bool:
        """Lemma-side predicate 3 gamma < |s - alpha| < pi/2 - 3 gamma, read mod pi/2."""
        d = math.fmod(s - self.alpha, HALF_PI)
        if d < 0:
            d += HALF_PI
        return 3 * self.gamma < d < HALF_PI - 3 * self.gamma

    def outside_triple(self, s: float) -> bool:
        """Theorem-side predicate s in [0, pi/2) minus 3S (plain real interval)."""
        return 0 <= s < HALF_PI and not (self.alpha - 3 * self.gamma <= s <= self.alpha + 3 * self.gamma)


@dataclass
class Periodized:
    """A periodized bump with its scale parameters (nu, nu')."""

    lattice: LatticeFunction
    eps: float
    delta: float
    slopes: SlopeInterval
    lam: float
    nu: float
    nu_prime: float
    cell_cfg: ThetaConfig
    radius: RadiusChoice
    nu_audit: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return self.cell_cfg.N

    def eps_cell(self, c) -> float:
        return self.lam * 2.0 ** -(abs(c[0]) + abs(c[1]))

    def params(self) -> dict:
        return {"eps": self.eps, "delta": self.delta, "alpha": self.slopes.alpha,
                "gamma": self.slopes.gamma, "lam": self.lam, "nu": self.nu,
                "nu_prime": self.nu_prime, "n_points": self.n_points,
                "n_overridden": self.cell_cfg.overridden}


def nu_prime_for(eps: float) -> float:
    return 10.0 / eps


def periodize(eps: float, delta: float, S: SlopeInterval, n_points: int | None = 64,
              window: int | None = None, audit_samples: int = 10_000, seed: int = 0,
              check_hypotheses: bool = True) -> Periodized:
    """Place the bump at scale eps_c = lam 2^-(|c1|+|c2|) at every lattice point.

    ``n_points`` overrides the per-cell point count N (the default 10 lam^-3 is
    astronomically large); pass None to request it literally.
    """
    if check_hypotheses:
        if not (0 < eps < 0.1 and 0 < delta < 0.1):
            raise ValueError(f"need 0 < eps, delta < 1/10, got eps={eps}, delta={delta}")
        if S.gamma > math.pi / 12 + 1e-15:
            raise ValueError("slope half-width must be <= pi/12")
    lam = min(eps / 100.0, delta)
    cfg = ThetaConfig(lam, S.gamma, n_points)
    phi0, radius = build_phi(cfg)
    base = phi0.rotate(S.alpha)
    lat = LatticeFunction(base, window=window,
                          params={"eps": eps, "delta": delta, "alpha": S.alpha, "gamma": S.gamma,
                                  "n_points": cfg.N, "seed": seed})
    rho = lat.base_radius
    nu = min(delta / 2, math.sqrt(eps / math.pi) / 4)
    rng = np.random.default_rng(seed)
    audit = {}
    for _ in range(200):
        inflated = rho + nu * math.sqrt(2)
        cert = math.pi * inflated**2
        if cert < eps:
            # rectangles with sides < nu that contain y and meet a bump keep y within
            # rho + nu sqrt(2) of that lattice point; count such samples as bad
            y = rng.random((audit_samples, 2)) - 0.5
            frac = float(np.mean(np.hypot(y[:, 0], y[:, 1]) < inflated))
            audit = {"certificate": cert, "sampled_bad_fraction": frac, "samples": audit_samples}
            if frac < eps:
                break
        nu /= 2
    else:
        raise AssertionError("nu selection did not converge")
    return Periodized(lat, eps, delta, S, lam, nu, nu_prime_for(eps), cfg, radius, audit)


# ---------------------------------------------------------------------------
# hyperbolic witness region

@dataclass(frozen=True)
class HyperbolicRegion:
    """{x : x1 x2 <= delta/4, delta <= x1, x2 <= 1/4}."""

    delta: float

    def __post_init__(self):
        if not 0 < self.delta < 0.1:
            raise ValueError("need 0 < delta < 1/10")
        assert math.hypot(0.25, 0.25) < 0.5  # rot_s A stays in B(1/2)

    @property
    def area(self) -> float:
        d = self.delta
        return d / 4 * math.log(1 / (4 * d)) - d * (0.25 - d)

    @property
    def lower_bound(self) -> float:
        return hyperbolic_lower_bound(self.delta)

    def contains(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        d = self.delta
        out = (x1 * x2 <= d / 4) & (x1 >= d) & (x2 >= d) & (x1 <= 0.25) & (x2 <= 0.25)
        return bool(out) if out.ndim == 0 else out

    def contains_rotated(self, x, s: float) -> np.ndarray | bool:
        """Membership in rot_s A."""
        x = np.asarray(x, dtype=float)
        c, sn = math.cos(s), math.sin(s)
        y = np.stack([c * x[..., 0] + sn * x[..., 1], -sn * x[..., 0] + c * x[..., 1]], -1)
        return self.contains(y)

    def sample_points(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Points of A, uniform in x1 on a log scale (covers the hyperbola's tails)."""
        d = self.delta
        x1 = np.exp(rng.uniform(math.log(d), math.log(0.25), n))
        top = np.minimum(d / (4 * x1), 0.25)
        x2 = d + rng.random(n) * (top - d)
        return np.stack([x1, x2], -1)


def hyperbolic_lower_bound(delta: float) -> float:
    return delta / 4 * math.log(1 / (12 * delta))


def hyperbolic_region(delta: float) -> tuple[HyperbolicRegion, float]:
    A = HyperbolicRegion(delta)
    return A, A.area


# ---------------------------------------------------------------------------
# splitting open slope sets

def _model_pieces(count: int) -> list[tuple[float, float]]:
    """Pieces of the model partition of (-1, 1), alternating right/left by depth."""
    out = []
    for k in range(count):
        out.append((1 - 0.9**k, 1 - 0.9 ** (k + 1)))
        out.append((0.9 ** (k + 1) - 1, 0.9**k - 1))
    return out


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    parent: tuple[float, float]

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def triple(self) -> tuple[float, float]:
        c, h = (self.lo + self.hi) / 2, self.length / 2
        return c - 3 * h, c + 3 * h

    def as_slope_interval(self) -> SlopeInterval:
        return SlopeInterval((self.lo + self.hi) / 2, self.length / 2)


def split_open_set(intervals, depth: int = 12, clip: bool = True) -> list[Piece]:
    """Split each open interval (a, b) by the affine image of the model partition
    [1 - 0.9^k, 1 - 0.9^(k+1)) and its mirror, truncated at ``depth`` pieces per side.

    Pieces are ordered by depth (interleaving intervals) and, when ``clip`` is
    set, intersected with [0, pi/2) and dropped if empty.
    """
    intervals = [(float(a), float(b)) for a, b in intervals]
    if not intervals:
        return []
    srt = sorted(intervals)
    for (a0, b0), (a1, b1) in zip(srt, srt[1:]):
        if a1 < b0:
            raise ValueError("intervals must be pairwise disjoint")
    model = _model_pieces(depth)
    per = []
    for a, b in intervals:
        if not a < b:
            raise ValueError(f"empty interval ({a}, {b})")
        c, h = (a + b) / 2, (b - a) / 2
        pieces = []
        for lo, hi in model:
            lo_, hi_ = c + h * lo, c + h * hi
            if lo_ > hi_:
                lo_, hi_ = hi_, lo_
            if hi_ - lo_ > math.pi / 12:
                raise ValueError("interval too long: piece exceeds pi/12")
            pieces.append(Piece(lo_, hi_, (a, b)))
        per.append(pieces)
    out = []
    for i in range(len(model)):
        for pieces in per:
            p = pieces[i]
            if clip:
                lo, hi = max(p.lo, 0.0), min(p.hi, HALF_PI)
                if lo >= hi:
                    continue
                p = Piece(lo, hi, p.parent)
            out.append(p)
    return out


def dilation_overlap(pieces: list[Piece], x: np.ndarray) -> np.ndarray:
    """Number of 3-dilated pieces containing each point of ``x``."""
    x = np.asarray(x, dtype=float)
    cnt = np.zeros(len(x), int)
    for p in pieces:
        lo, hi = p.triple()
        cnt += (x >= lo) & (x < hi)
    return cnt


# ---------------------------------------------------------------------------
# schedules

def block_product(lo: int, hi: int) -> float:
    """prod_{k=lo}^{hi} (1 - 1/(k ln k))."""
    return math.prod(1 - 1 / (k * math.log(k)) for k in range(lo, hi + 1))


def next_breakpoint(m: int, target: float, limit: int = 10**6) -> int:
    p = 1.0
    k = m
    while p >= target:
        k += 1
        if k > limit:
            raise ValueError("breakpoint search exceeded limit")
        p *= 1 - 1 / (k * math.log(k))
    return k


def coefficient(k: int) -> float:
    return 1.0 / (k * math.log(k) ** 1.5)


def next_dilation(n_prev: int, nu_prev: float, nu_prime: float, odd: bool = False) -> int:
    """Smallest integer n with n / n_prev > max(4/nu_prev, nu'/nu_prev) (odd if asked)."""
    bound = n_prev * max(4 / nu_prev, nu_prime / nu_prev)
    n = int(math.floor(bound)) + 1
    while not n / n_prev > max(4 / nu_prev, nu_prime / nu_prev) or (odd and n % 2 == 0):
        n += 1
    return n


FIRST_LEVEL = 3


@dataclass
class Level:
    k: int
    S: SlopeInterval
    eps: float
    delta: float
    nu: float
    nu_prime: float
    n: int
    mu: float
    coeff: float
    block: int
    phi: Periodized | None = None

    def to_json(self) -> dict:
        d = {key: getattr(self, key) for key in
             ("k", "eps", "delta", "nu", "nu_prime", "n", "mu", "coeff", "block")}
        d["S"] = {"alpha": self.S.alpha, "gamma": self.S.gamma}
        if self.phi is not None:
            d["n_points"] = self.phi.n_points
            d["lam"] = self.phi.lam
        return d


@dataclass
class Schedule:
    levels: list[Level]
    breakpoints: list[int]
    mode: str
    intervals: list[tuple[float, float]]
    block_target: float | None
    caps: dict

    def level(self, k: int) -> Level:
        for lv in self.levels:
            if lv.k == k:
                return lv
        raise KeyError(k)

    def band(self, k: int) -> tuple[float, float]:
        """[mu_k, mu_{k-1}] (mu before the first level is infinite)."""
        i = [lv.k for lv in self.levels].index(k)
        hi = math.inf if i == 0 else self.levels[i - 1].mu
        return self.levels[i].mu, hi

    def to_json(self) -> dict:
        return {"mode": self.mode, "intervals": [list(i) for i in self.intervals],
                "block_target": self.block_target, "caps": self.caps,
                "breakpoints": self.breakpoints, "levels": [lv.to_json() for lv in self.levels]}

    def table(self) -> str:
        head = f"{'k':>3} {'S':>21} {'eps':>9} {'delta':>9} {'nu':>10} {'nu_prime':>9} {'n':>12} {'mu':>10} {'coeff':>8}"
        rows = [head]
        for lv in self.levels:
            rows.append(f"{lv.k:>3} [{lv.S.lo:8.5f},{lv.S.hi:8.5f}] {lv.eps:9.4g} {lv.delta:9.4g} "
                        f"{lv.nu:10.4g} {lv.nu_prime:9.4g} {lv.n:>12d} {lv.mu:10.4g} {lv.coeff:8.5f}")
        rows.append(f"breakpoints m_t: {self.breakpoints}")
        return "\n".join(rows)

    def check(self) -> None:
        for prev, lv in zip(self.levels, self.levels[1:]):
            ratio = lv.n / prev.n
            if not ratio > max(4 / prev.nu, lv.nu_prime / prev.nu):
                raise AssertionError(f"dilation growth fails at k={lv.k}")
            if not prev.mu > lv.nu_prime / lv.n > lv.mu:
                raise AssertionError(f"scale bands not separated at k={lv.k}")
        mus = [lv.mu for lv in self.levels]
        if any(b >= a for a, b in zip(mus, mus[1:])):
            raise AssertionError("mu must strictly decrease")


def _faithful_estimate(k: int) -> dict:
    eps = 2.0**-k
    lam = min(eps / 100, 1 / (k * math.log(k) ** 2))
    n_req = default_n(lam)
    return {"level": k, "eps": eps, "lam": lam, "points_per_cell": n_req,
            "smallest_coordinate_log2": -(n_req + math.log2(1 / lam))}


def build_schedule(intervals, K: int, mode: str = "relaxed", block_target: float = 0.5,
                   eps_cap: float = 0.09, delta_cap: float = 0.09, n_points: int = 64,
                   window: int | None = None, depth: int = 12, seed: int = 0,
                   restrict: bool = True) -> Schedule:
    """Levels k = 3..K of the cascade.  ``intervals`` are open slope intervals
    (a finite truncation of the G_delta set); pieces l_t are reused cyclically.

    With ``restrict`` each level's periodization is cut to the cells c with
    c / n_k in Q_0, which is psi_k on Q_0 (dilations after the first are odd).
    """
    if K < FIRST_LEVEL:
        raise ValueError("K must be >= 3")
    if mode not in ("faithful", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    pieces = split_open_set(intervals, depth=depth)
    if not pieces:
        raise ValueError("no slope pieces inside [0, pi/2)")
    breakpoints = [0, FIRST_LEVEL - 1]
    t = 1
    while breakpoints[-1] < K:
        target = 2.0**-t if mode == "faithful" else block_target
        breakpoints.append(next_breakpoint(breakpoints[-1], target))
        t += 1
    levels: list[Level] = []
    for k in range(FIRST_LEVEL, K + 1):
        t = max(i for i in range(1, len(breakpoints)) if breakpoints[i] < k)
        S = pieces[(t - 1) % len(pieces)].as_slope_interval()
        eps = 2.0**-k
        delta = 1 / (k * math.log(k) ** 2)
        if mode == "faithful":
            if not (eps < 0.1 and delta < 0.1):
                raise ValueError(f"faithful level k={k}: eps={eps:.4g}, delta={delta:.4g} "
                                 f"violate the < 1/10 hypotheses; estimate {_faithful_estimate(k)}")
            est = _faithful_estimate(k)
            if est["points_per_cell"] > 1000:
                raise ValueError(f"faithful level k={k} needs {est['points_per_cell']} points per "
                                 f"cell (coordinates near 2^{est['smallest_coordinate_log2']:.0f}); "
                                 "beyond double precision")
            per = periodize(eps, delta, S, n_points=None, window=window, seed=seed + k)
        else:
            eps, delta = min(eps, eps_cap), min(delta, delta_cap)
            per = periodize(eps, delta, S, n_points=n_points, window=window, seed=seed + k)
        if not levels:
            n = 1
        else:
            n = next_dilation(levels[-1].n, levels[-1].nu, per.nu_prime, odd=True)
        if restrict:
            # psi_k lives on Q_0: keep the whole bumps at c / n in Q_0 (n odd)
            per.lattice.window = (n - 1) // 2
            per.lattice.restricted = True
        levels.append(Level(k, S, eps, delta, per.nu, per.nu_prime, n, per.nu / n,
                            coefficient(k), t, per))
    sched = Schedule(levels, breakpoints, mode, [tuple(i) for i in intervals],
                     None if mode == "faithful" else block_target,
                     {"eps_cap": eps_cap, "delta_cap": delta_cap, "n_points": n_points}
                     if mode == "relaxed" else {})
    sched.check()
    return sched


def assemble_f(sched: Schedule) -> SeriesFunction:
    terms = [(lv.coeff, lv.phi.lattice, lv.n) for lv in sched.levels]
    return SeriesFunction(terms, [lv.k for lv in sched.levels])


# ---------------------------------------------------------------------------
# disjoint-square assembly

class WRComposite:
    """``g(x) = sum_i 1_{Q_i}(x) f_i(x - m_i)`` with Q_i = m_i + [-1/2, 1/2)^2."""

    def __init__(self, funcs, squares):
        squares = [tuple(int(v) for v in m) for m in squares]
        if len(funcs) != len(squares):
            raise ValueError("one square per function")
        if len(set(squares)) != len(squares):
            raise ValueError("squares overlap")
        self.funcs = list(funcs)
        self.squares = squares

    def square_of(self, x) -> int | None:
        m = (math.floor(x[0] + 0.5), math.floor(x[1] + 0.5))
        try:
            return self.squares.index(m)
        except ValueError:
            return None

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        i = self.square_of(x)
        if i is None:
            return 0.0
        m = self.squares[i]
        return float(np.asarray(self.funcs[i].eval(x - np.array(m))))

    def square_rect(self, i: int) -> Rectangle:
        m = self.squares[i]
        return Rectangle((m[0] - 0.5, m[1] - 0.5), 1.0, 1.0, 0.0)

    def integral_rect(self, R: Rectangle):
        from .funcrep import Estimate
        out = Estimate(0.0)
        verts = R.vertices()
        for i, m in enumerate(self.squares):
            lo = np.array(m) - 0.5
            hi = np.array(m) + 0.5
            if np.all(verts >= lo) and np.all(verts <= hi):
                out = out + integral_rect(self.funcs[i], R.translate((-m[0], -m[1])))
            elif np.any(np.all((verts > lo) & (verts < hi), axis=1)) or _overlaps_box(R, lo, hi):
                raise NotImplementedError("rectangle straddles a square boundary")
        return out


def _overlaps_box(R: Rectangle, lo, hi) -> bool:
    v = R.vertices()
    if np.any(v.max(0) <= lo) or np.any(v.min(0) >= hi):
        return False
    box = Rectangle(tuple(lo), hi[0] - lo[0], hi[1] - lo[1], 0.0)
    corners = np.array([lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]])
    if np.any(rect_contains(R, corners)) or np.any(rect_contains(box, v)):
        return True
    # separating axis on R's axes
    c, s, u0, v0 = R.frame
    u = c * corners[:, 0] + s * corners[:, 1]
    w = -s * corners[:, 0] + c * corners[:, 1]
    return not (u.max() <= u0 or u.min() >= u0 + R.a or w.max() <= v0 or w.min() >= v0 + R.b)


def assemble_wr(funcs, squares) -> WRComposite:
    return WRComposite(funcs, squares)
