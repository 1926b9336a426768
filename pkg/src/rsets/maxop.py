"""Directional maximal operators: exact averages, searched lower bounds, witness
rectangles and analytic upper-bound certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .construct import HyperbolicRegion, Periodized, Schedule, assemble_f, coefficient
from .funcrep import (Dilated, DiskSum, Estimate, LatticeFunction, SeriesFunction, ZeroFunction,
                      integral_rect)
from .geometry import Rectangle


@dataclass(frozen=True)
class ScaleBand:
    """Side-length band [lo, hi); ``closed`` makes it [lo, hi]."""

    lo: float = 0.0
    hi: float = math.inf
    closed: bool = False

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"empty scale band [{self.lo}, {self.hi})")

    def contains(self, a: float, b: float) -> bool:
        top = (lambda t: t <= self.hi) if self.closed else (lambda t: t < self.hi)
        return self.lo <= a and self.lo <= b and top(a) and top(b)

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": None if math.isinf(self.hi) else self.hi, "closed": self.closed}


@dataclass(frozen=True)
class SearchParams:
    """Grid search over rectangles containing a point.

    Side lengths run over a log grid with ``per_decade`` points, clipped to
    [side_min, side_max] when the band is unbounded; the point's relative
    position inside the rectangle runs over an ``offsets`` x ``offsets`` grid.
    The best ``keep`` candidates are refined ``rounds`` times.
    """

    per_decade: int = 24
    offsets: int = 8
    rounds: int = 3
    keep: int = 4
    side_min: float = 1e-4
    side_max: float = 4.0


def average(f, R: Rectangle) -> Estimate:
    """Signed average of ``f`` over ``R`` with an error radius."""
    return integral_rect(f, R).scaled(1.0 / R.area)


# ---------------------------------------------------------------------------
# local bump collections

@dataclass
class Bump:
    """A finite signed atom cluster with its enclosing disk and total mass."""

    atoms: DiskSum
    cx: float
    cy: float
    rho: float
    mass: float


@dataclass
class LocalPicture:
    bumps: list[Bump]
    truncated: bool = False


def _bump_of(ds: DiskSum) -> Bump:
    (cx, cy), rho = ds.enclosing
    return Bump(ds, cx, cy, rho, ds.total_integral())


def local_bumps(f, center, radius: float, max_cells: int = 200_000) -> LocalPicture:
    """Bumps of ``f`` that can meet the disk B(center, radius)."""
    center = np.asarray(center, dtype=float)
    if isinstance(f, ZeroFunction):
        return LocalPicture([])
    if isinstance(f, DiskSum):
        if len(f) == 0:
            return LocalPicture([])
        b = _bump_of(f)
        near = math.hypot(b.cx - center[0], b.cy - center[1]) < radius + b.rho
        return LocalPicture([b] if near else [])
    if isinstance(f, LatticeFunction):
        reach = radius + f.base_radius
        lo = np.floor(center - reach).astype(int)
        hi = np.ceil(center + reach).astype(int)
        if (hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) > max_cells:
            raise ValueError("search region covers too many lattice cells")
        out, trunc = [], False
        for c1 in range(lo[0], hi[0] + 1):
            for c2 in range(lo[1], hi[1] + 1):
                rho = f.support_radius((c1, c2))
                if math.hypot(c1 - center[0], c2 - center[1]) >= radius + rho or not f.present((c1, c2)):
                    continue
                if not f._materialized((c1, c2)):
                    trunc = True
                    continue
                ds = f.cell(c1, c2)
                out.append(Bump(ds, float(c1), float(c2), rho, ds.total_integral()))
        return LocalPicture(out, trunc)
    if isinstance(f, Dilated):
        n = f.n
        inner = local_bumps(f.f, center * n, radius * n, max_cells)
        t = 1.0 / n
        return LocalPicture([Bump(b.atoms.scale(t), b.cx * t, b.cy * t, b.rho * t, b.mass * t * t)
                             for b in inner.bumps], inner.truncated)
    if isinstance(f, SeriesFunction):
        out, trunc = [], False
        for i in range(len(f.terms)):
            coeff, g = f.term(i)
            pic = local_bumps(g, center, radius, max_cells)
            trunc |= pic.truncated
            for b in pic.bumps:
                a = b.atoms
                out.append(Bump(DiskSum(a.cx, a.cy, a.r, wr2=a.wr2 * coeff), b.cx, b.cy, b.rho,
                                b.mass * coeff))
        return LocalPicture(out, trunc)
    if hasattr(f, "squares") and hasattr(f, "funcs"):
        out, trunc = [], False
        for g, m in zip(f.funcs, f.squares):
            if max(abs(center[0] - m[0]), abs(center[1] - m[1])) > radius + 0.5:
                continue
            pic = local_bumps(g, center - np.array(m, float), radius, max_cells)
            trunc |= pic.truncated
            for b in pic.bumps:
                if max(abs(b.cx), abs(b.cy)) + b.rho > 0.5:
                    raise NotImplementedError("a bump straddles its square")
                out.append(Bump(b.atoms.translate(m), b.cx + m[0], b.cy + m[1], b.rho, b.mass))
        return LocalPicture(out, trunc)
    raise TypeError(f"no local picture for {type(f).__name__}")


def batch_averages(bumps: list[Bump], corners, a, b, angles) -> np.ndarray:
    """Signed averages over many rectangles; bumps strictly inside contribute their
    total mass and bumps strictly outside contribute nothing."""
    corners = np.asarray(corners, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    angles = np.broadcast_to(np.asarray(angles, dtype=float), a.shape)
    c, s = np.cos(angles), np.sin(angles)
    u0 = c * corners[:, 0] + s * corners[:, 1]
    v0 = -s * corners[:, 0] + c * corners[:, 1]
    total = np.zeros(len(a))
    for bp in bumps:
        cu = c * bp.cx + s * bp.cy
        cv = -s * bp.cx + c * bp.cy
        outside = (cu - bp.rho >= u0 + a) | (cu + bp.rho <= u0) | (cv - bp.rho >= v0 + b) | (cv + bp.rho <= v0)
        inside = (cu - bp.rho > u0) & (cu + bp.rho < u0 + a) & (cv - bp.rho > v0) & (cv + bp.rho < v0 + b)
        total[inside] += bp.mass
        cross = np.nonzero(~outside & ~inside)[0]
        if len(cross):
            total[cross] += bp.atoms.integrals(corners[cross], a[cross], b[cross], angles[cross])
    return total / (a * b)


# ---------------------------------------------------------------------------
# searched lower bounds

@dataclass
class SearchResult:
    value: float
    rect: Rectangle | None
    evaluated: int
    truncated: bool

    def to_json(self) -> dict:
        return {"value": self.value, "rect": None if self.rect is None else self.rect.to_dict(),
                "evaluated": self.evaluated, "truncated": self.truncated}


def _rects_through(x, s, la, lb, fu, fv):
    a, b = np.exp(la), np.exp(lb)
    c, sn = math.cos(s), math.sin(s)
    du, dv = fu * a, fv * b
    corners = np.stack([x[0] - c * du + sn * dv, x[1] - sn * du - c * dv], -1)
    return corners, a, b


def search_range(band: ScaleBand, p: SearchParams) -> tuple[float, float]:
    lo = max(band.lo, p.side_min)
    hi = min(band.hi, p.side_max)
    if not band.closed and hi == band.hi:
        hi = hi * (1 - 1e-12)
    if not lo <= hi:
        raise ValueError(f"search range empty: [{lo}, {hi}]")
    return lo, hi


def max_search(f, x, s: float, band: ScaleBand = ScaleBand(), p: SearchParams = SearchParams(),
               picture: LocalPicture | None = None) -> SearchResult:
    """Sound lower bound on M_s^band f(x): the best |average| found over rectangles
    of slope ``s`` containing ``x``."""
    x = np.asarray(x, dtype=float)
    lo, hi = search_range(band, p)
    if picture is None:
        picture = local_bumps(f, x, hi * math.sqrt(2))
    if not picture.bumps:
        return SearchResult(0.0, None, 0, picture.truncated)
    llo, lhi = math.log(lo), math.log(hi)
    n = max(2, int(math.ceil((lhi - llo) / math.log(10) * p.per_decade)) + 1)
    grid = np.linspace(llo, lhi, n) if lhi > llo else np.array([llo])
    offs = (np.arange(p.offsets) + 0.5) / p.offsets
    LA, LB, FU, FV = (g.ravel() for g in np.meshgrid(grid, grid, offs, offs, indexing="ij"))
    corners, a, b = _rects_through(x, s, LA, LB, FU, FV)
    ac, aa, ab = _anchored(picture, x, s, grid, offs, lo, hi)
    corners = np.concatenate([corners, ac])
    a, b = np.concatenate([a, aa]), np.concatenate([b, ab])
    vals = np.abs(batch_averages(picture.bumps, corners, a, b, s))
    evaluated = len(vals)
    top = int(np.argmax(vals))
    if top >= len(LA):
        # anchored winner: keep it as the incumbent, refine around grid candidates
        best_rect = Rectangle(tuple(corners[top]), float(a[top]), float(b[top]), s)
        anchored_val = float(vals[top])
    else:
        best_rect, anchored_val = None, -1.0
    vals = vals[: len(LA)]
    order = np.argsort(vals)[::-1][: p.keep]
    cands = np.stack([LA[order], LB[order], FU[order], FV[order]], -1)
    best_val = float(vals[order[0]])
    best = cands[0]
    step = np.array([grid[1] - grid[0] if len(grid) > 1 else 0.1] * 2 + [1.0 / p.offsets] * 2)
    for _ in range(p.rounds):
        step = step / 2
        d = np.linspace(-1, 1, 5)
        D = np.stack([g.ravel() for g in np.meshgrid(d, d, d, d, indexing="ij")], -1)
        pts = (cands[:, None, :] + D[None] * step).reshape(-1, 4)
        pts[:, 0:2] = np.clip(pts[:, 0:2], llo, lhi)
        pts[:, 2:4] = np.clip(pts[:, 2:4], 1e-9, 1 - 1e-9)
        corners, a, b = _rects_through(x, s, *pts.T)
        v = np.abs(batch_averages(picture.bumps, corners, a, b, s))
        evaluated += len(v)
        order = np.argsort(v)[::-1][: p.keep]
        cands = pts[order]
        if v[order[0]] > best_val:
            best_val = float(v[order[0]])
            best = pts[order[0]]
    if anchored_val > best_val:
        return SearchResult(anchored_val, best_rect, evaluated, picture.truncated)
    corners, a, b = _rects_through(x, s, *best[:, None])
    rect = Rectangle(tuple(corners[0]), float(a[0]), float(b[0]), s)
    return SearchResult(best_val, rect, evaluated, picture.truncated)


def _anchor_points(picture: LocalPicture, x, max_bumps: int, atom_bumps: int, atoms: int):
    """Bump centers, plus the outermost atoms of the nearest bumps (side lines
    through single atoms separate the two rays of a bump)."""
    bumps = sorted(picture.bumps, key=lambda bp: math.hypot(bp.cx - x[0], bp.cy - x[1]))[:max_bumps]
    pts = [(bp.cx, bp.cy, True) for bp in bumps]
    for bp in bumps[:atom_bumps]:
        d = np.hypot(bp.atoms.cx - bp.cx, bp.atoms.cy - bp.cy)
        for i in np.argsort(d)[::-1][:atoms]:
            pts.append((float(bp.atoms.cx[i]), float(bp.atoms.cy[i]), False))
    return pts


def _anchored(picture: LocalPicture, x, s: float, grid, offs, lo: float, hi: float,
              max_bumps: int = 64, atom_bumps: int = 2, atoms: int = 24):
    """Rectangles containing x with a side line (and optionally a corner) through
    an anchor point: the configurations where a single bump is split unevenly.
    Atom anchors use every third grid side and centered offsets only."""
    c, sn = math.cos(s), math.sin(s)
    xu, xv = c * x[0] + sn * x[1], -sn * x[0] + c * x[1]
    U0, V0, A, B = [], [], [], []
    sides_all = np.exp(grid)
    for px, py, full in _anchor_points(picture, x, max_bumps, atom_bumps, atoms):
        sides = sides_all if full else sides_all[::3]
        fos = offs if full else offs[len(offs) // 2: len(offs) // 2 + 1]
        bu, bv = c * px + sn * py, -sn * px + c * py
        du, dv = xu - bu, xv - bv
        for along_u in (True, False):
            d_edge = du if along_u else dv
            if d_edge == 0:
                continue
            need = abs(d_edge) * (1 + 1e-9)
            first = sides[sides > need]
            first = first[first <= hi]
            if lo <= need <= hi:
                first = np.concatenate([[need], first])
            # the other direction: corner at the anchor or a grid offset
            d_other = dv if along_u else du
            other_lo = []
            for L in sides:
                for fo in fos:
                    other_lo.append((L, -fo * L))
                if d_other != 0 and abs(d_other) * (1 + 1e-9) <= L:
                    other_lo.append((L, -d_other if d_other > 0 else -L - d_other))
            for L1 in first:
                lo1 = -d_edge if d_edge > 0 else -L1 - d_edge
                for L2, lo2 in other_lo:
                    if along_u:
                        U0.append(xu + lo1); V0.append(xv + lo2); A.append(L1); B.append(L2)
                    else:
                        U0.append(xu + lo2); V0.append(xv + lo1); A.append(L2); B.append(L1)
    if not U0:
        return np.empty((0, 2)), np.empty(0), np.empty(0)
    U0, V0 = np.array(U0), np.array(V0)
    corners = np.stack([c * U0 - sn * V0, sn * U0 + c * V0], -1)
    return corners, np.array(A), np.array(B)


# ---------------------------------------------------------------------------
# witnesses

WITNESS_INFLATE = 1 + 1e-9


def witness_rectangle(x, s: float, cell=(0, 0)) -> tuple[Rectangle, np.ndarray]:
    """The rectangle ``c + rot_s([0, x1] x [0, x2])`` (slightly enlarged so that its
    far corner ``c + rot_s x`` lies in the open rectangle) and that corner."""
    x1, x2 = float(x[0]), float(x[1])
    R = Rectangle((float(cell[0]), float(cell[1])), x1 * WITNESS_INFLATE, x2 * WITNESS_INFLATE, s)
    c, sn = math.cos(s), math.sin(s)
    p = np.array([cell[0] + c * x1 - sn * x2, cell[1] + sn * x1 + c * x2])
    return R, p


@dataclass
class Witness:
    point: np.ndarray
    rect: Rectangle
    observed: Estimate
    claimed: float

    @property
    def margin(self) -> float:
        return self.observed.lo - self.claimed

    def to_json(self) -> dict:
        return {"point": [float(v) for v in self.point], "rect": self.rect.to_dict(),
                "observed": self.observed.value, "observed_err": self.observed.err,
                "claimed": self.claimed, "margin": self.margin}


def lemma_witness(per: Periodized, x, s: float, cell=(0, 0)) -> Witness:
    """Average of the periodized bump over the witness rectangle for a point of
    ``cell + rot_s A``; the claimed lower bound is 1/delta."""
    A = HyperbolicRegion(per.delta)
    if not A.contains(np.asarray(x, dtype=float)):
        raise ValueError("witness offset must lie in the hyperbolic region")
    if not per.slopes.contains(s):
        raise ValueError("witness slope must lie in S")
    R, p = witness_rectangle(x, s, cell)
    return Witness(p, R, average(per.lattice, R), 1.0 / per.delta)


def divergence_tail(k: int, first: int = 3, tol: float = 1e-16) -> float:
    """sum over j >= first, j != k of coeff_j 2^-j."""
    total, j = 0.0, first
    while True:
        term = coefficient(j) * 2.0**-j
        if j != k:
            total += term
        if term < tol and j > k:
            return total
        j += 1


def witness_divergence(sched: Schedule, k: int, s: float, cell=(0, 0), x=None,
                       f: SeriesFunction | None = None) -> Witness:
    """Exact average of the assembled series over the level-k witness rectangle
    ``(c + rot_s R_x) / n_k``; claimed bound sqrt(ln k) - tail."""
    lv = sched.level(k)
    if not lv.S.contains(s):
        raise ValueError(f"slope {s} is not in S_{k}")
    if x is None:
        x = (math.sqrt(lv.delta / 4), math.sqrt(lv.delta / 4))
    if not HyperbolicRegion(lv.delta).contains(np.asarray(x, dtype=float)):
        raise ValueError("witness offset must lie in the hyperbolic region")
    R, p = witness_rectangle(x, s, cell)
    R = R.scale(1.0 / lv.n)
    lo, hi = sched.band(k)
    if not (R.a >= lo and R.b >= lo and R.a <= hi and R.b <= hi):
        raise AssertionError("witness rectangle leaves the level's scale band")
    f = f or assemble_f(sched)
    claimed = math.sqrt(math.log(k)) - divergence_tail(k)
    return Witness(p / lv.n, R, average(f, R), claimed)


# ---------------------------------------------------------------------------
# certificates

@dataclass
class TailCertificate:
    constant: float
    rigorous: float
    nu_prime: float
    eps: float

    @property
    def passed(self) -> bool:
        return self.constant <= self.eps * (1 + 1e-12)

    def to_json(self) -> dict:
        return {"constant": self.constant, "rigorous": self.rigorous, "nu_prime": self.nu_prime,
                "eps": self.eps, "pass": self.passed}


def certify_tail_flat(f, nu_prime: float, eps: float) -> TailCertificate:
    """Upper bound for M^{[nu', inf)} of a periodized bump.

    A rectangle with sides L1, L2 >= nu' meets at most 2(L1+L2)/sqrt(1-4 rho^2) + 4
    supports along its boundary; each contributes at most half the absolute mass.
    The bound is decreasing in L1, L2, so its maximum is at L1 = L2 = nu'.
    The reported constant is 10/nu', or the rigorous bound when that is larger
    (small nu', where the corner term dominates).
    """
    if isinstance(f, Periodized):
        f = f.lattice
    if isinstance(f, ZeroFunction):
        return TailCertificate(0.0, 0.0, nu_prime, eps)
    if not isinstance(f, LatticeFunction):
        raise TypeError("certify_tail_flat needs a periodized bump")
    rho = f.base_radius
    if not rho < 0.5:
        raise ValueError("supports must be smaller than half a cell")
    pos, neg = float(np.sum(np.clip(f.base.masses, 0, None))), float(-np.sum(np.clip(f.base.masses, None, 0)))
    m_max = max(pos, neg)
    L = nu_prime
    rigorous = (4 * L / math.sqrt(1 - 4 * rho * rho) + 4) * m_max / (L * L)
    constant = max(10.0 / nu_prime, rigorous)
    return TailCertificate(constant, rigorous, nu_prime, eps)


def upper_bound_certificate(picture: LocalPicture, x, s: float, per_bump: np.ndarray | float,
                            lo: float = 0.0) -> float:
    """Rigorous upper bound on M_s^{[lo, inf)} of a finite bump collection at ``x``.

    A rectangle of slope s containing x whose boundary meets a set C of bumps has
    sides at least max_C(|du| - rho) and max_C(|dv| - rho) (and at least ``lo``);
    bumps strictly inside contribute their total mass, zero here.  The bound
    maximizes |C| J / (U V) over all threshold pairs (U, V).  Returns inf when x
    lies inside a bump's support strip.
    """
    if picture.truncated:
        return math.inf
    bumps = picture.bumps
    if not bumps:
        return 0.0
    if any(abs(b.mass) > 1e-12 for b in bumps):
        raise ValueError("certificate assumes mean-zero bumps")
    c, sn = math.cos(s), math.sin(s)
    cx = np.array([b.cx for b in bumps]) - x[0]
    cy = np.array([b.cy for b in bumps]) - x[1]
    rho = np.array([b.rho for b in bumps])
    J = np.broadcast_to(np.asarray(per_bump, dtype=float), rho.shape)
    du = np.abs(c * cx + sn * cy) - rho
    dv = np.abs(-sn * cx + c * cy) - rho
    du = np.maximum(du, lo)
    dv = np.maximum(dv, lo)
    if np.any(du <= 0) or np.any(dv <= 0):
        return math.inf
    best = 0.0
    for U in np.unique(du):
        sel = du <= U
        for V in np.unique(dv[sel]):
            m = sel & (dv <= V)
            best = max(best, float(J[m].sum()) / (U * V))
    return best


# ---------------------------------------------------------------------------
# flatness audit of the bump

def _dist_to_rects(corners, a, b, angles, p=(0.0, 0.0)):
    c, s = np.cos(angles), np.sin(angles)
    pu = c * p[0] + s * p[1] - (c * corners[:, 0] + s * corners[:, 1])
    pv = -s * p[0] + c * p[1] - (-s * corners[:, 0] + c * corners[:, 1])
    du = np.maximum(np.maximum(-pu, pu - a), 0)
    dv = np.maximum(np.maximum(-pv, pv - b), 0)
    return np.hypot(du, dv)


def flatness_audit(phi: DiskSum, eps: float, gamma: float, N: int, trials: int, seed: int = 0,
                   slope: float | None = None) -> dict:
    """Random rectangles in the flat slope band (or at a fixed ``slope``) probing the bump.

    Checks, per rectangle: (a) |int_R phi| <= 10/N; (b) if R contains a point
    outside both strips of half-width 2 eps around the axes of R's frame and
    meets B(eps), both sides exceed eps; (c) then the average is <= eps
    (asserted only when 10/N <= eps^3).
    """
    from .sampling import chunk_rng, chunks, cluster_rects
    from .construct import ThetaConfig, theta_points

    lo, hi = 3 * gamma, math.pi / 2 - 3 * gamma
    if slope is not None and not lo < abs(slope) < hi:
        raise ValueError("slope outside the flat band")
    bound = 10.0 / N
    vacuous = not bound <= eps**3
    _, pts = theta_points(ThetaConfig(eps, gamma, min(N, 60)))
    worst, worst_rect, viol_b, viol_c, n_b = 0.0, None, 0, 0, 0
    for ci, size in chunks(trials):
        rng = chunk_rng(seed, 3, ci)
        corners, a, b, ang = cluster_rects(rng, size, pts, eps, lo, hi)
        # also rectangles at the scale of eps itself
        k = size // 4
        big = np.exp(rng.uniform(math.log(eps / 4), math.log(8 * eps), (2, k)))
        a[:k], b[:k] = big[0], big[1]
        corners[:k] = rng.uniform(-2 * eps, eps, (k, 2))
        if slope is not None:
            ang = np.full(size, slope)
        vals = np.abs(phi.integrals(corners, a, b, ang))
        i = int(np.argmax(vals))
        if vals[i] > worst:
            worst = float(vals[i])
            worst_rect = Rectangle(tuple(corners[i]), float(a[i]), float(b[i]), float(ang[i]))
        # (b): probe R's center and four inset points for a point off both strips
        meets = _dist_to_rects(corners, a, b, ang) < eps
        c, s = np.cos(ang), np.sin(ang)
        off = np.zeros(size, bool)
        for fu, fv in ((0.5, 0.5), (0.01, 0.01), (0.99, 0.01), (0.01, 0.99), (0.99, 0.99)):
            u = c * corners[:, 0] + s * corners[:, 1] + fu * a
            v = -s * corners[:, 0] + c * corners[:, 1] + fv * b
            off |= (np.abs(u) >= 2 * eps) & (np.abs(v) >= 2 * eps)
        sel = meets & off
        n_b += int(sel.sum())
        viol_b += int(np.sum(sel & ~((a > eps) & (b > eps))))
        if not vacuous:
            viol_c += int(np.sum(sel & (vals / (a * b) > eps)))
    return {"check": "flatness", "claimed_bound": bound, "observed": worst, "margin": bound - worst,
            "trials": trials, "seed": seed, "bound_vacuous": vacuous, "side_checks": n_b,
            "side_violations": viol_b, "average_violations": viol_c,
            "witness": None if worst_rect is None else worst_rect.to_dict()}
