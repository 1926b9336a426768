import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsets.construct import (HyperbolicRegion, SlopeInterval, ThetaConfig, assemble_f, assemble_wr,
                             block_product, build_phi, build_schedule, check_ball_conditions,
                             coefficient, default_n, dilation_overlap, hyperbolic_lower_bound,
                             next_breakpoint, next_dilation, periodize, select_radius, sign_sum,
                             sign_sums_batch, split_open_set, theta_points)
from rsets.funcrep import total_abs_integral
from rsets.geometry import HALF_PI, Rectangle
from rsets.sampling import chunk_rng, cluster_rects


# --- two-ray configuration --------------------------------------------------

def test_theta_points_oracles():
    cfg = ThetaConfig(0.5, math.pi / 12)
    assert cfg.N == 81 == default_n(0.5)
    idx, pts = theta_points(cfg)
    assert np.allclose(pts[idx == 1][0], (0.25, 0.0669873), atol=1e-7)
    assert np.allclose(pts[idx == -2][0], (0.125, -0.0334936), atol=1e-7)


def test_sign_sum_oracles():
    cfg = ThetaConfig(0.5, math.pi / 12)
    idx, pts = theta_points(cfg)
    # a thin vertical box around x = 0.25 holds exactly theta_1 and theta_-1
    R = Rectangle((0.24, -0.1), 0.02, 0.2)
    assert sign_sum(R, idx, pts) == 0
    assert sign_sum(Rectangle((5, 5), 1, 1), idx, pts) == 0
    # an upper-ray box holds only positive indices
    assert sign_sum(Rectangle((0.1, 0.02), 0.2, 0.06), idx, pts) == 2


def test_sign_sums_batch_matches_scalar():
    cfg = ThetaConfig(0.5, math.pi / 24)
    idx, pts = theta_points(cfg)
    rng = chunk_rng(1, 0)
    corners, a, b, ang = cluster_rects(rng, 300, pts, 0.5, 3 * cfg.gamma, HALF_PI - 3 * cfg.gamma)
    _, sums = sign_sums_batch(corners, a, b, ang, idx, pts)
    for i in range(0, 300, 37):
        assert sums[i] == sign_sum(Rectangle(tuple(corners[i]), a[i], b[i], ang[i]), idx, pts)


def test_radius_conditions():
    cfg = ThetaConfig(0.5, math.pi / 12)
    rc = select_radius(cfg)
    assert rc.r < math.tan(math.pi / 12) * 0.5 / 2**81
    _, pts = theta_points(cfg)
    d = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    assert d[~np.eye(len(pts), dtype=bool)].min() > 2 * rc.r
    check_ball_conditions(cfg, rc.r)


# --- the bump ---------------------------------------------------------------

@pytest.mark.parametrize("eps,gamma", [(0.5, math.pi / 24), (0.3, math.pi / 12), (0.8, 0.05)])
def test_phi_masses(eps, gamma):
    phi, _ = build_phi(ThetaConfig(eps, gamma))
    assert abs(phi.total_integral()) < 1e-12
    assert total_abs_integral(phi) == pytest.approx(1, abs=1e-12)
    assert phi.integral(Rectangle((0, 0), 2 * eps, 2 * eps)) >= 0.25 - 1e-12


@given(st.floats(1.0, 3.0), st.floats(1.0, 3.0), st.floats(-1, 1))
def test_phi_quadrant_property(t1, t2, u):
    eps, gamma = 0.5, math.pi / 24
    phi, _ = build_phi(ThetaConfig(eps, gamma, 40))
    v = phi.integral(Rectangle((0, 0), t1 * eps, t2 * eps, u * gamma))
    assert v >= 0.25 - 1e-12


def test_gamma_range_rejected():
    with pytest.raises(ValueError):
        ThetaConfig(0.5, 0.3)
    with pytest.raises(ValueError):
        ThetaConfig(1.5, 0.1)


# --- slope intervals and periodization -------------------------------------

def test_slope_predicates():
    S = SlopeInterval(0.2, 0.05)
    assert S.contains(0.2) and S.contains(0.16) and not S.contains(0.26)
    assert S.in_flat_band(0.8) and not S.in_flat_band(0.3)
    assert S.outside_triple(0.8) and not S.outside_triple(0.3)
    # near the wrap-around the plain interval test is weaker than the mod pi/2 one
    W = SlopeInterval(0.05, 0.05)
    s = HALF_PI - 0.05
    assert W.outside_triple(s) and not W.in_flat_band(s)


def test_periodize_parameters():
    S = SlopeInterval(math.pi / 48, math.pi / 48)
    per = periodize(0.5, 0.01, S, n_points=16, check_hypotheses=False)
    assert per.lam == pytest.approx(0.005)
    assert per.lam * per.lattice.cell_scale((1, 1)) == pytest.approx(0.00125)
    assert per.nu < per.delta
    assert per.lattice.integral_rect(Rectangle.from_center((0, 0), 1, 1)).value == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        periodize(0.5, 0.01, S)


def test_hyperbolic_region_oracles():
    A = HyperbolicRegion(0.01)
    assert A.area == pytest.approx(0.0056472, abs=1e-7)
    assert hyperbolic_lower_bound(0.01) == pytest.approx(0.0053007, abs=1e-7)
    assert A.area > A.lower_bound
    assert hyperbolic_lower_bound(1 / 12) == pytest.approx(0, abs=1e-15)


def test_hyperbolic_samples_inside():
    A = HyperbolicRegion(0.02)
    pts = A.sample_points(np.random.default_rng(0), 500)
    assert A.contains(pts).all()


# --- splitting --------------------------------------------------------------

def test_split_open_set_oracles():
    pieces = split_open_set([(-1, 1)])
    got = [(p.lo, p.hi) for p in pieces[:3]]
    assert np.allclose(got, [(0, 0.1), (0.1, 0.19), (0.19, 0.271)])
    assert np.allclose(pieces[0].triple(), (-0.1, 0.2))
    raw = split_open_set([(-1, 1)], clip=False)
    assert dilation_overlap(raw, np.linspace(-0.999, 0.999, 4001)).max() <= 8


@given(st.lists(st.tuples(st.floats(0, 1.4), st.floats(0.02, 0.2)), min_size=1, max_size=3))
def test_split_pieces_inside_parents(ivs):
    ivs = sorted((a, a + w) for a, w in ivs)
    merged = [ivs[0]]
    for a, b in ivs[1:]:
        if a < merged[-1][1] + 1e-9:
            continue
        merged.append((a, b))
    for p in split_open_set(merged, depth=6):
        assert p.parent[0] <= p.lo < p.hi <= p.parent[1] + 1e-12
        assert 0 <= p.lo and p.hi <= HALF_PI
        assert p.length <= math.pi / 12 + 1e-12


# --- schedules --------------------------------------------------------------

def test_schedule_arithmetic_oracles():
    assert next_breakpoint(2, 0.5) == 6
    assert block_product(3, 6) == pytest.approx(0.4535, abs=1e-4)
    assert next_dilation(1, 0.01, 3) == 401
    assert coefficient(4) == pytest.approx(0.153164, abs=1e-6)
    assert 1 / (3 * math.log(3) ** 2) == pytest.approx(0.276178, abs=1e-6)


def test_schedule_k3():
    sched = build_schedule([(0.1, 0.2)], 3)
    assert sched.breakpoints == [0, 2, 6]
    lv = sched.level(3)
    assert lv.n == 1 and lv.eps == 0.09 and lv.delta == 0.09
    assert lv.S.lo == pytest.approx(0.15) and lv.S.hi == pytest.approx(0.155)
    f = assemble_f(sched)
    assert len(f.terms) == 1


def test_schedule_bands_disjoint():
    sched = build_schedule([(0.1, 0.2)], 5, n_points=16)
    sched.check()
    ns = [lv.n for lv in sched.levels]
    assert ns[0] == 1 and all(n % 2 == 1 for n in ns)
    bands = [sched.band(lv.k) for lv in sched.levels]
    for (lo1, _), (lo2, hi2) in zip(bands, bands[1:]):
        assert lo2 < hi2 <= lo1


def test_faithful_mode_rejected():
    with pytest.raises(ValueError, match="points per cell|hypotheses"):
        build_schedule([(0.1, 0.2)], 5, mode="faithful")


# --- disjoint-square assembly ----------------------------------------------

def test_assemble_wr_delegation():
    phi, _ = build_phi(ThetaConfig(0.3, math.pi / 24, 20))
    g = assemble_wr([phi, phi.rotate(0.2)], [(0, 0), (2, 1)])
    assert g.eval((1.0, 0.0)) == 0
    R = Rectangle((0.0, 0.0), 0.3, 0.2, 0.1)
    assert g.integral_rect(R).value == phi.integral(R)
    assert g.integral_rect(R.translate((2, 1))).value == pytest.approx(phi.rotate(0.2).integral(R), abs=1e-15)
    with pytest.raises(ValueError):
        assemble_wr([phi, phi], [(0, 0), (0, 0)])
