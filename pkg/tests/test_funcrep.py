import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsets.construct import SlopeInterval, ThetaConfig, build_phi, periodize, theta_points
from rsets.funcrep import (DiskSum, Estimate, LatticeFunction, SeriesFunction, ZeroFunction, dilate,
                           integral_rect, total_abs_integral)
from rsets.geometry import Rectangle


@pytest.fixture(scope="module")
def phi_default():
    return build_phi(ThetaConfig(0.5, math.pi / 24))


def test_eval_oracles():
    f = DiskSum([0.0], [0.0], [1.0], [2.0])
    assert f.eval((0, 0)) == 2
    assert f.eval((5, 0)) == 0


def test_phi_value_at_first_point():
    cfg = ThetaConfig(0.5, math.pi / 12)
    phi, rc = build_phi(cfg)
    _, pts = theta_points(cfg)
    assert np.allclose(pts[0], (0.25, 0.0669873), atol=1e-7)
    assert phi.eval(pts[0]) == pytest.approx(1 / (2 * math.pi * 81 * rc.r**2), rel=1e-12)
    assert phi.eval(pts[cfg.N]) == pytest.approx(-1 / (2 * math.pi * 81 * rc.r**2), rel=1e-12)


def test_integral_oracles(phi_default):
    f = DiskSum([0.0], [0.0], [1.0], [1 / math.pi])
    assert f.integral(Rectangle.from_center((0, 0), 4, 4)) == pytest.approx(1, abs=1e-14)
    phi, _ = phi_default
    assert phi.integral(Rectangle.from_center((0, 0), 4, 4)) == pytest.approx(0, abs=1e-12)
    assert phi.integral(Rectangle((0, 0), 1.0, 1.0)) >= 0.25 - 1e-12


def test_total_abs_integral_oracles(phi_default):
    assert total_abs_integral(phi_default[0]) == pytest.approx(1, abs=1e-12)
    assert total_abs_integral(DiskSum.empty()) == 0
    two = DiskSum([0.0, 3.0], [0.0, 0.0], [1.0, 1.0], [1 / math.pi, -1 / math.pi])
    assert total_abs_integral(two) == pytest.approx(2)


def test_dilate_oracles():
    f = DiskSum([0.0], [0.0], [1.0], [1.0])
    g = dilate(f, 2)
    assert g.r[0] == 0.5 and g.w[0] == 1.0
    assert g.total_integral() == pytest.approx(math.pi / 4)
    assert dilate(f, 1) is f
    with pytest.raises(ValueError):
        dilate(f, 0)


def test_dilate_change_of_variables(phi_default):
    phi, _ = phi_default
    base = LatticeFunction(phi, window=2)
    rng = np.random.default_rng(3)
    for n in (2, 3, 7):
        g = dilate(base, n)
        for _ in range(100):
            R = Rectangle(tuple(rng.uniform(-0.5, 0.5, 2)), *rng.uniform(0.01, 1, 2), rng.uniform(0, 1.5))
            lhs = integral_rect(g, R)
            rhs = integral_rect(base, R.scale(n)).scaled(1 / n**2)
            assert lhs.value == pytest.approx(rhs.value, abs=1e-10)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 2), st.floats(0.01, 2), st.floats(0, 3))
def test_diskdum_linearity_under_split(x0, y0, a, b, s):
    f = DiskSum([0.0, 0.5, -0.4], [0.0, 0.2, 0.7], [0.3, 0.1, 0.25], [1.0, -2.0, 0.5])
    R = Rectangle((x0, y0), a, b, s)
    R1, R2 = R.split(False)
    assert f.integral(R1) + f.integral(R2) == pytest.approx(f.integral(R), abs=1e-12)


def test_json_roundtrip(phi_default):
    phi, _ = phi_default
    back = DiskSum.from_json(phi.to_json())
    assert np.array_equal(back.cx, phi.cx) and np.array_equal(back.wr2, phi.wr2)


def test_lattice_cells_keep_mass():
    per = periodize(0.05, 0.01, SlopeInterval(math.pi / 48, math.pi / 48), n_points=16)
    lat = per.lattice
    for c in [(0, 0), (1, 1), (-3, 2)]:
        signed, absolute = lat.cell_masses(c)
        assert abs(signed) < 1e-12 and absolute == pytest.approx(1, abs=1e-12)
    # the whole cell (0, 0) integrates to zero
    assert lat.integral_rect(Rectangle.from_center((0, 0), 1, 1)).value == pytest.approx(0, abs=1e-12)
    # corner scale of cell (1, 1) is a quarter of the base
    assert lat.support_radius((1, 1)) == pytest.approx(lat.base_radius / 4)


def test_lattice_translation_covariance():
    per = periodize(0.05, 0.01, SlopeInterval(math.pi / 48, math.pi / 48), n_points=64)
    R0 = Rectangle((0.0, 0.0), 0.025, 0.1, 0.05)
    v0 = per.lattice.integral_rect(R0).value
    for c in [(3, -2), (1, 4), (-5, -5)]:
        v = per.lattice.integral_rect(R0.translate(c)).value
        assert v == pytest.approx(v0, abs=1e-12)


def test_restricted_lattice_absent_cells():
    phi, _ = build_phi(ThetaConfig(0.3, math.pi / 24, 12))
    lat = LatticeFunction(phi, window=0, restricted=True)
    assert lat.present((0, 0)) and not lat.present((1, 0))
    R = Rectangle((1.0, 0.0), 0.2, 0.2, 0.3)
    assert lat.integral_rect(R) == Estimate(0.0, 0.0)


def test_series_requires_increasing_dilations(phi_default):
    phi, _ = phi_default
    with pytest.raises(ValueError):
        SeriesFunction([(1.0, phi, 3), (1.0, phi, 3)])


def test_zero_function():
    z = ZeroFunction()
    assert z.integral_rect(Rectangle((0, 0), 1, 1)).value == 0
    assert z.eval((1.0, 2.0)) == 0
