import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsets.geometry import (HALF_PI, Disk, Rectangle, Slope, arg_line, canonical_slope, disk_rect_area,
                            line_stab_count, quadrant_area_unit, rect_contains, rot_point)

finite = st.floats(-5, 5, allow_nan=False)
angle = st.floats(-7, 7, allow_nan=False)
side = st.floats(0.05, 4)


def test_rot_point_oracles():
    assert np.allclose(rot_point((1, 0), HALF_PI), (0, 1), atol=1e-15)
    assert np.allclose(rot_point((0.3, -2.0), 0.0), (0.3, -2.0))
    assert np.allclose(rot_point((1, 1), math.pi / 4), (0, math.sqrt(2)), atol=1e-15)


def test_arg_line_oracles():
    assert arg_line((0, 0), (1, 0)) == 0
    assert arg_line((0, 0), (1, 1)) == pytest.approx(math.pi / 4)
    assert arg_line((0, 0), (-1, 2)) == pytest.approx(math.atan(2))
    with pytest.raises(ValueError):
        arg_line((1, 1), (1, 1))


@given(angle)
def test_canonical_slope_range(a):
    s = canonical_slope(a)
    assert 0 <= s < HALF_PI
    assert Slope(a).value == s


def test_disk_rect_area_oracles():
    R = Rectangle.from_center((0, 0), 4, 4)
    assert disk_rect_area(Disk((0, 0), 1), R) == pytest.approx(math.pi, abs=1e-14)
    edge = Rectangle((-5, 0), 10, 10)
    assert disk_rect_area(Disk((0, 0), 1), edge) == pytest.approx(math.pi / 2, abs=1e-14)
    assert disk_rect_area(Disk((0, 5), 1), Rectangle((0, 0), 2, 2)) == 0


def test_rect_contains_oracles():
    sq = Rectangle.from_center((0, 0), 1, 1)
    assert rect_contains(sq, (0, 0))
    assert not rect_contains(sq, (0.5, 0))
    diamond = Rectangle.from_center((0, 0), math.sqrt(2), math.sqrt(2), math.pi / 4)
    assert rect_contains(diamond, (0.9, 0))


def test_line_stab_count_oracles():
    row = [Disk((float(i), 0.0), 0.1) for i in range(3)]
    assert line_stab_count(0.0, row) == 3
    col = [Disk((0.0, 0.0), 0.1), Disk((0.0, 5.0), 0.1)]
    assert line_stab_count(0.0, col) == 1
    diag = [Disk((0, 0), 0.1), Disk((1, 0.5), 0.1), Disk((2, 1.0), 0.1)]
    assert line_stab_count(math.atan2(0.5, 1), diag) == 3


@given(finite, finite, st.floats(0.01, 3), finite, finite, side, side, angle)
def test_disk_area_bounded_and_additive(cx, cy, r, x0, y0, a, b, s):
    R = Rectangle((x0, y0), a, b, s)
    d = Disk((cx, cy), r)
    full = disk_rect_area(d, R)
    assert -1e-12 <= full <= min(math.pi * r * r, a * b) + 1e-9
    R1, R2 = R.split(True)
    assert disk_rect_area(d, R1) + disk_rect_area(d, R2) == pytest.approx(full, abs=1e-9 * max(1, r * r))


@given(finite, finite, st.floats(0.01, 3), finite, finite, side, side, angle, angle, finite, finite)
def test_disk_area_rigid_invariance(cx, cy, r, x0, y0, a, b, s, t, dx, dy):
    R = Rectangle((x0, y0), a, b, s)
    d = Disk((cx, cy), r)
    base = disk_rect_area(d, R)
    c = rot_point((cx, cy), t)
    moved = disk_rect_area(Disk((c[0] + dx, c[1] + dy), r), R.rotate(t).translate((dx, dy)))
    assert moved == pytest.approx(base, abs=1e-9 * max(1, r * r))


def test_quadrant_area_against_monte_carlo():
    rng = np.random.default_rng(0)
    P = rng.uniform(-1, 1, (400_000, 2))
    P = P[np.hypot(P[:, 0], P[:, 1]) < 1]
    for X, Y in [(0.3, -0.2), (-0.7, 0.9), (0.0, 0.0), (1.0, 1.0)]:
        mc = np.mean((P[:, 0] < X) & (P[:, 1] < Y)) * math.pi
        assert quadrant_area_unit(X, Y) == pytest.approx(mc, abs=0.01)


@given(finite, finite, side, side, angle)
def test_rectangle_roundtrip_and_vertices(x0, y0, a, b, s):
    R = Rectangle((x0, y0), a, b, s)
    assert Rectangle.from_dict(R.to_dict()) == R
    v = R.vertices()
    assert np.allclose(v.mean(axis=0), R.center)
    assert rect_contains(R, R.center)
    assert not rect_contains(R, v[0])


def test_rectangle_rejects_degenerate():
    with pytest.raises(ValueError):
        Rectangle((0, 0), 0.0, 1.0)
