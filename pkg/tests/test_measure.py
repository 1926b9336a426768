import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsets.construct import HyperbolicRegion
from rsets.geometry import Rectangle
from rsets.measure import (DeltaSet, _frame_boxes, _overlap_open, PixelSet, cover_by_squares, dilation_union, greedy_disjoint,
                           level_set, mes_bounds, polygon_area, rect_box_area, refine_delta_set,
                           synthetic_delta_set, union_area_boxes)
from rsets.sampling import chunk_rng


def test_mes_bounds_full():
    assert mes_bounds(PixelSet.full(64))[:2] == (1.0, 1.0)
    assert mes_bounds(0.3)[:2] == (0.3, 0.3)


def test_witness_set_cells_equal_area():
    A = HyperbolicRegion(0.01)
    s = 0.3
    c, sn = math.cos(s), math.sin(s)

    def pred(P):
        q = P - np.rint(P)
        return A.contains(np.stack([c * q[:, 0] + sn * q[:, 1], -sn * q[:, 0] + c * q[:, 1]], -1))

    ps = PixelSet.from_predicate(pred, 1024, cells=3, origin=(-1, -1))
    areas = ps.cell_areas()
    assert np.ptp(areas) == 0
    assert areas[0, 0] == pytest.approx(A.area, abs=2e-3)


def test_hyperbolic_pixel_count_2048():
    A = HyperbolicRegion(0.01)
    ps = PixelSet.from_predicate(lambda P: A.contains(P), 2048)
    assert abs(ps.density - A.area) <= 2e-3


def test_pbm_roundtrip():
    rng = np.random.default_rng(0)
    ps = PixelSet(rng.random((64, 64)) < 0.3, 32, (-1, 2))
    back = PixelSet.from_pbm(ps.to_pbm(), 32, (-1, 2))
    assert np.array_equal(back.mask, ps.mask)
    assert back.to_pbm() == ps.to_pbm()


def test_csv_header_and_rows():
    ps = PixelSet.full(8, cells=2)
    lines = ps.to_csv().splitlines()
    assert lines[0] == "cell_k1,cell_k2,area" and len(lines) == 5
    assert lines[1] == "0,0,1.0"


@pytest.mark.parametrize("n", [2, 3, 4, 8])
def test_pullback_block_constant_density(n):
    G = 96 if n == 3 else 64
    rng = np.random.default_rng(n)
    coarse = rng.random((G // n, G // n)) < 0.4
    ps = PixelSet(np.kron(coarse, np.ones((n, n), bool)), G)
    assert ps.pullback(n).density == ps.density


def test_pullback_rejects_bad_grid():
    with pytest.raises(ValueError):
        PixelSet.full(10).pullback(3)


def test_set_algebra():
    a = PixelSet(np.eye(4, dtype=bool), 4)
    b = ~a
    assert (a | b).density == 1 and (a & b).density == 0


def test_polygon_and_box_area():
    assert polygon_area(np.array([[0, 0], [2, 0], [2, 1], [0, 1]], float)) == 2
    R = Rectangle.from_center((0, 0), 1, 1, math.pi / 4)
    assert rect_box_area(R, (-5, -5), (5, 5)) == pytest.approx(1)
    assert rect_box_area(R, (0, -5), (5, 5)) == pytest.approx(0.5)


def test_union_area_boxes():
    boxes = np.array([[0, 2, 0, 1], [1, 3, 0, 1], [10, 11, 10, 11]], float)
    assert union_area_boxes(boxes) == pytest.approx(4)


def test_greedy_oracles():
    disjoint = [Rectangle((i * 2.0, 0.0), 1, 1) for i in range(5)]
    sel = greedy_disjoint(disjoint)
    assert sel.picked == list(range(5)) and sel.ratio == 1
    same = [Rectangle((0.0, 0.0), 1, 1)] * 7
    sel = greedy_disjoint(same)
    assert len(sel.picked) == 1 and sel.ratio == 1
    rng = np.random.default_rng(11)
    rects = [Rectangle.from_center(tuple(rng.uniform(-0.5, 0.5, 2)), 0.1, 0.07, 0.4) for _ in range(200)]
    assert greedy_disjoint(rects).ratio >= 0.25


@given(st.integers(0, 10_000), st.floats(0.03, 0.3), st.floats(0, 1.5))
def test_greedy_picks_are_disjoint(seed, side, ang):
    rng = np.random.default_rng(seed)
    rects = [Rectangle.from_center(tuple(rng.uniform(-0.5, 0.5, 2)), side, side * 0.7, ang) for _ in range(40)]
    sel = greedy_disjoint(rects)
    assert sel.ratio >= 0.25
    boxes = _frame_boxes([rects[i] for i in sel.picked], ang)
    for i in range(len(boxes)):
        for j in range(i):
            assert not _overlap_open(boxes[i], boxes[j])


def test_cover_by_squares_exact():
    R = Rectangle((0.1, 0.2), 0.35, 0.22, 0.3)
    sq = cover_by_squares(R, 0.1)
    assert len(sq) == 4 * 3
    with pytest.raises(ValueError):
        cover_by_squares(R, 0.3)


def test_delta_set_rejects_overlap():
    with pytest.raises(ValueError):
        DeltaSet([Rectangle((0, 0), 0.5, 0.5), Rectangle((0.2, 0.2), 0.5, 0.5)], 0.0, 0.1)


def test_refinement_properties():
    rng = chunk_rng(0, 9, 0)
    B = synthetic_delta_set(rng, 0.5, 0.04)
    ref = refine_delta_set(B, 1, 101)
    props = ref.stats["properties"]
    assert props["subset_of_dilation"] and props["equal_counts"] == ref.count
    assert ref.cell_density >= B.mes_lower() / 32
    assert len({int(p.sum()) for p in ref.patterns.values()}) == 1
    with pytest.raises(ValueError):
        refine_delta_set(B, 1, 100)
    with pytest.raises(ValueError):
        refine_delta_set(B, 1, 51)


def test_refinement_full_cells():
    # full-cell delta-set: one 0.9 x 0.9 square per cell
    B = DeltaSet([Rectangle.from_center((0, 0), 0.9, 0.9)], 0.0, 0.05)
    ref = refine_delta_set(B, 1, 81)
    assert ref.cell_density >= B.mes_lower() / 32


def test_union_independence_two_sets():
    refs, mes = [], []
    ns = [1, 101, 101 * 101]
    for t in range(2):
        B = synthetic_delta_set(chunk_rng(5, t), 0.5, 0.04, slope=0.3 * t)
        refs.append(refine_delta_set(B, ns[t], ns[t + 1]))
        mes.append(B.mes_lower())
    u = dilation_union(refs, mes, G=512, seed=1)
    p, q = refs[0].cell_density, refs[1].cell_density
    assert u.product_density == pytest.approx(1 - (1 - p) * (1 - q))
    assert u.identity_gap <= 4 / 512 * 2
    assert u.density > u.bound


def test_level_set_zero_function_empty():
    pts = np.random.default_rng(0).random((50, 2))
    est = level_set(pts, 0.1, certificate=lambda x: 0.0)
    assert est.density_hi == 0 and est.density_lo == 0
    est = level_set(pts, 0.1)
    assert est.density_hi == 1 and est.undetermined_fraction == 1
