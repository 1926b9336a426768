"""The nine acceptance criteria at their stated tolerances and time limits."""
import math
import time

import pytest

from conftest import ACCEPTANCE
from rsets import verify as V
from rsets.construct import (HyperbolicRegion, SlopeInterval, ThetaConfig, build_phi, build_schedule,
                             hyperbolic_lower_bound, next_breakpoint, next_dilation)
from rsets.funcrep import total_abs_integral

EPS, GAMMA = 0.5, math.pi / 24


def record(k, name, ok, detail):
    ACCEPTANCE[k] = (name, bool(ok), detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {k}. {name}: {detail}")
    assert ok, detail


class Timer:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t


def test_1_sign_sums():
    with Timer() as t:
        rep = V.verify_lemma2(EPS, GAMMA, 10**6, seed=7, targeted=10**4)
    worst = max(rep.check("sign_sum_random").observed, rep.check("sign_sum_targeted").observed)
    viol = rep.check("triple_implications").observed
    ok = rep.params["N"] == 81 and worst <= 2 and viol == 0 and t.elapsed < 60
    record(1, "sign-sum bound", ok, f"max |sum| = {worst}, implication violations {viol}, {t.elapsed:.1f} s")


def test_2_bump_exactness():
    with Timer() as t:
        phi, _ = build_phi(ThetaConfig(EPS, GAMMA))
        total = phi.total_integral()
        absint = total_abs_integral(phi)
        *_, q = V.quadrant_grid(phi, EPS, GAMMA, 20, 21)
    ok = (abs(total) <= 1e-12 and abs(absint - 1) <= 1e-12 and q.size == 20 * 20 * 21
          and q.min() >= 0.25 and t.elapsed < 30)
    record(2, "bump exactness", ok, f"int = {total:.2e}, int|.| - 1 = {absint - 1:.2e}, "
                                    f"min quadrant = {q.min():.15f}, {t.elapsed:.1f} s")


def test_3_flatness():
    with Timer() as t:
        rep = V.verify_lemma3(EPS, GAMMA, trials=10**5, seed=0)
    fl = rep.check("flatness")
    small = rep.check("flat_bound_small")
    ok = fl.passed and fl.observed <= 10 / 81 and small.passed and 10 / 81 < EPS**3 and t.elapsed < 120
    record(3, "flatness", ok, f"max |int_R phi| = {fl.observed:.6g} <= 10/N = {10 / 81:.6g} "
                              f"< eps^3 = {EPS**3}, {t.elapsed:.1f} s")


def test_4_witness_measure():
    with Timer() as t:
        A = HyperbolicRegion(0.01)
        rep = V.verify_lemma4(0.05, 0.01, SlopeInterval(math.pi / 48, math.pi / 48), trials=200,
                              checks=("l2",))
    px = rep.check("l2_pixels")
    wit = rep.check("l2_witness")
    ok = (abs(A.area - 0.0056472) <= 1e-7 and px.passed and abs(hyperbolic_lower_bound(0.01) - 0.0053007) <= 1e-7
          and A.area > hyperbolic_lower_bound(0.01) and wit.passed and wit.observed > 100 and t.elapsed < 60)
    record(4, "witness measure", ok, f"|A| = {A.area:.7f}, pixel gap {px.observed:.2e}, "
                                     f"min witness average {wit.observed:.2f} > 100, {t.elapsed:.1f} s")


def test_5_scale_certificates():
    with Timer() as t:
        rep = V.verify_lemma4(0.05, 0.01, SlopeInterval(math.pi / 48, math.pi / 48), checks=("l4", "l5"),
                              audit_samples=10_000)
    l4, l5 = rep.check("l4"), rep.check("l5")
    ok = l4.passed and l5.passed and l5.detail["cells"] == 81 and t.elapsed < 180
    record(5, "scale certificates", ok, f"tail constant {l4.observed:.6g} <= eps, small-scale mes^* "
                                        f"{l5.observed:.4g} < eps over {l5.trials} samples, {t.elapsed:.1f} s")


def test_6_dilation_union():
    with Timer() as t:
        rep = V.verify_lemma5(T=3, densities=0.5, G=2048, seed=0)
    u, ind = rep.check("union"), rep.check("independence")
    ok = rep.passed and u.margin > 0 and ind.observed <= 2 / 2048 and t.elapsed < 120
    record(6, "dilation union", ok, f"union {u.observed:.4f} > {u.claimed_bound:.4f}, identity gap "
                                    f"{ind.observed:.2e} <= 2/G, {t.elapsed:.1f} s")


def test_7_schedule_arithmetic():
    with Timer() as t:
        m2 = next_breakpoint(2, 0.5)
        n2 = next_dilation(1, 0.01, 3)
        sched = build_schedule([(0.1, 0.2)], 6, n_points=16)
        sched.check()
        bands = [sched.band(lv.k) for lv in sched.levels]
        nested = all(lo < hi for lo, hi in bands)
        disjoint = all(hi2 <= lo1 for (lo1, _), (_, hi2) in zip(bands, bands[1:]))
    ok = m2 == 6 and n2 == 401 and nested and disjoint and t.elapsed < 5
    record(7, "schedule arithmetic", ok, f"m_2 = {m2}, n_2 = {n2}, {len(bands)} bands disjoint, {t.elapsed:.2f} s")


def test_8_theorem1_mechanism():
    with Timer() as t:
        sched = build_schedule([(0.1, 0.2)], 3, mode="relaxed", n_points=900)
        rep = V.verify_theorem1(sched, 0.152, 0.8, seed=0)
    div, conv, tail = rep.check("divergence_k3"), rep.check("convergence_k3"), rep.check("tail")
    ok = rep.passed and div.margin > 0 and t.elapsed < 300
    record(8, "multi-level mechanism", ok,
           f"witness {div.observed:.4f} >= {div.claimed_bound:.4f}, max sampled M_s psi_3 = {conv.observed:.2e} "
           f"<= 1/8 on U (density {conv.detail['u_density']:.3f}), tail {tail.observed:.4f} < "
           f"{tail.claimed_bound}, {t.elapsed:.1f} s")


def test_9_theorem2_delegation():
    with Timer() as t:
        rep = V.verify_theorem2(seed=0)
    d, o = rep.check("delegation"), rep.check("outside")
    ok = rep.passed and d.observed <= 1e-12 and o.observed == 0 and t.elapsed < 10
    record(9, "assembly delegation", ok, f"max difference {d.observed:.1e}, outside value {o.observed}, "
                                          f"{t.elapsed:.1f} s")
