import math

import pytest

from rsets import __version__
from rsets import verify as V
from rsets.construct import build_schedule


def test_check_margin_semantics():
    up = V.Check("a", "x <= 2", 2.0, 2.0)
    assert up.margin == 0 and up.passed
    lo = V.Check("b", "x >= 1", 1.0, 0.9, "lower", tolerance=0.05)
    assert lo.margin == pytest.approx(-0.05) and not lo.passed
    assert V.Check("c", "x >= 1", 1.0, 0.99, "lower", tolerance=0.05).passed


def test_report_roundtrip():
    rep = V.Report("demo", {"p": 1}, [V.Check("a", "claim", 1.0, 0.5, witness={"k": [1, 2]})], seed=3)
    text = rep.dumps()
    back = V.Report.loads(text)
    assert back.dumps() == text
    assert back.version == __version__ and back.passed


def test_empty_report_does_not_pass():
    assert not V.Report("x", {}, []).passed


def test_lemma2_reproducible_and_worker_independent():
    a = V.verify_lemma2(trials=45_000, targeted=3000, seed=5)
    b = V.verify_lemma2(trials=45_000, targeted=3000, seed=5)
    c = V.verify_lemma2(trials=45_000, targeted=3000, seed=5, workers=2)
    assert a.dumps() == b.dumps() == c.dumps()
    assert a.passed


def test_lemma2_rejects_empty_band():
    with pytest.raises(ValueError):
        V.verify_lemma2(gamma=math.pi / 12, trials=10)


def test_lemma3_vacuous_bound_flagged():
    rep = V.verify_lemma3(trials=2000, n=4)
    assert rep.params["bound_vacuous"]
    assert not rep.check("flat_bound_small").passed
    assert rep.check("flatness").claimed_bound == 2.5


def test_lemma4_selected_checks():
    rep = V.verify_lemma4(checks=("l1", "l4"))
    assert [c.name for c in rep.checks] == ["l1", "l4"]
    assert rep.passed


def test_lemma5_dilations_and_precondition():
    assert V.lemma5_dilations([0.04, 0.04]) == [1, 101, 10201]
    assert V.lemma5_dilations([0.1]) == [1, 41]
    with pytest.raises(ValueError):
        V.verify_lemma5(T=1, densities=0.5, deltas=0.05)


def test_lemma5_single_set():
    rep = V.verify_lemma5(T=1, G=256)
    assert rep.check("refine_1").observed >= 0.5 / 32
    assert rep.passed


def test_tail_sums():
    assert V.tail_sum(3) == pytest.approx(sum(1 / (k * 2**k * math.log(k) ** 1.5) for k in range(4, 80)))
    cut = V.tail_cutoff(0.01)
    assert V.tail_sum(cut) < 0.01 <= V.tail_sum(cut - 1)


def test_theorem1_preconditions():
    sched = build_schedule([(0.1, 0.2)], 3, n_points=32)
    with pytest.raises(ValueError, match="no scheduled"):
        V.verify_theorem1(sched, 0.5, 0.8)
    with pytest.raises(ValueError, match="3 S_k"):
        V.verify_theorem1(sched, 0.152, 0.16)


def test_theorem2_default():
    rep = V.verify_theorem2(trials=60)
    assert rep.passed
