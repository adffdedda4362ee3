import math

import numpy as np
import pytest

from hypercube.cube import BooleanFunction, all_tables, monotone_violations
from hypercube.fourier import spectrum_table, transform
from hypercube.influence import NotMonotoneError
from hypercube.social import (
    FKN_C,
    KKL_C1,
    affine_classify,
    fkn_check,
    fkn_sides,
    greedy_coalition,
    kkl_intermediate_check,
    kkl_ratio,
    kkl_sides,
)
from hypercube.zoo import Partition, and_fn, dictator, majority, or_fn, parity, tribes


def test_constants():
    assert FKN_C == 731
    assert KKL_C1 == pytest.approx(1 / (2 * math.e) ** 4, rel=1e-15)


def test_affine_classify():
    assert affine_classify(dictator(3, 2)) == ("dictator", 2)
    assert affine_classify(-dictator(3, 3)) == ("anti-dictator", 3)
    assert affine_classify(BooleanFunction.constant(2, -1)) == ("constant", None)
    assert affine_classify(majority(3)) == ("not-affine", None)


def test_affine_classify_exhaustive_n3():
    counts = {}
    for k in range(256):
        kind, _ = affine_classify(BooleanFunction.from_index(3, k))
        counts[kind] = counts.get(kind, 0) + 1
    assert counts == {"constant": 2, "dictator": 3, "anti-dictator": 3, "not-affine": 248}


def test_fkn_majority():
    r = fkn_check(majority(3))
    assert (r.W1, r.best_i, r.distance) == (0.75, 1, 0.75)
    assert r.bound == 731 / 4
    assert r.observed_constant == 3.0
    assert r.report.passed


def test_fkn_dictator():
    r = fkn_check(dictator(4, 3))
    assert (r.W1, r.best_i, r.distance, r.bound) == (1.0, 3, 0.0, 0.0)
    assert r.observed_constant is None and r.report.passed


def test_fkn_exhaustive_n4():
    c = spectrum_table(all_tables(4))
    dist, bound, W1, best = fkn_sides(c)
    assert (dist <= bound * (1 + 1e-9) + 1e-9).all()
    assert ((0 <= W1) & (W1 <= 1)).all()
    # the Parseval shortcut against a pointwise distance for a sample
    for k in range(0, 65536, 997):
        f = BooleanFunction.from_index(4, k)
        assert fkn_check(f).report.passed


def test_kkl_examples():
    assert kkl_ratio(majority(3)) == pytest.approx(1.5 / math.log(3), rel=1e-14)
    assert kkl_ratio(majority(3)) == pytest.approx(1.365, abs=1e-3)
    assert kkl_ratio(dictator(2, 1)) == pytest.approx(2 / math.log(2), rel=1e-14)
    rep = kkl_intermediate_check(majority(5))
    assert rep.passed and rep.config["log_base"] == "e"
    assert rep.quantities["bound"] == pytest.approx(
        KKL_C1 * math.exp(-12 * rep.quantities["total_influence"]), rel=1e-12)


def test_kkl_rejects_constants():
    with pytest.raises(ValueError):
        kkl_intermediate_check(BooleanFunction.constant(3, 1))
    with pytest.raises(ValueError):
        kkl_ratio(dictator(1, 1))


def test_kkl_exhaustive_n4():
    lhs, rhs = kkl_sides(spectrum_table(all_tables(4)))
    live = ~np.isnan(rhs)
    assert live.sum() == 65536 - 2
    assert (lhs[live] >= rhs[live]).all()


def test_coalition_or2():
    t = greedy_coalition(or_fn(2))
    assert t.coalition == [1]
    assert t.final_expectation == 1.0
    assert t.steps[0].max_influence == 0.5
    assert t.to_report().passed


def test_coalition_tribes_2_2():
    t = greedy_coalition(tribes(Partition.uniform(2, 2)))
    assert t.initial_expectation == -1 / 8
    assert t.coalition == [1, 2]
    assert [s.expectation for s in t.steps] == [0.25, 1.0]
    assert t.to_report().passed


@pytest.mark.parametrize("n", range(1, 8))
def test_coalition_and(n):
    t = greedy_coalition(and_fn(n))
    assert t.coalition == list(range(1, n + 1))
    assert t.final_expectation == 1.0
    assert t.to_report().passed


def test_coalition_and8_is_out_of_range():
    with pytest.raises(ValueError, match="reachable"):
        greedy_coalition(and_fn(8))


def test_coalition_direction_minus():
    t = greedy_coalition(and_fn(3), direction=-1)
    assert t.final_expectation <= -0.99
    assert t.coalition == [1]
    t = greedy_coalition(majority(5), direction=-1)
    assert t.coalition == [1, 2, 3]
    assert t.final_expectation == -1.0
    assert t.to_report().passed


def test_coalition_rejects_non_monotone():
    with pytest.raises(NotMonotoneError):
        greedy_coalition(parity(3, [1, 2]))
    with pytest.raises(ValueError):
        greedy_coalition(or_fn(2), direction=0)


def test_coalition_all_monotone_n4():
    tables = all_tables(4)
    mono = np.flatnonzero(monotone_violations(tables) == 0)
    for k in mono:
        f = BooleanFunction.from_index(4, int(k))
        if transform(f).coeffs[0] < -0.99:
            continue
        t = greedy_coalition(f)
        rep = t.to_report()
        assert rep.passed
        assert t.final_expectation >= 0.99
        assert len(t.coalition) <= 4
