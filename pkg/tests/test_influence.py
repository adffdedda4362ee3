from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hypercube import cube
from hypercube.cube import BooleanFunction, RealFunction, variable
from hypercube.fourier import spectrum_table, transform
from hypercube.influence import (
    NotMonotoneError,
    derivative,
    influence_pivot,
    influence_profile,
    influence_spectral,
    monotone_influence_check,
    pivot_influences_table,
    poincare_check,
    spectral_influences_table,
    total_influence,
)
from hypercube.zoo import dictator, majority, or_fn, parity

import oracles


def test_derivative_of_characters():
    n = 3
    for S in oracles.subsets(n):
        f = parity(n, sorted(S)) if S else BooleanFunction.constant(n, 1)
        for i in range(1, n + 1):
            d = derivative(f, i).table
            if i in S:
                expect = parity(n, sorted(S - {i})) if S - {i} else BooleanFunction.constant(n, 1)
                assert np.array_equal(d, expect.values)
            else:
                assert not d.any()


def test_derivative_or2():
    # 4-point oracle: D_1 OR_2(x) = (OR(1, x2) - OR(-1, x2)) / 2
    d = derivative(or_fn(2), 1).table
    for p, x in enumerate(oracles.cube(2)):
        expect = (oracles.or_((1, x[1])) - oracles.or_((-1, x[1]))) / 2
        assert d[p] == expect == (1 - x[1]) / 2


def test_derivative_constant():
    assert not derivative(RealFunction(np.full(8, 3.5)), 2).table.any()


@settings(max_examples=40)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.integers(1, n), st.lists(st.integers(0, 1), min_size=2 ** n, max_size=2 ** n))))
def test_derivative_spectrum_commutes(args):
    i, bits = args
    f = BooleanFunction.from_bits(bits)
    n = f.n
    c = transform(f).coeffs
    dc = transform(derivative(f, i)).coeffs
    bit = 1 << (i - 1)
    expect = np.zeros_like(c)
    for m in range(2 ** n):
        if m & bit:
            expect[m ^ bit] = c[m]
    assert np.array_equal(dc, expect)
    assert set(np.unique(derivative(f, i).table)) <= {-1.0, 0.0, 1.0}


def test_pivot_examples():
    assert influence_pivot(or_fn(2), 1) == 0.5
    assert oracles.pivot_influence(oracles.or_, 2, 1) == Fraction(1, 2)
    for i in range(1, 4):
        assert influence_pivot(majority(3), i) == 0.5
        assert oracles.pivot_influence(oracles.maj, 3, i) == Fraction(1, 2)
        for j in range(1, 4):
            assert influence_pivot(dictator(3, j), i) == (1.0 if i == j else 0.0)


def test_pivot_requires_boolean():
    with pytest.raises(TypeError):
        influence_pivot(RealFunction(np.zeros(4)), 1)


def test_spectral_examples():
    assert total_influence(transform(majority(3))) == 1.5
    assert total_influence(transform(or_fn(2))) == 1.0
    for S in ([1], [1, 3], [1, 2, 3, 4]):
        assert total_influence(parity(4, S)) == len(S)
    assert influence_spectral(majority(3), 2) == 0.5


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pivot_matches_vector_oracle(n):
    tables = cube.all_tables(n)
    piv = pivot_influences_table(tables)
    for k, table in enumerate(oracles.all_boolean_tables(n)):
        fun = oracles.table_fun(table)
        assert piv[k].tolist() == [float(oracles.pivot_influence(fun, n, i))
                                   for i in range(1, n + 1)]


def test_pivot_equals_spectral_exhaustive_n4():
    tables = cube.all_tables(4)
    piv = pivot_influences_table(tables)
    spec = spectral_influences_table(spectrum_table(tables))
    assert np.array_equal(piv, spec)
    # dyadic: multiples of 2^-(n-1)
    assert np.array_equal(piv * 8, np.rint(piv * 8))


def test_profile():
    p = influence_profile(majority(5), "pivot-count")
    q = influence_profile(majority(5), "spectral")
    assert np.array_equal(p.per_coordinate, q.per_coordinate)
    assert p.total == q.total == pytest.approx(p.per_coordinate.sum(), abs=1e-12)
    assert ((0 <= p.per_coordinate) & (p.per_coordinate <= 1)).all()
    with pytest.raises(ValueError):
        influence_profile(majority(3), "other")


@pytest.mark.parametrize("f", [majority(3), or_fn(2), BooleanFunction.constant(3, -1),
                               majority(7)])
def test_monotone_influence(f):
    rep = monotone_influence_check(f)
    assert rep.passed
    assert rep.quantities["max_deviation"] == 0.0


def test_monotone_influence_values():
    rep = monotone_influence_check(majority(3))
    assert rep.quantities["influences"].tolist() == [0.5] * 3
    assert rep.quantities["level1_coefficients"].tolist() == [0.5] * 3


def test_monotone_influence_rejects():
    with pytest.raises(NotMonotoneError, match="coordinate"):
        monotone_influence_check(parity(2, [1, 2]))


def test_poincare_examples():
    r = poincare_check(variable(4, 1))
    assert r.quantities["variance"] == r.quantities["total_influence"] == 1.0
    assert r.quantities["equality"] is True
    r = poincare_check(or_fn(2))
    assert (r.quantities["variance"], r.quantities["total_influence"]) == (0.75, 1.0)
    assert r.quantities["equality"] is False
    r = poincare_check(RealFunction(np.full(8, 2.0)))
    assert r.passed and r.quantities["variance"] == r.quantities["total_influence"] == 0


@settings(max_examples=50)
@given(st.integers(0, 8).flatmap(
    lambda n: arrays(np.float64, 2 ** n, elements=st.floats(-100, 100))))
def test_poincare_random(table):
    r = poincare_check(RealFunction(table))
    assert r.passed
    assert r.quantities["slack"] >= -1e-9
