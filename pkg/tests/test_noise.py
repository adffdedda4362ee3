import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hypercube.cube import BooleanFunction, RealFunction, variable
from hypercube.fourier import Spectrum, inverse_transform, plancherel, transform
from hypercube.noise import (
    PRESETS,
    NoiseParams,
    admissible,
    apply_noise,
    bonami_check,
    hypercontractivity_check,
    lp_norm,
    lp_norm_table,
    one_norm_trick_check,
    riesz_product,
    truncation_lemma_check,
)
from hypercube.zoo import majority, or_fn, parity

import oracles


def real_tables(max_n=8, bound=50):
    return st.integers(0, max_n).flatmap(
        lambda n: arrays(np.float64, 2 ** n, elements=st.floats(-bound, bound)))


def test_lp_examples():
    f = RealFunction(np.array([1.0, 1.0, 1.0, -1.0]))
    assert lp_norm(f, 1) == lp_norm(f, 2) == lp_norm(f, math.inf) == 1.0
    g = RealFunction(np.array([2.0, 0.0]))
    assert lp_norm(g, 2) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert lp_norm(g, 4) == pytest.approx(8 ** 0.25, rel=1e-15)
    assert lp_norm(g, math.inf) == 2.0
    with pytest.raises(ValueError):
        lp_norm(g, 0.5)


@settings(max_examples=40)
@given(real_tables())
def test_lp_monotone_in_p(table):
    norms = [lp_norm(RealFunction(table), p) for p in (1, 4 / 3, 2, 3, 4, math.inf)]
    for a, b in zip(norms, norms[1:]):
        assert a <= b * (1 + 1e-12) + 1e-300


def test_noise_multiplier():
    s = apply_noise(transform(majority(3)), 0.5)
    assert s.coeffs.tolist() == [0, 0.25, 0.25, 0, 0.25, 0, 0, -0.5 * 0.125]
    assert np.array_equal(apply_noise(s, 1.0).coeffs, s.coeffs)
    zero = apply_noise(transform(or_fn(3)), 0.0)
    assert zero.coeffs[0] == 0.75 and not zero.coeffs[1:].any()


@settings(max_examples=30)
@given(real_tables(), st.floats(0.05, 1.0))
def test_noise_round_trip(table, rho):
    s = transform(RealFunction(table))
    back = apply_noise(apply_noise(s, rho), 1 / rho).coeffs
    scale = max(1.0, np.abs(s.coeffs).max())
    assert np.abs(back - s.coeffs).max() <= 1e-9 * scale * rho ** -(s.n)


@settings(max_examples=30)
@given(st.integers(0, 7).flatmap(lambda n: st.tuples(
    arrays(np.float64, 2 ** n, elements=st.floats(-10, 10)),
    arrays(np.float64, 2 ** n, elements=st.floats(-10, 10)))), st.floats(-1, 1))
def test_noise_self_adjoint(pair, rho):
    f, g = (RealFunction(t) for t in pair)
    lhs = plancherel(apply_noise(transform(f), rho), g)
    rhs = plancherel(f, apply_noise(transform(g), rho))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("n,rho", [(1, 0.5), (3, -0.3), (5, 0.9)])
def test_riesz_product(n, rho):
    R = riesz_product(rho, n)
    for p, x in enumerate(oracles.cube(n)):
        assert R.table[p] == pytest.approx(math.prod(1 + rho * v for v in x), rel=1e-14)
    c = transform(R).coeffs
    for m, S in enumerate(oracles.subsets(n)):
        assert c[m] == pytest.approx(rho ** len(S), rel=1e-12, abs=1e-15)
    assert np.mean(R.table) == pytest.approx(1.0, rel=1e-14)


def test_riesz_examples():
    assert riesz_product(0.5, 1).table.tolist() == [1.5, 0.5]


def test_bonami_examples():
    r = bonami_check(majority(3))
    assert r.passed and r.quantities["degree"] == 3
    assert r.quantities["E[f^4]"] == 1.0
    r = bonami_check(variable(1, 1))
    assert r.passed
    assert [a.name for a in r.assertions][1:] == ["E[f^4]=a0^4+a1^4+6a0^2a1^2", "E[f^2]=a0^2+a1^2"]


@settings(max_examples=60)
@given(st.floats(-5, 5), st.floats(-5, 5))
def test_bonami_n1_identities(a0, a1):
    f = inverse_transform(Spectrum(np.array([a0, a1])))
    assert bonami_check(f).passed


@settings(max_examples=50)
@given(real_tables())
def test_bonami_random(table):
    assert bonami_check(RealFunction(table)).passed


def test_one_norm_examples():
    r = one_norm_trick_check(parity(3, [1, 2, 3]))
    assert r.passed and r.quantities["norm2"] == r.quantities["norm1"] == 1.0
    assert one_norm_trick_check(RealFunction(np.array([1.0, 0.0, 0.0, 0.0]))).passed


@settings(max_examples=50)
@given(real_tables())
def test_one_norm_random(table):
    assert one_norm_trick_check(RealFunction(table)).passed


def test_presets():
    assert PRESETS["4,2"] == NoiseParams(1 / math.sqrt(3), 2.0, 4.0)
    assert PRESETS["2,4/3"].p == 4 / 3 and PRESETS["2,4/3"].q == 2
    assert all(p.admissible for p in PRESETS.values())


def test_admissibility():
    assert admissible(0.5, 2, 2)
    assert not admissible(1.1, 2, 2)
    assert admissible(0.0, 2, math.inf)
    assert not admissible(0.1, 2, math.inf)
    assert admissible(1 / math.sqrt(3), 2, 4)
    assert not admissible(0.6, 2, 4)
    with pytest.raises(ValueError):
        NoiseParams(0.5, 4, 2)
    with pytest.raises(ValueError):
        NoiseParams(0.5, 0.5, 2)


def test_hyper_examples():
    r = hypercontractivity_check(majority(3), "4,2")
    assert r.passed and r.quantities["admissible"]
    r = hypercontractivity_check(or_fn(3), NoiseParams(0.9, 2, 4))
    assert not r.quantities["admissible"]
    assert r.assertions == [] and r.passed
    r = hypercontractivity_check(or_fn(3), NoiseParams(0.0, 1, math.inf))
    assert r.passed and r.quantities["noisy_norm_q"] == 0.75


@settings(max_examples=50)
@given(real_tables(), st.sampled_from(sorted(PRESETS)))
def test_hyper_presets_random(table, name):
    assert hypercontractivity_check(RealFunction(table), name).passed


def test_truncation_examples():
    r = truncation_lemma_check(or_fn(2), 1)
    assert r.quantities["truncated_energy"] == 0.75
    assert r.quantities["bound"] == pytest.approx(math.sqrt(3))
    assert r.passed
    with pytest.raises(ValueError):
        truncation_lemma_check(or_fn(2), 3)


@settings(max_examples=50)
@given(real_tables(), st.integers(0, 8))
def test_truncation_random(table, d):
    n = table.size.bit_length() - 1
    assert truncation_lemma_check(RealFunction(table), min(d, n)).passed


def test_boolean_functions_pass_all():
    for k in range(256):
        f = BooleanFunction.from_index(3, k)
        assert bonami_check(f).passed
        assert one_norm_trick_check(f).passed
        assert hypercontractivity_check(f, "2,4/3").passed


@pytest.mark.parametrize("p", [1.5, 3, 4, 6, 8, 4 / 3])
def test_lp_matches_direct_formula(p):
    table = np.random.default_rng(5).normal(size=(7, 64))
    direct = np.mean(np.abs(table) ** p, axis=-1) ** (1 / p)
    assert np.allclose(lp_norm_table(table, p), direct, rtol=1e-13, atol=0)
