import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chmgauss import specfun
from chmgauss.specfun import DomainError, digamma, gamma_ratio, hurwitz_zeta, ln_gamma, polygamma

GRID = np.linspace(0.01, 4.0, 157)


def test_ln_gamma_matches_mpmath_and_its_bound():
    r = ln_gamma(GRID)
    for x, v, e in zip(GRID, r.value, r.abs_err_bound):
        ref = float(mpmath.loggamma(mpmath.mpf(x)))
        assert abs(v - ref) <= max(e, 1e-300) + 1e-15 * abs(ref)
        assert abs(v - ref) <= 1e-14 * max(1.0, abs(ref))


def test_digamma_matches_mpmath():
    r = digamma(GRID)
    for x, v, e in zip(GRID, r.value, r.abs_err_bound):
        ref = float(mpmath.digamma(mpmath.mpf(x)))
        assert abs(v - ref) <= e + 1e-15 * abs(ref)
        assert abs(v - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("n", range(1, 9))
def test_polygamma_matches_mpmath(n):
    xs = np.linspace(0.05, 4.0, 40)
    r = polygamma(n, xs)
    for x, v in zip(xs, r.value):
        ref = float(mpmath.polygamma(n, mpmath.mpf(x)))
        assert v == pytest.approx(ref, rel=1e-12)


def test_frozen_values():
    # mpmath at 40 digits
    assert float(ln_gamma(0.5)) == pytest.approx(0.5723649429247001, rel=1e-15)
    assert float(digamma(1.0)) == pytest.approx(-0.5772156649015329, rel=1e-15)
    assert float(polygamma(1, 1.0)) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert float(polygamma(2, 1.0)) == pytest.approx(-2 * 1.2020569031595942, rel=1e-14)
    assert specfun.zeta(3) == pytest.approx(1.2020569031595942, rel=1e-15)
    assert float(hurwitz_zeta(2, 0.5)) == pytest.approx(math.pi ** 2 / 2, rel=1e-14)


def test_recurrence_identity():
    xs = np.linspace(0.0, 1.0, 102)[1:-1]
    resid = digamma(xs + 1).value - digamma(xs).value - 1 / xs
    assert np.max(np.abs(resid)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_half_integer_polygamma(k):
    n = 2 * k
    lhs = float(polygamma(n, 0.5))
    rhs = (2 ** (n + 1) - 1) * float(polygamma(n, 1.0))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_duplication_identity():
    xs = np.linspace(0.1, 2.0, 200)
    lhs = ln_gamma(xs).value + ln_gamma(xs + 0.5).value
    rhs = (1 - 2 * xs) * math.log(2) + 0.5 * math.log(math.pi) + ln_gamma(2 * xs).value
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(st.floats(0.01, 50.0))
def test_ln_gamma_shift(x):
    assert float(ln_gamma(x + 1)) == pytest.approx(float(ln_gamma(x)) + math.log(x), abs=1e-12 * max(1, x))


@given(st.floats(0.05, 10.0), st.integers(1, 6))
def test_polygamma_shift(x, n):
    lhs = float(polygamma(n, x + 1)) - float(polygamma(n, x))
    rhs = (-1) ** n * math.factorial(n) / x ** (n + 1)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0.1, 20.0), st.floats(0.1, 20.0))
def test_gamma_ratio_against_mpmath(p, q):
    r = gamma_ratio(p, q)
    ref = float(mpmath.gamma(p) / mpmath.gamma(q))
    assert float(r) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_domain_errors(x):
    with pytest.raises(DomainError):
        ln_gamma(x)
    with pytest.raises(DomainError):
        digamma(x)


def test_polygamma_order_limit():
    with pytest.raises(DomainError):
        polygamma(9, 1.0)


def test_bernoulli():
    from fractions import Fraction
    assert specfun.bernoulli_even(3) == (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42))
