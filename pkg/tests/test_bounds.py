import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chmgauss import bounds, critical
from chmgauss.bounds import BOX, DomainBox

H = 1e-5


def _fd(fn, xs):
    # fourth-order central stencil with step H; the 2-point stencil's H^2 term alone reaches 1e-6 on W3
    f = lambda d: fn(xs + d * H).value  # noqa: E731
    return (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * H)


X_GRID = np.linspace(2 * H, BOX.x_max - 2 * H, 50)
Z_GRID = np.linspace(2 * H, BOX.y_max - 2 * H, 50)

# the listed pairs are held to 1e-6 absolute; the extra ones (marked rel) to 1e-8 relative
PAIRS = [
    ("W1", bounds.W, bounds.W1, X_GRID),
    ("W2", bounds.W1, bounds.W2, X_GRID),
    ("W3", bounds.W2, bounds.W3, X_GRID),
    ("W4 rel", bounds.W3, bounds.W4, X_GRID),
    ("Y1", bounds.Y, bounds.Y1, X_GRID),
    ("Y2", bounds.Y1, bounds.Y2, X_GRID),
    ("Y3", bounds.Y2, bounds.Y3, X_GRID),
    ("psi_F'", bounds.psi_F, lambda x: bounds.psi_F(x, 1), X_GRID),
    ("psi_I'", bounds.psi_I, lambda z: bounds.psi_I(z, 1), Z_GRID),
    ("R_F' rel", bounds.R_F, bounds.R_F1, X_GRID),
    ("R_I' rel", bounds.R_I, bounds.R_I1, Z_GRID),
    ("E' rel", lambda t: bounds.E_func(t, 2), lambda t: bounds.E_func_derivative(t, 2), X_GRID),
]


@pytest.mark.parametrize("name,f,df,grid", PAIRS, ids=[p[0] for p in PAIRS])
def test_derivative_vs_finite_difference(name, f, df, grid):
    exact = df(grid).value
    diff = np.abs(_fd(f, grid) - exact)
    if name.endswith("rel"):
        assert np.max(diff / np.maximum(np.abs(exact), 1.0)) < 1e-8
    else:
        assert np.max(diff) < 1e-6


def test_psi_I_series():
    zs = np.linspace(0.0, BOX.z_max, 200)
    assert np.max(np.abs(bounds.psi_I(zs).value - bounds.psi_I_series(zs, 6))) < 1e-12


@settings(max_examples=30)
@given(st.floats(0.0, 2.0 / 38))
def test_psi_F_against_mpmath(x):
    h = mpmath.mpf(x)
    ref = -mpmath.digamma(1 - h) - mpmath.digamma(1 + h) + mpmath.digamma(0.5 - h / 2) + mpmath.digamma(0.5 + h / 2)
    v = bounds.psi_F(x)
    assert abs(float(v.value) - float(ref)) <= float(v.err) + 1e-14


@settings(max_examples=30)
@given(st.floats(0.0, 2.0 / 38))
def test_W_is_derivative_of_F_squared(x):
    h = mpmath.mpf(x)
    F2 = lambda u: ((mpmath.gamma(0.5 + u / 2) / mpmath.gamma(0.5 - u / 2)) ** 2
                    * mpmath.gamma(1 - u) / mpmath.gamma(1 + u)) ** 2
    assert float(bounds.W(x).value) == pytest.approx(float(mpmath.diff(F2, h)), rel=1e-11, abs=1e-13)


def test_reference_constants_decimal_digits():
    c = bounds.reference_constants()
    assert c["psi_F(0)"] == pytest.approx(-4 * math.log(2), abs=1e-12)
    assert c["4 psi_F(0)^2"] == pytest.approx(30.74, abs=0.01)
    assert c["16 psi_F(0)^3"] == pytest.approx(-341, abs=1)
    assert c["4 psi_F''(0)"] == pytest.approx(-14.4, abs=0.1)
    assert c["4 psi_F''(0)"] == pytest.approx(-12 * 1.2020569031595942, rel=1e-12)
    assert c["64 psi_F(0)^4"] == pytest.approx(3782, abs=1)
    assert c["W(x_max)"] == pytest.approx(-4.1, abs=0.1)
    assert c["W''(0)"] == pytest.approx(-177, abs=1)
    assert c["min R_I'"] == pytest.approx(-0.095, abs=0.001)
    assert c["psi_I(z_max)^2"] == pytest.approx(1.5e-6, abs=0.1e-6)
    assert c["psi_F'(x_max)"] == pytest.approx(-0.19, abs=0.01)
    assert c["D(s_max)"] == pytest.approx(-1.146, abs=0.001)
    # leading digits of the remaining decimals
    assert str(c["2 psi_F'(x_max)"]).startswith("-0.38")
    assert str(c["24 psi_F psi_F'(x_max)"]).startswith("12.")
    assert str(c["192 psi_F^2 psi_F'(x_max)"]).startswith("-282.")
    assert str(c["8 psi_F'''(x_max)"]).startswith("-19.9")
    assert str(c["W'' majorant"]).startswith("-342.7")
    assert str(c["W'(x_max)"]).startswith("22.")


def test_w_third_derivative_under_constant():
    xs = BOX.grid(BOX.x_max)
    w3 = bounds.W3(xs)
    assert np.max(np.abs(w3.value) + w3.err) < bounds.C_W


def test_item_certificates():
    certs = bounds.certify_items()
    ids = [c.claim_id for c in certs]
    for prefix in [f"{i:02d}" for i in range(1, 16)]:
        assert any(i.startswith(prefix) for i in ids), prefix
    for c in certs:
        assert c.verified, c
        if c.method.startswith("grid") and not c.claim_id.startswith("05"):
            assert c.worst_margin > c.error_bound


def test_t3_certificates():
    certs = bounds.certify_t3_bound()
    assert all(c.verified for c in certs)
    s = np.linspace(0, BOX.s_max, 300)[1:]
    T = bounds.T_func(s)
    assert np.all(T.value + T.err < 1 + 3.5 * s)
    assert bounds.T_func(0.0).value == pytest.approx(1.0, abs=1e-14)


def test_e_vanishes_at_origin():
    assert abs(float(bounds.E_func(0.0, 2).value)) < 1e-9


def test_grid_certificate_rejects_a_false_claim():
    xs = BOX.grid(BOX.x_max)
    # W is negative, so "W > 0" must not be certified
    c = bounds._grid_certificate("fake", bounds.W, xs, +1, bounds.W1)
    assert not c.verified


def test_grid_certificate_needs_margin_beyond_error():
    xs = np.linspace(0, 1e-3, 101)

    class Tiny:
        def __init__(self, x):
            self.value = np.full_like(x, 1e-12)
            self.err = np.full_like(x, 2e-12)

    c = bounds._grid_certificate("tiny", Tiny, xs, +1, lipschitz=0.0)
    assert not c.verified


def test_t1_t2_helpers():
    p = critical.GenusParams(100)
    q = critical.quartic_instance(2, p)
    assert bounds.T1(2, p) == pytest.approx(q.T1, rel=1e-12)
    t2 = bounds.T2(2, p)
    assert q.t_minus ** 2 == pytest.approx(bounds.T1(2, p) - t2, rel=1e-10)
    assert bounds.T2(30, p) is None
    with pytest.raises(ValueError):
        bounds.T1(1, p)


def test_domain_box():
    with pytest.raises(ValueError):
        DomainBox(grid_step=1e-3)
    assert BOX.s_max == BOX.z_max
    g = BOX.grid(BOX.x_max)
    assert g[0] == 0 and g[-1] == BOX.x_max and np.max(np.diff(g)) <= BOX.grid_step
    with pytest.raises(critical.DomainError):
        bounds.psi_F(BOX.x_max * 1.1)


def test_w_derivatives_at_origin():
    z3 = 1.2020569031595942
    assert float(bounds.W1(0.0).value) == pytest.approx(64 * math.log(2) ** 2, rel=1e-13)
    assert float(bounds.W2(0.0).value) == pytest.approx(-64 * math.log(4) ** 3 - 6 * z3, rel=1e-13)
    assert float(bounds.W(0.0).value) == pytest.approx(-8 * math.log(2), rel=1e-13)
