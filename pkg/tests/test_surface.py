import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chmgauss import surface
from chmgauss.surface import SurfacePoint, sym_kappa, sym_lambda


def _point(z, g, m=0):
    return SurfacePoint(z, surface.w_branches(z, g)[m], g)


complex_z = st.complex_numbers(min_magnitude=0.05, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=40)
@given(complex_z, st.integers(2, 6), st.integers(0, 6))
def test_lambda_has_order_2g_plus_2(z, g, m):
    p = _point(z, g, m % (g + 1))
    q = p
    for n in range(1, 2 * g + 3):
        q = sym_lambda(q)
        back = abs(q.z - p.z) < 1e-9 and abs(q.w - p.w) < 1e-9 * max(1, abs(p.w))
        assert back == (n == 2 * g + 2)


@settings(max_examples=40)
@given(complex_z, st.integers(2, 6))
def test_kappa_is_an_involution(z, g):
    p = _point(z, g)
    q = sym_kappa(sym_kappa(p))
    assert q.z == pytest.approx(p.z) and q.w == pytest.approx(p.w)


@pytest.mark.parametrize("g", [2, 3, 4, 7])
def test_lambda_swaps_poles(g):
    r = surface.ramification_set(g)
    q = sym_lambda(r.P_plus)
    assert q.z == r.P_minus.z and q.w == 0
    assert sym_lambda(r.Q0) == r.Q0


@pytest.mark.parametrize("g", [2, 3, 5])
def test_ramification_set(g):
    r = surface.ramification_set(g)
    assert len(r) == 2 * g + 6
    A = math.sqrt(g / (g + 2))
    for m in range(g + 1):
        assert r.point(f"P{m}").z == pytest.approx(A)
        assert r.point(f"S{m}").z == pytest.approx(-A)
    # w^(g+1) = z^g (z^2 - 1) has a critical point in z exactly at +-A
    f = lambda z: z ** g * (z * z - 1)  # noqa: E731
    df = lambda z: g * z ** (g - 1) * (z * z - 1) + 2 * z ** (g + 1)  # noqa: E731
    assert abs(df(A)) < 1e-12 and abs(df(-A)) < 1e-12
    assert abs(f(A)) > 0
    with pytest.raises(KeyError):
        r.point("Z1")


def test_surface_point_validation():
    with pytest.raises(ValueError):
        SurfacePoint(0.5, 1.0, 2)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_w_branches_are_roots(g):
    z = 0.3 + 0.7j
    ws = surface.w_branches(z, g)
    assert len(ws) == g + 1
    for w in ws:
        assert abs(w ** (g + 1) - z ** g * (z * z - 1)) < 1e-12
    assert len({round(cmath.phase(w), 10) for w in ws}) == g + 1


@pytest.mark.parametrize("g", [2, 3, 4])
def test_monodromy_of_small_loops(g):
    def loop(c, r):
        return lambda s: c + r * np.exp(2j * np.pi * s)
    z0 = 0.1
    c0 = surface.continue_w(loop(0.0, 0.1), surface.w_branches(z0, g)[0], g)
    assert c0.closed and c0.deck_power == g % (g + 1)
    c1 = surface.continue_w(loop(1.0, 0.1), surface.w_branches(1.1, g)[0], g)
    assert c1.deck_power == 1
    big = surface.continue_w(loop(0.0, 3.0), surface.w_branches(3.0, g)[0], g)
    assert big.deck_power == (g + 2) % (g + 1)
    assert abs(big.w[-1] - big.w[0] * big.deck_factor) < 1e-9 * abs(big.w[0])
    # path continuation keeps the defining relation
    assert np.max(np.abs(c0.w ** (g + 1) - c0.z ** g * (c0.z ** 2 - 1))) < 1e-12


def test_continuation_rejects_bad_start():
    with pytest.raises(ValueError):
        surface.continue_w(np.array([1.5, 1.6]), 5.0, 2)


@pytest.mark.parametrize("g", range(2, 51))
def test_counting(g):
    assert len(surface.candidate_forms(g)) == 5 * g + 1
    assert len(surface.basis_forms(g)) == 3 * g
    assert len(surface.quadratic_differentials(g)) == 5 * g + 1
    assert surface.divisor_degree(g) == 6 * g
    assert surface.riemann_roch_dimension(g) == 6 * g - g + 1 == 5 * g + 1


@pytest.mark.parametrize("g", range(2, 12))
def test_admissibility_by_integer_arithmetic(g):
    for label, j, k in surface.quadratic_differentials(g):
        if label in ("q1", "q2", "q3"):
            assert surface.admissible_type1(j, k, g), (label, j, k)
            assert k * (g + 1) + j * g >= -1
        else:
            assert surface.admissible_type2(j, k, g), (label, j, k)
    fam1 = [(j, k) for lab, j, k in surface.quadratic_differentials(g) if lab == "q1"]
    for j, k in fam1:
        assert k * (g + 1) + j * g >= -1 and j >= -2 * (g - 1) and -k * (g + 1) - j * (g + 2) >= -1


def test_lambda_phase_of_forms():
    g = 3
    f = surface.omega(2, 1, g)
    p = _point(1.7 + 0.2j, g, 1)
    q = sym_lambda(p)
    # pullback: f(q) d(-z) = phase * f(p) dz
    assert -f(q) == pytest.approx(f.lambda_phase() * f(p))


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_basis_residues_vanish(g):
    for form in surface.basis_forms(g):
        for centre in ("Q0", "P1"):
            r = surface.residue_at(form, centre)
            assert abs(r.value) < 1e-10, (form.family, form.k, centre, r.value)
            assert r.radii[1] == r.radii[0] / 2
            assert abs(r.values[0] - r.values[1]) < 1e-10


def test_residue_detects_simple_pole():
    g = 2
    dz_over_z = surface.DifferentialForm("test", 0, g, -1, 0)
    assert surface.residue_at(dz_over_z, "Q0").value == pytest.approx(g + 1, abs=1e-10)
    # z dz/(z^2 - A^2) = (1/2) dz/(z - A) + regular; w is a local coordinate-free factor here
    pole = surface.DifferentialForm("test", 0, g, 1, 0, (1.0,), 1)
    assert surface.residue_at(pole, "P1").value == pytest.approx(0.5, abs=1e-10)


def test_some_candidates_have_residues():
    g = 3
    basis_like = {(f.z_power, f.w_power, f.pole_order) for f in surface.basis_forms(g)}
    loud = 0
    for f in surface.candidate_forms(g):
        if (f.z_power, f.w_power, f.pole_order) in basis_like:
            continue
        try:
            r = surface.residue_at(f, "P1")
        except surface.ResidueError:
            continue
        loud += abs(r.value) > 1e-6
    assert loud > 0
