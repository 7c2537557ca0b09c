import math

import numpy as np
import pytest

from chmgauss import critical, periods, surface
from chmgauss.periods import PERIOD_TOL


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_closed_forms_match_quadrature(g):
    cmp = periods.compare_closed_forms(g)
    assert len(cmp) == 9 * g
    for c in cmp:
        assert c.rel_diff < PERIOD_TOL, (c.family, c.k, c.power, c.numeric, c.closed)
        assert c.phase_ok


def test_vanishing_sine_gives_zero_period():
    g = 3
    # omega^(1)_k at power 2 carries sin((k-1) pi/(g+1)): k = 1 vanishes
    assert periods.closed_form_period(1, 1, 2, g) == 0
    assert abs(periods.period(surface.omega(1, 1, g), 2).value) < 1e-12
    # omega^(2)_0 at power 0 carries the prefactor k = 0
    assert periods.closed_form_period(2, 0, 0, g) == 0


@pytest.mark.parametrize("g", [2, 3])
@pytest.mark.parametrize("l", [1, 2])
def test_pullback_phases(g, l):
    for fam, k in surface.basis_index(g):
        f = surface.omega(fam, k, g)
        for power in range(3):
            r = periods.period(f, power, l)  # raises on a mismatch
            assert abs(r.direct - r.via_pullback) <= PERIOD_TOL * max(r.scale, abs(r.direct))


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_cohomology(g):
    rep = periods.cohomology_check(g)
    assert rep.passed, rep.max_rel
    assert len(rep.rows) == 2 * g + 1


def test_exact_form_has_zero_period():
    g = 2
    # d(z^2 w^-1) = (2 z w^-1 - z^2 w^-2 dw/dz) dz, dw/dz = w (g z^-1 + 2z/(z^2-1)) / (g+1)
    def integrand(z, w):
        dw = w * (g / z + 2 * z / (z * z - 1)) / (g + 1)
        return 2 * z / w - z * z * dw / (w * w)
    val, scale = periods.loop_integral(integrand, g)
    assert abs(val) < 1e-12 * scale


@pytest.mark.parametrize("g", [2, 3, 4])
def test_rotation_block(g):
    assert periods.rotation_check(g) < PERIOD_TOL
    R = periods.rotation_matrix(g)
    assert np.allclose(R @ R.T, np.eye(3))
    assert np.linalg.det(R) == pytest.approx(1.0)


@pytest.mark.parametrize("g", [2, 3, 4])
@pytest.mark.parametrize("mode", ["reduced", "full"])
@pytest.mark.parametrize("numeric", [False, True])
def test_dim_h_at_critical_values(g, mode, numeric):
    cv = critical.critical_values(critical.GenusParams(g))
    table = periods.period_table(g, numeric=numeric)
    for t, dim in ((cv.t1, 1), (cv.t2, 1), (cv.t3, 2), (math.sqrt(cv.t1 * cv.t2), 0)):
        a = periods.assemble_system(g, t, mode, table=table)
        assert a.dim_solution == dim and a.gap_ok
        assert a.nullity == 3 + dim
        assert a.unused_coefficients == []


@pytest.mark.parametrize("g", [2, 3])
def test_rank_transition_on_log_grid(g):
    cv = critical.critical_values(critical.GenusParams(g))
    grid = np.logspace(math.log10(cv.t1 / 4), math.log10(4 * cv.t3), 200)
    dims = periods.rank_profile(g, grid)
    assert not dims.any()
    crit = periods.rank_profile(g, np.array([cv.t1, cv.t2, cv.t3]))
    assert list(crit) == [1, 1, 2]
    near = periods.rank_profile(g, np.array([cv.t1, cv.t2, cv.t3]) * (1 + 1e-4))
    assert not near.any()


def test_system_shapes_and_errors():
    a = periods.assemble_system(3, 1.0)
    assert a.matrix.shape[1] == 2 * 3 * 3
    with pytest.raises(ValueError):
        periods.assemble_system(1, 1.0)
    with pytest.raises(ValueError):
        periods.assemble_system(3, -1.0)
    with pytest.raises(ValueError):
        periods.assemble_system(3, 1.0, mode="other")


def test_lift_closes():
    lift = periods.lift_beta(3, 256)
    assert lift.deck_power == 0
    assert np.all(np.abs(lift.z - 0.5) == pytest.approx(1.0))
    assert np.max(np.abs(lift.w ** 4 - lift.z ** 3 * (lift.z ** 2 - 1))) < 1e-12
