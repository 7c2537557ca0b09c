"""Periods of the basis forms over the cycles lambda^l(beta~) and the resulting linear systems.

The cycle beta~ lifts the circle z = 1/2 + exp(2 pi i s) from z = 3/2 with
w(0) > 0. The integrands are analytic and periodic in s along the closed lift,
so the trapezoid rule converges geometrically; node counts are doubled until
two successive sums agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import critical
from .surface import DifferentialForm, basis_index, continue_w, omega, rho, w_branches

QUAD_TOL = 1e-12
PERIOD_TOL = 1e-8
RANK_RTOL = 1e-8
GAP_FACTOR = 1e3


class PeriodError(RuntimeError):
    """Quadrature did not converge or two routes to a period disagree."""


# ----------------------------------------------------------------- lift


@dataclass(frozen=True)
class Lift:
    g: int
    l: int
    s: np.ndarray
    z: np.ndarray
    w: np.ndarray
    dz_ds: np.ndarray
    deck_power: int


def beta(s):
    return 0.5 + np.exp(2j * np.pi * np.asarray(s))


def start_w(g: int) -> complex:
    """The real positive branch over z = 3/2."""
    w = max(w_branches(1.5, g), key=lambda v: v.real)
    return complex(w.real, 0.0)


@lru_cache(maxsize=256)
def lift_beta(g: int, n: int = 512, l: int = 0) -> Lift:
    """n periodic samples of lambda^l(beta~): z = (-1)^l beta(s), starting at w = rho^l w(0)."""
    if g < 2:
        raise ValueError("g >= 2 required")
    sgn = (-1) ** l
    s = np.arange(n + 1) / n
    zs = sgn * beta(s)
    cont = continue_w(zs, rho(g) ** l * start_w(g), g)
    if not cont.closed or cont.deck_power != 0:
        raise PeriodError("lift of beta does not close after one turn")
    dz = sgn * 2j * np.pi * np.exp(2j * np.pi * s)
    return Lift(g, l, s[:-1], zs[:-1], cont.w[:-1], dz[:-1], cont.deck_power)


def loop_integral(integrand, g: int, l: int = 0, tol: float = QUAD_TOL) -> tuple[complex, float]:
    """(integral over lambda^l(beta~) of integrand(z, w) dz, scale) by trapezoid doubling.

    ``scale`` is the integral of |integrand dz|, the natural size for relative comparisons.
    """
    n = 128
    prev = None
    while n <= 1 << 16:
        lift = lift_beta(g, n, l)
        vals = integrand(lift.z, lift.w) * lift.dz_ds
        cur = complex(np.mean(vals))
        scale = float(np.mean(np.abs(vals)))
        if prev is not None and abs(cur - prev) <= tol * max(scale, 1e-300):
            return cur, scale
        prev = cur
        n *= 2
    raise PeriodError("loop quadrature did not converge")


# --------------------------------------------------------------- periods


@dataclass(frozen=True)
class PeriodResult:
    value: complex
    scale: float
    direct: complex | None = None
    via_pullback: complex | None = None


def period(form: DifferentialForm, power: int, l: int = 0, check: bool = True) -> PeriodResult:
    """Integral of gamma^power * form over lambda^l(beta~).

    For l > 0 the direct loop integral is compared with phase^l times the l = 0
    period, phase being the pullback factor of gamma^power * form under lambda.
    """
    if power not in (0, 1, 2):
        raise ValueError("power must be 0, 1 or 2")
    f = form.times_gamma(power)
    base, scale = loop_integral(f.coefficient, form.g, 0)
    if l == 0:
        return PeriodResult(base, scale, base, base)
    pulled = f.lambda_phase() ** l * base
    if not check:
        return PeriodResult(pulled, scale, None, pulled)
    direct, _ = loop_integral(f.coefficient, form.g, l)
    if abs(direct - pulled) > PERIOD_TOL * max(scale, abs(direct)):
        raise PeriodError(f"direct {direct} and pullback {pulled} disagree for l={l}")
    return PeriodResult(direct, scale, direct, pulled)


def _sn(a: int, g: int) -> float:
    return math.sin(a * math.pi / (g + 1))


def closed_form_period(family: int, k: int, power: int, g: int) -> complex:
    """Gamma-function value of the beta~ period of gamma^power * omega_k^(family).

    Terms whose prefactor or sine factor vanishes are returned as 0 without
    touching the (possibly undefined) constant.
    """
    omega(family, k, g)  # validates the index range
    half = (g + 2) / (2 * (g + 1))
    table = {
        (1, 0): (-1.0, k + 1, "K"),
        (1, 1): (1.0, k, "I"),
        (1, 2): (1.0, k - 1, "J"),
        (2, 0): (-half * k, k, "I"),
        (2, 1): (half * (g + 2 - k), k - 1, "J"),
        (2, 2): (half * (2 * g + 4 - k), k - 2, "L"),
        (3, 0): (half * (g + 2 + k), k + 1, "K"),
        (3, 1): (-half * k, k, "I"),
        (3, 2): (half * (g + 2 - k), k - 1, "J"),
    }
    pre, arg, const = table[(family, power)]
    sn = _sn(arg, g)
    if pre == 0 or arg % (g + 1) == 0:
        return 0j
    fn = {"I": critical.I_const, "J": critical.J_const, "K": critical.K_const, "L": critical.L_const}[const]
    return 2j * pre * sn * fn(k, g)[0]


@dataclass(frozen=True)
class PeriodRow:
    family: int
    k: int
    p0: complex
    p1: complex
    p2: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.p0, self.p1, self.p2)


def period_table(g: int, numeric: bool = True) -> list[PeriodRow]:
    """beta~ periods of (omega, gamma omega, gamma^2 omega) for every basis form."""
    rows = []
    for fam, k in basis_index(g):
        if numeric:
            f = omega(fam, k, g)
            p = [period(f, j).value for j in range(3)]
        else:
            p = [closed_form_period(fam, k, j, g) for j in range(3)]
        rows.append(PeriodRow(fam, k, *p))
    return rows


@dataclass(frozen=True)
class PeriodComparison:
    family: int
    k: int
    power: int
    numeric: complex
    closed: complex
    scale: float

    @property
    def rel_diff(self) -> float:
        return abs(self.numeric - self.closed) / max(abs(self.closed), self.scale * 1e-3, 1e-300)

    @property
    def phase_ok(self) -> bool:
        """Numeric period is purely imaginary up to quadrature noise."""
        return abs(self.numeric.real) <= PERIOD_TOL * max(abs(self.numeric), self.scale)


def compare_closed_forms(g: int) -> list[PeriodComparison]:
    out = []
    for fam, k in basis_index(g):
        f = omega(fam, k, g)
        for j in range(3):
            r = period(f, j)
            out.append(PeriodComparison(fam, k, j, r.value, closed_form_period(fam, k, j, g), r.scale))
    return out


@dataclass(frozen=True)
class CohomologyReport:
    g: int
    rows: tuple[tuple[str, int, complex, complex, float], ...]
    max_rel: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel < self.tol


def cohomology_check(g: int, tol: float = PERIOD_TOL) -> CohomologyReport:
    """Periods of omega^(2), omega^(3) against their simple cohomologous representatives.

    omega_k^(2) ~ -k(g+2)/(2(g+1)) z^(k-1) w^(-k) dz and
    omega_k^(3) ~ -(g+2)(g+k+2)/(2(g+1)) z^(k-1) w^(-k-1) dz.
    """
    half = (g + 2) / (2 * (g + 1))
    rows = []
    worst = 0.0
    for fam, k in basis_index(g):
        if fam == 1:
            continue
        f = omega(fam, k, g)
        if fam == 2:
            simple = DifferentialForm("simple2", k, g, k - 1, -k)
            coef = -half * k
        else:
            simple = DifferentialForm("simple3", k, g, k - 1, -k - 1)
            coef = -half * (g + k + 2)
        a, sa = loop_integral(f.coefficient, g)
        b, sb = loop_integral(simple.coefficient, g)
        b *= coef
        rel = abs(a - b) / max(abs(a), abs(b), 1e-3 * max(sa, abs(coef) * sb), 1e-300)
        worst = max(worst, rel)
        rows.append((f"omega{fam}", k, a, b, rel))
    return CohomologyReport(g, tuple(rows), worst, tol)


# -------------------------------------------------------- linear systems


@dataclass
class SystemAssembly:
    g: int
    t: float
    mode: str
    coefficients: dict[str, dict[int, complex]]
    matrix: np.ndarray
    singular_values: np.ndarray
    dim_solution: int
    gap_ok: bool
    unused_coefficients: list[str] = field(default_factory=list)

    @property
    def nullity(self) -> int:
        return 3 + self.dim_solution


def _unknowns(g: int) -> dict[tuple[int, int], int]:
    return {fk: i for i, fk in enumerate(basis_index(g))}


def _coefficient_functionals(g: int, table: dict[tuple[int, int], PeriodRow]) -> dict[str, dict[int, complex]]:
    """f, h, p, q, d, e as linear maps of the complex unknowns (weights period/(2i))."""
    idx = _unknowns(g)
    out: dict[str, dict[int, complex]] = {}

    def put(name, fam, k, power):
        if (fam, k) in idx:
            out.setdefault(name, {})
            out[name][idx[(fam, k)]] = table[(fam, k)].as_tuple()[power] / 2j

    for k in range(0, g):
        put(f"f{k}", 1, k, 0)
        put(f"f{k}", 3, k, 0)
    for k in [0] + list(range(2, g)):
        put(f"h{k}", 1, k, 2)
        put(f"h{k}", 3, k, 2)
    for k in range(1, g + 1):
        put(f"p{k}", 2, k, 0)
    for k in [0, 1] + list(range(3, g + 1)):
        put(f"q{k}", 2, k, 2)
    for k in range(1, g):
        put(f"d{k}", 1, k, 1)
        put(f"d{k}", 3, k, 1)
    for k in [0] + list(range(2, g + 1)):
        put(f"e{k}", 2, k, 1)
    return out


def reduced_equations(g: int) -> list[tuple[str, str, str]]:
    """(left, right, kind) meaning left = -t^2 conj(right) ('t2'), left = 0 ('zero') or left = conj(right) ('conj')."""
    eqs = [("f0", "h0", "t2"), ("f1", "", "zero"), ("p1", "q1", "t2"), ("p2", "q0", "t2")]
    for k in range(2, g):
        eqs += [(f"f{k}", f"q{g - k + 2}", "t2"), (f"p{g - k + 2}", f"h{k}", "t2")]
    eqs += [("d1", "", "zero"), ("e2", "e0", "conj")]
    for k in range(2, g):
        eqs.append((f"d{k}", f"e{g - k + 2}", "conj"))
    return eqs


def _real_rows(a: np.ndarray, b: np.ndarray, real_only: bool = False) -> list[np.ndarray]:
    """Rows of Re/Im of sum a_i c_i + b_i conj(c_i) over unknowns (Re c_i, Im c_i)."""
    p, m = a + b, a - b
    re = np.empty(2 * len(a))
    re[0::2], re[1::2] = p.real, -m.imag
    if real_only:
        return [re]
    im = np.empty(2 * len(a))
    im[0::2], im[1::2] = p.imag, m.real
    return [re, im]


def _null_dimension(M: np.ndarray) -> tuple[np.ndarray, int, bool]:
    sv = np.linalg.svd(M, compute_uv=False)
    thresh = RANK_RTOL * sv[0]
    zero = sv <= thresh
    kept = sv[~zero]
    gap_ok = bool(kept.size == 0 or kept.min() >= GAP_FACTOR * thresh)
    return sv, int(M.shape[1] - kept.size), gap_ok


def assemble_system(g: int, t: float, mode: str = "reduced", numeric: bool = False,
                    table: list[PeriodRow] | None = None) -> SystemAssembly:
    """Real-linear system on the 6g real unknowns whose kernel is H(G_t).

    mode 'reduced' uses the paired coefficient equations; mode 'full' imposes
    both period conditions on every cycle lambda^l(beta~), l = 0..2g-1.
    """
    if g < 2 or not t > 0:
        raise ValueError("need g >= 2 and t > 0")
    rows_list = table if table is not None else period_table(g, numeric)
    tab = {(r.family, r.k): r for r in rows_list}
    n = 3 * g
    coeffs = _coefficient_functionals(g, tab)
    rows: list[np.ndarray] = []

    def vec(name):
        v = np.zeros(n, dtype=complex)
        for i, c in coeffs.get(name, {}).items():
            v[i] = c
        return v

    used: set[str] = set()
    if mode == "reduced":
        for left, right, kind in reduced_equations(g):
            a = vec(left)
            used.add(left)
            if kind == "zero":
                b = np.zeros(n, dtype=complex)
            else:
                used.add(right)
                factor = -t * t if kind == "t2" else 1.0
                b = -factor * np.conj(vec(right))
            rows += _real_rows(a, b)
    elif mode == "full":
        phases = {}
        for (fam, k), r in tab.items():
            base = omega(fam, k, g)
            phases[(fam, k)] = [base.times_gamma(j).lambda_phase() for j in range(3)]
        idx = _unknowns(g)
        for l in range(2 * g):
            P = [np.zeros(n, dtype=complex) for _ in range(3)]
            for key, i in idx.items():
                for j in range(3):
                    P[j][i] = phases[key][j] ** l * tab[key].as_tuple()[j]
            rows += _real_rows(P[0], -t * t * np.conj(P[2]))
            rows += _real_rows(P[1], np.zeros(n, dtype=complex), real_only=True)
        used = set(coeffs)
    else:
        raise ValueError("mode must be 'reduced' or 'full'")
    M = np.vstack(rows)
    sv, dim, gap_ok = _null_dimension(M)
    unused = sorted(set(coeffs) - used)
    return SystemAssembly(g, float(t), mode, coeffs, M, sv, dim, gap_ok, unused)


def rotation_matrix(g: int) -> np.ndarray:
    th = g * math.pi / (g + 1)
    return np.array([[math.cos(th), -math.sin(th), 0.0], [math.sin(th), math.cos(th), 0.0], [0.0, 0.0, 1.0]])


def vector_period(form: DifferentialForm, l: int) -> np.ndarray:
    """Integral of Phi(form) = ((1 - gamma^2), i(1 + gamma^2), 2 gamma) form over lambda^l(beta~)."""
    p = [loop_integral(form.times_gamma(j).coefficient, form.g, l)[0] for j in range(3)]
    return np.array([p[0] - p[2], 1j * (p[0] + p[2]), 2 * p[1]])


def rotation_check(g: int) -> float:
    """Max relative mismatch between the l = 1 vector period and c * L * (l = 0 vector period)."""
    Lm = rotation_matrix(g)
    worst = 0.0
    for fam, k in basis_index(g):
        f = omega(fam, k, g)
        c = (-1) ** k * rho(g) ** (-k + (1 if fam == 2 else 0))
        v0, v1 = vector_period(f, 0), vector_period(f, 1)
        pred = c * (Lm @ v0)
        worst = max(worst, float(np.max(np.abs(v1 - pred)) / max(np.max(np.abs(v1)), 1e-12)))
    return worst


def rank_profile(g: int, ts: np.ndarray, mode: str = "reduced") -> np.ndarray:
    """dim_solution at each t, reusing one closed-form period table."""
    table = period_table(g, numeric=False)
    return np.array([assemble_system(g, float(t), mode, table=table).dim_solution for t in ts])

