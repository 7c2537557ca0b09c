"""Derivative bounds behind the inequality t3 < t_- and their numerical certificates.

Every function of x, y or z returns a :class:`Bounded` (value and absolute error
bound, numpy-vectorised). Certificates turn pointwise grid evaluations into
statements on whole intervals by one of three routes:

* grid: the signed margin minus its error bound exceeds Lipschitz * step / 2;
* chain: the quantity vanishes exactly at the left end together with enough
  derivatives, and a higher derivative has a certified strict sign;
* derived: the claim follows from already certified claims and constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import critical
from .critical import C_LOG
from .specfun import EPS, DomainError, _polygamma, digamma, zeta

C_W = 1125.0


@dataclass(frozen=True)
class DomainBox:
    x_max: float = 2.0 / 38
    y_max: float = 3.0 / 38
    z_max: float = 1.0 / 38
    grid_step: float = 1e-5
    g_max: int = 5000  # extent of the cell-by-cell checks

    def __post_init__(self):
        if not 0 < self.grid_step <= 1e-4:
            raise ValueError("grid_step must lie in (0, 1e-4]")

    @property
    def s_max(self) -> float:
        return self.z_max

    def grid(self, upper: float) -> np.ndarray:
        n = int(math.ceil(upper / self.grid_step))
        return np.linspace(0.0, upper, n + 1)


BOX = DomainBox()


@dataclass(frozen=True)
class Certificate:
    claim_id: str
    verified: bool
    worst_margin: float
    worst_point: tuple
    error_bound: float
    method: str
    note: str = ""


# ------------------------------------------------------- bounded arithmetic


class Bounded:
    """value +- err with first-order propagation plus a rounding term per operation."""

    __slots__ = ("value", "err")

    def __init__(self, value, err):
        self.value = np.asarray(value, dtype=float)
        self.err = np.asarray(err, dtype=float)

    @staticmethod
    def _lift(other):
        return other if isinstance(other, Bounded) else Bounded(other, 0.0)

    def _round(self, value, err):
        return Bounded(value, err + EPS * np.abs(value))

    def __add__(self, other):
        o = self._lift(other)
        return self._round(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return self._round(self.value - o.value, self.err + o.err)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Bounded(-self.value, self.err)

    def __mul__(self, other):
        o = self._lift(other)
        err = np.abs(self.value) * o.err + np.abs(o.value) * self.err + self.err * o.err
        return self._round(self.value * o.value, err)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Bounded(1.0, 0.0)
        for _ in range(n):
            out = out * self
        return out

    def exp(self):
        v = np.exp(self.value)
        return self._round(v, v * np.expm1(self.err))

    def sqrt(self):
        v = np.sqrt(self.value)
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.minimum(np.where(v > 0, self.err / (2 * v), np.inf), np.sqrt(self.err))
        return self._round(v, e)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Bounded({self.value!r}, err={self.err!r})"


def _pg(order: int, arg) -> Bounded:
    r = digamma(arg) if order == 0 else _polygamma(order, arg)
    return Bounded(r.value, r.abs_err_bound)


def _in_range(v, upper: float, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if np.any(arr < -1e-15) or np.any(arr > upper * (1 + 1e-12)):
        raise DomainError(f"{name} must lie in [0, {upper}]")
    return arr


def _combo(terms, order: int, v) -> Bounded:
    """sum c * b^order * psi^(order)(a + b v) over (c, a, b) in terms."""
    out = Bounded(np.zeros_like(v), 0.0)
    for c, a, b in terms:
        out = out + c * b ** order * _pg(order, a + b * v)
    return out


_PSI_F = ((-1.0, 1.0, -1.0), (-1.0, 1.0, 1.0), (1.0, 0.5, -0.5), (1.0, 0.5, 0.5))
_PSI_I = ((1.0, 1.0, -1.0), (1.0, 1.0, 1.0), (-1.0, 1.0, -0.5), (-1.0, 1.0, 0.5))


# ---------------------------------------------------------------- Psi, R


def psi_F(x, order: int = 0) -> Bounded:
    """d^order/dx^order of Psi_F = -psi(1-x) - psi(1+x) + psi(1/2-x/2) + psi(1/2+x/2)."""
    return _combo(_PSI_F, order, _in_range(x, BOX.x_max, "x"))


def psi_I(z, order: int = 0, upper: float | None = None) -> Bounded:
    """d^order/dz^order of Psi_I = psi(1-z) + psi(1+z) - psi(1-z/2) - psi(1+z/2)."""
    return _combo(_PSI_I, order, _in_range(z, BOX.y_max if upper is None else upper, "z"))


def psi_L(y, order: int = 0) -> Bounded:
    return -_combo(_PSI_I, order, _in_range(y, BOX.y_max, "y"))


def psi_I_series(z, terms: int = 6) -> np.ndarray:
    """Even power series 2 sum_k psi^(2k)(1) (1 - 4^-k) z^2k / (2k)!, with psi^(2k)(1) = -(2k)! zeta(2k+1)."""
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    for k in range(1, terms + 1):
        out = out - 2 * zeta(2 * k + 1) * (1 - 4.0 ** -k) * z ** (2 * k)
    return out


def _F(x) -> Bounded:
    lf, ef = critical.log_F(x)
    return Bounded(lf, ef).exp()


def _I(z) -> Bounded:
    li, ei = critical.log_I(z)
    return Bounded(li, ei).exp()


def _L(y) -> Bounded:
    li, ei = critical.log_I(y)
    return Bounded(-li, ei).exp()


def R_F(x) -> Bounded:
    return _F(x) * psi_F(x)


def R_F1(x) -> Bounded:
    """F'' = F (Psi_F^2 + Psi_F')."""
    p0, p1 = psi_F(x), psi_F(x, 1)
    return _F(x) * (p0 * p0 + p1)


def R_F2(x) -> Bounded:
    """F''' = F (Psi^3 + 3 Psi Psi' + Psi'')."""
    p0, p1, p2 = (psi_F(x, j) for j in range(3))
    return _F(x) * (p0 ** 3 + 3.0 * p0 * p1 + p2)


def R_I(z) -> Bounded:
    return _I(z) * psi_I(z)


def R_I1(z) -> Bounded:
    p0, p1 = psi_I(z), psi_I(z, 1)
    return _I(z) * (p0 * p0 + p1)


def R_I11(z) -> Bounded:
    p0, p1, p2 = (psi_I(z, j) for j in range(3))
    return _I(z) * (p0 ** 3 + 3.0 * p0 * p1 + p2)


def R_L(y) -> Bounded:
    return _L(y) * psi_L(y)


def R_I2(z) -> Bounded:
    i = _I(z)
    return 2.0 * i * i * psi_I(z)


# -------------------------------------------------------------- W and Y


def _F2_derivatives(x, n: int) -> list[Bounded]:
    """[E, E', ..., E^(n)] for E = F^2, from E' = 2 Psi_F E."""
    x = _in_range(x, BOX.x_max, "x")
    f = _F(x)
    psis = [psi_F(x, j) for j in range(n)]
    E = [f * f]
    for k in range(n):
        acc = Bounded(np.zeros_like(x), 0.0)
        for j in range(k + 1):
            acc = acc + float(comb(k, j)) * psis[j] * E[k - j]
        E.append(2.0 * acc)
    return E


def W(x) -> Bounded:
    """(F^2)' = 2 F^2 Psi_F."""
    f = _F(x)
    return 2.0 * f * f * psi_F(x)


def W1(x) -> Bounded:
    f = _F(x)
    p0, p1 = psi_F(x), psi_F(x, 1)
    return f * f * (4.0 * p0 * p0 + 2.0 * p1)


def W2(x) -> Bounded:
    f = _F(x)
    p0, p1, p2 = (psi_F(x, j) for j in range(3))
    return 0.5 * f * f * (16.0 * p0 ** 3 + 24.0 * p0 * p1 + 4.0 * p2)


def W3(x) -> Bounded:
    f = _F(x)
    p0, p1, p2, p3 = (psi_F(x, j) for j in range(4))
    inner = 64.0 * p0 ** 4 + 192.0 * p0 * p0 * p1 + 48.0 * p1 * p1 + 64.0 * p0 * p2 + 8.0 * p3
    return 0.25 * f * f * inner


def W4(x) -> Bounded:
    return _F2_derivatives(x, 5)[5]


def Y(x) -> Bounded:
    return Bounded(x, 0.0) * W(x)


def Y1(x) -> Bounded:
    return W(x) + Bounded(x, 0.0) * W1(x)


def Y2(x) -> Bounded:
    return 2.0 * W1(x) + Bounded(x, 0.0) * W2(x)


def Y3(x) -> Bounded:
    return 3.0 * W2(x) + Bounded(x, 0.0) * W3(x)


def Y4(x) -> Bounded:
    return 4.0 * W3(x) + Bounded(x, 0.0) * W4(x)


def E_func(t, l: int) -> Bounded:
    """E(t, l) = 2 Y'' (1 + l^2 Y) - l^2 Y'^2; its t-derivative is 2 Y''' (1 + l^2 Y)."""
    y, y1, y2 = Y(t), Y1(t), Y2(t)
    l2 = float(l * l)
    return 2.0 * y2 * (1.0 + l2 * y) - l2 * y1 * y1


def E_func_derivative(t, l: int) -> Bounded:
    # the Y' Y'' terms cancel
    return 2.0 * Y3(t) * (1.0 + float(l * l) * Y(t))


# ---------------------------------------------------------- T1, T2, B, T


def T1(l: int, params: critical.GenusParams) -> float:
    """T1 = l/(l-1) F(x) I(z) with x = l s, z = (l-1) s."""
    _check_l(l, params)
    s = params.s
    lf, _ = critical.log_F(l * s)
    li, _ = critical.log_I((l - 1) * s)
    return l / (l - 1) * math.exp(lf + li)


def T2(l: int, params: critical.GenusParams) -> float | None:
    """sqrt(T1^2 - (l+1)/(l-1) L(y) I(z)); None when the radicand is negative."""
    _check_l(l, params)
    s = params.s
    t1 = T1(l, params)
    X = l * l / (l * l - 1) * math.exp(
        2 * critical.log_F(l * s)[0] + critical.log_I((l - 1) * s)[0] + critical.log_I((l + 1) * s)[0]
    )
    if X < 1 - critical.TIE_TOL:
        return None
    return t1 * math.sqrt(max(0.0, 1 - 1 / X))


def _check_l(l: int, params: critical.GenusParams) -> None:
    if not 2 <= l <= params.g - 1:
        raise ValueError(f"l must lie in [2, g-1], got l={l}, g={params.g}")


def D_func(s, order: int = 0) -> Bounded:
    """d^order/ds^order of -2 psi(1-2s) - 2 psi(1+2s) + 3 psi(1-s) + 3 psi(1+s)."""
    s = _in_range(s, BOX.s_max, "s")
    terms = ((-2.0, 1.0, -2.0), (-2.0, 1.0, 2.0), (3.0, 1.0, -1.0), (3.0, 1.0, 1.0))
    return _combo(terms, order, s)


def B_func(s) -> Bounded:
    """T'(s) (1 - s) / T(s) = 2 + (1-s)(D(s) - psi(3/2 - s/2) - psi(1/2 + s/2))."""
    s = _in_range(s, BOX.s_max, "s")
    inner = D_func(s) - _pg(0, 1.5 - s / 2) - _pg(0, 0.5 + s / 2)
    return 2.0 + Bounded(1 - s, EPS) * inner


def B_derivative(s) -> Bounded:
    s = _in_range(s, BOX.s_max, "s")
    inner = D_func(s) - _pg(0, 1.5 - s / 2) - _pg(0, 0.5 + s / 2)
    inner1 = D_func(s, 1) + 0.5 * _pg(1, 1.5 - s / 2) - 0.5 * _pg(1, 0.5 + s / 2)
    return -inner + Bounded(1 - s, EPS) * inner1


def T_func(s) -> Bounded:
    """T(s) = t3^2(s)."""
    s = _in_range(s, BOX.s_max, "s")
    v, rel = critical.t3_squared(s)
    return Bounded(v, v * rel)


# ------------------------------------------------------ reference constants


def reference_constants(box: DomainBox = BOX) -> dict[str, float]:
    """Decimal constants that the sign arguments rely on, evaluated from the closed forms."""
    x0, xm, zm, sm = 0.0, box.x_max, box.z_max, box.s_max
    p = {j: float(psi_F(x0, j)) for j in range(3)}
    pm = {j: float(psi_F(xm, j)) for j in range(4)}
    zgrid = box.grid(box.z_max)
    return {
        "psi_F(0)": p[0],
        "4 psi_F(0)^2": 4 * p[0] ** 2,
        "16 psi_F(0)^3": 16 * p[0] ** 3,
        "4 psi_F''(0)": 4 * p[2],
        "64 psi_F(0)^4": 64 * p[0] ** 4,
        "W(x_max)": float(W(xm)),
        "W''(0)": float(W2(x0)),
        "W'(x_max)": float(W1(xm)),
        "min R_I'": float(np.min(R_I1(zgrid).value)),
        "psi_I(z_max)^2": float(psi_I(zm)) ** 2,
        "psi_F'(x_max)": pm[1],
        "2 psi_F'(x_max)": 2 * pm[1],
        "24 psi_F psi_F'(x_max)": 24 * pm[0] * pm[1],
        "192 psi_F^2 psi_F'(x_max)": 192 * pm[0] ** 2 * pm[1],
        "8 psi_F'''(x_max)": 8 * pm[3],
        "W'' majorant": 16 * p[0] ** 3 + 24 * pm[0] * pm[1] + 4 * p[2],
        "F'' minorant": float(_F(xm)) * (p[0] ** 2 + pm[1]),
        "D(s_max)": float(D_func(sm)),
        "psi(3/2)": float(_pg(0, 1.5)),
    }


# --------------------------------------------------------------- certifiers


def _grid_certificate(claim_id, fn, grid, sign, derivative=None, lipschitz=None, threshold=0.0,
                      note="", variable="x") -> Certificate:
    """sign * (fn - threshold) > 0 on [grid[0], grid[-1]]."""
    vals = fn(grid)
    margin = sign * (vals.value - threshold)
    err = vals.err + EPS * abs(threshold)
    if lipschitz is None:
        d = derivative(grid)
        lipschitz = 1.5 * float(np.max(np.abs(d.value) + d.err))
        how = f"grid+Lipschitz(1.5*max|next derivative|={lipschitz:.4g})"
    else:
        how = f"grid+Lipschitz({lipschitz:.4g})"
    h = float(np.max(np.diff(grid)))
    slack = lipschitz * h / 2
    i = int(np.argmin(margin - err))
    return Certificate(
        claim_id, bool(margin[i] - err[i] > slack), float(margin[i]), ((variable, float(grid[i])),),
        float(err[i] + slack), how, note,
    )


def _chain_certificate(claim_id, top: Certificate, anchors, note) -> Certificate:
    """Claim follows from exact zeros at the left end and a strictly signed higher derivative."""
    return Certificate(
        claim_id, top.verified, top.worst_margin, top.worst_point, top.error_bound,
        f"chain({', '.join(anchors)}; top: {top.claim_id})", note,
    )


def _derived_certificate(claim_id, ok: bool, margin: float, point, err: float, deps, note) -> Certificate:
    return Certificate(claim_id, bool(ok and margin > err), float(margin), point, float(err),
                       f"derived({', '.join(deps)})", note)


def certify_items(box: DomainBox = BOX) -> list[Certificate]:
    """The fifteen sign and monotonicity statements on [0, x_max], [0, y_max], [0, z_max]."""
    xg, yg, zg = box.grid(box.x_max), box.grid(box.y_max), box.grid(box.z_max)
    out: list[Certificate] = []

    c01 = _grid_certificate("01_R_F_negative", R_F, xg, -1, R_F1, note="R_F(x) < 0")
    out.append(c01)

    # Psi_I, Psi_I' vanish at 0 and Psi_I'' < 0 on [0, y_max]; this drives claims 02, 03 and 08.
    psi_I_curv = _grid_certificate(
        "02a_psi_I''_negative", lambda v: psi_I(v, 2), yg, -1, lambda v: psi_I(v, 3),
        note="Psi_I'' < 0 on [0, y_max]", variable="z",
    )
    out.append(psi_I_curv)
    anchors = ("Psi_I(0)=0", "Psi_I'(0)=0", "I>0")
    out.append(_chain_certificate("02_R_I_nonpositive", psi_I_curv, anchors, "R_I(z) <= 0"))
    out.append(_chain_certificate("03_R_L_nonnegative", psi_I_curv, anchors + ("Psi_L=-Psi_I",), "R_L(y) >= 0"))

    c04 = _grid_certificate("04_R_F'_positive", R_F1, xg, +1, R_F2, note="(R_F)' = F'' > 0")
    out.append(c04)
    c04b = _grid_certificate("04b_F''_at_least_6.4", R_F1, xg, +1, R_F2, threshold=6.4, note="F'' >= 6.4")
    out.append(c04b)

    vals = R_I1(zg)
    i = int(np.argmin(vals.value))
    d = R_I11(zg)
    lip = 1.5 * float(np.max(np.abs(d.value) + d.err))
    slack = lip * float(np.max(np.diff(zg))) / 2
    n_lower = float(vals.value[i] - vals.err[i] - slack)
    n_min = float(vals.value[i])
    c05 = Certificate(
        "05_min_R_I'", bool(-0.096 <= n_lower and n_min <= -0.095), n_min, (("z", float(zg[i])),),
        float(vals.err[i] + slack), "grid minimum with Lipschitz slack",
        f"min (R_I)' = {n_min:.6f}, certified lower bound n = {n_lower:.6f}",
    )
    out.append(c05)

    # claim 06: F I >= F + (n/2) z^2 >= 1 + C x + ((m + n)/2) z^2 using F <= 1 and x >= z >= 0
    m_lower = 6.4 if c04b.verified else c04.worst_margin - c04.error_bound
    out.append(_derived_certificate(
        "06_R_FI_at_least_Cx", c01.verified and c04b.verified and c05.verified, m_lower + n_lower,
        (("m", m_lower), ("n", n_lower)), 0.0, ("01", "04b", "05"),
        "R_FI(x,z) >= C x from m + n > 0 with m = min F'', n = min I''",
    ))
    out.append(_chain_certificate(
        "07_R_LI_nonnegative", psi_I_curv, ("L increasing", "L(z) = 1/I(z)", "y > z"), "L(y) I(z) - 1 >= 0",
    ))
    out.append(_chain_certificate("08_R_I2_nonpositive", psi_I_curv, anchors, "R_I2(z) <= 0"))

    out.append(_grid_certificate("09_W_negative", W, xg, -1, W1, note="W(x) < 0"))
    out.append(_grid_certificate("10_W'_positive", W1, xg, +1, W2, note="W' > 0"))
    c12 = _grid_certificate("12_W'''_positive", W3, xg, +1, W4, note="W''' > 0")
    c12b = _grid_certificate("12b_W'''_below_C_W", W3, xg, -1, W4, threshold=C_W, note="W''' < 1125")
    out.append(_grid_certificate("11_W''_negative", W2, xg, -1, lipschitz=C_W,
                                 note="W'' < 0; Lipschitz constant C_W certified by 12, 12b"))
    out.extend([c12, c12b])
    out.append(_grid_certificate("13_Y'_negative", Y1, xg, -1, Y2, note="Y' < 0"))
    out.append(_grid_certificate("14_Y''_positive", Y2, xg, +1, Y3, note="Y'' > 0"))
    out.append(_grid_certificate("15_Y'''_negative", Y3, xg, -1, Y4, note="Y''' < 0"))
    return out


def certify_t3_bound(box: DomainBox = BOX) -> list[Certificate]:
    """1 < B(s) < 3, D increasing, and T(s) <= 1 + 7s/2 on [0, s_max]."""
    sg = box.grid(box.s_max)
    out = []
    lo = _grid_certificate("16_B_above_1", B_func, sg, +1, B_derivative, threshold=1.0, variable="s")
    hi = _grid_certificate("16b_B_below_3", B_func, sg, -1, B_derivative, threshold=3.0, variable="s")
    d2 = _grid_certificate("17a_D''_positive", lambda v: D_func(v, 2), sg, +1, lambda v: D_func(v, 3),
                           variable="s")
    out += [lo, hi, d2]
    out.append(_chain_certificate("17_D_increasing", d2, ("D'(0)=0",), "D(0) = 2 psi(1) <= D(s) <= D(s_max)"))
    # T increasing (B > 0) and B < 3 give T' <= 3 T(s_max) / (1 - s_max); T(0) = 1
    t_max = T_func(box.s_max)
    slope = 3 * float(t_max.value) / (1 - box.s_max)
    slope_err = 3 * float(t_max.err) / (1 - box.s_max) + 4 * EPS
    out.append(_derived_certificate(
        "18_T_below_1+3.5s", lo.verified and hi.verified, 3.5 - slope, (("s", box.s_max),), slope_err,
        ("16", "16b"), f"T'(s) <= 3 T(s_max)/(1 - s_max) = {slope:.6f} < 3.5",
    ))
    e0 = E_func(0.0, 2)
    out.append(Certificate(
        "19_E(0,2)_zero", bool(abs(float(e0.value)) <= float(e0.err) + 1e-12), -abs(float(e0.value)),
        (("t", 0.0), ("l", 2)), float(e0.err), "exact value", "E(0,l) = 16 C^2 - 4 l^2 C^2",
    ))
    return out


def certify_cells(box: DomainBox = BOX, g_min: int = 38, workers: int | None = None) -> list[Certificate]:
    """Cell-by-cell checks over every (l, g), g_min <= g <= g_max, where t_- is real.

    Claims: T1 >= l/(l-1) (1 + C x), T2 <= (1 + C l^2 x)/(l-1), t_-^2 >= 1 - C l x,
    the sandwich 1 + 3.5 s < 1 - C l x, and t3(s)^2 < t_-^2 with certified margin.
    """
    names = ("20_T1_lower", "21_T2_upper", "22_t_minus_lower", "23_sandwich", "24_t3_below_t_minus")
    worst = {k: (math.inf, None, 0.0) for k in names}
    ok = {k: True for k in names}
    cells = 0
    for blk in critical.iter_scan(g_min, box.g_max, roots_only=True, workers=workers, extra=True):
        if len(blk["l"]) == 0:
            continue
        cells += len(blk["l"])
        l = blk["l"].astype(float)
        s = 1.0 / (blk["g"][0] + 1)
        x = l * s
        checks = {
            "20_T1_lower": (blk["T1"] - l / (l - 1) * (1 + C_LOG * x), blk["T1_err"]),
            "21_T2_upper": ((1 + C_LOG * l * l * x) / (l - 1) - blk["T2"], blk["T2_err"]),
            "22_t_minus_lower": (blk["t_minus"] ** 2 - (1 - C_LOG * l * x), blk["u_minus_err"]),
            "23_sandwich": ((1 - C_LOG * l * x) - (1 + 3.5 * s), np.zeros_like(x)),
            "24_t3_below_t_minus": (blk["margin"], blk["margin_err"]),
        }
        for k, (m, e) in checks.items():
            e = e + 8 * EPS * (1 + np.abs(m))
            i = int(np.argmin(m - e))
            if m[i] - e[i] <= 0:
                ok[k] = False
            if m[i] < worst[k][0]:
                worst[k] = (float(m[i]), (("g", int(blk["g"][i])), ("l", int(blk["l"][i]))), float(e[i]))
    out = []
    for k in names:
        m, pt, e = worst[k]
        out.append(Certificate(k, ok[k] and cells > 0, m, pt or (), e, "cell-by-cell with error bounds",
                               f"{cells} cells with real roots, g in [{g_min}, {box.g_max}]"))
    return out


def certify_all(box: DomainBox = BOX, workers: int | None = None) -> list[Certificate]:
    """Every certificate, ordered by claim_id."""
    certs = certify_items(box) + certify_t3_bound(box) + certify_cells(box, workers=workers)
    return sorted(certs, key=lambda c: c.claim_id)
