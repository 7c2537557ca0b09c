"""Critical deformation parameters of the Costa-Hoffman-Meeks Gauss map.

Everything here is a closed-form Gamma expression. Gamma ratios are formed as
differences of log-Gamma values so that products of near-unit ratios keep
their relative accuracy for large genus.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .specfun import EPS, DomainError, ln_gamma

DEFAULT_TOL = 1e-9
TIE_TOL = 1e-12
SMALL_GENUS_MAX = 37
C_LOG = -4.0 * math.log(2.0)


class OutOfValidity(ValueError):
    """The requested quantity is not determined for these parameters."""


class IndeterminateNullity(ValueError):
    def __init__(self, status: "NullityStatus"):
        super().__init__(f"nullity not determined at t={status.t!r}: {status.matched}")
        self.status = status


@dataclass(frozen=True)
class GenusParams:
    g: int

    def __post_init__(self):
        if int(self.g) != self.g or self.g < 1:
            raise ValueError("genus must be an integer >= 1")

    @property
    def s(self) -> float:
        return 1.0 / (self.g + 1)

    @property
    def A(self) -> float:
        return math.sqrt(self.g / (self.g + 2))

    @property
    def l_range(self) -> range:
        return range(2, self.g)

    def require_surface_genus(self) -> None:
        if self.g < 2:
            raise ValueError("the deformation family G_t is only set up here for g >= 2")


def _log_gamma_quotient(num, den) -> tuple[float, float]:
    """log(prod Gamma(num) / prod Gamma(den)) with an absolute error bound."""
    args = list(num) + list(den)
    if any(a <= 0 for a in args):
        raise DomainError(f"non-positive Gamma argument in {args}")
    total = 0.0
    err = 0.0
    for a in num:
        r = ln_gamma(a)
        total += r.value
        err += r.abs_err_bound
    for a in den:
        r = ln_gamma(a)
        total -= r.value
        err += r.abs_err_bound
    return total, err + EPS * (len(args) + abs(total))


def _bounded(prefactor: float, num, den) -> tuple[float, float]:
    lg, err = _log_gamma_quotient(num, den)
    return prefactor * math.exp(lg), math.expm1(err) + 3 * EPS


# ----------------------------------------------------------- period constants


def I_const(m: int, g: int) -> tuple[float, float]:
    """(I_m, relative error bound)."""
    if m == 0:
        raise ZeroDivisionError("I_0 is undefined (prefactor (g+1)/m)")
    n = 2 * (g + 1)
    return _bounded((g + 1) / m, [1 + m / n, 1 - m / (g + 1)], [1 - m / n])


def J_const(m: int, g: int) -> tuple[float, float]:
    if g - m + 2 == 0:
        raise ZeroDivisionError("J_{g+2} is undefined (prefactor (g+1)/(g-m+2))")
    n = 2 * (g + 1)
    return _bounded(
        (g + 1) / (g - m + 2),
        [0.5 + (m - 1) / n, 1 - (m - 1) / (g + 1)],
        [0.5 - (m - 1) / n],
    )


def K_const(m: int, g: int) -> tuple[float, float]:
    return J_const(m + 2, g)


def L_const(m: int, g: int) -> tuple[float, float]:
    if m == 2:
        return 0.0, 0.0
    if 2 * g - m + 4 == 0:
        raise ZeroDivisionError("L_{2g+4} is undefined")
    i, e = I_const(m - 2, g)
    return (m - 2) / (2 * g - m + 4) * i, e + EPS


@dataclass(frozen=True)
class PeriodConstants:
    m: int
    g: int
    I: float | None
    J: float | None
    K: float | None
    L: float | None
    rel_err: dict = field(default_factory=dict, compare=False)


def period_constants(m: int, params: GenusParams) -> PeriodConstants:
    """I_m, J_m, K_m, L_m for one index; entries that are undefined at this m are None.

    Only I_0 (division by m) and J_{g+2} can be undefined inside the index
    ranges used by the linear systems; a non-positive Gamma argument raises.
    """
    g = params.g
    values, errs = {}, {}
    for name, fn in (("I", I_const), ("J", J_const), ("K", K_const), ("L", L_const)):
        try:
            values[name], errs[name] = fn(m, g)
        except ZeroDivisionError:
            values[name] = None
    return PeriodConstants(m, g, values["I"], values["J"], values["K"], values["L"], errs)


# -------------------------------------------------------------- F, I, L


def _check_v(v, limit: float = 1.0):
    arr = np.asarray(v, dtype=float)
    if np.any(np.abs(arr) >= limit):
        raise DomainError(f"F/I/L need |v| < {limit:g}")
    return arr


def log_F(v):
    """(log F(v), abs error) with F(v) = (G(1/2+v/2)/G(1/2-v/2))^2 G(1-v)/G(1+v)."""
    v = _check_v(v)
    a, b = ln_gamma(0.5 + v / 2), ln_gamma(0.5 - v / 2)
    c, d = ln_gamma(1 - v), ln_gamma(1 + v)
    val = 2 * (a.value - b.value) + c.value - d.value
    err = 2 * (a.abs_err_bound + b.abs_err_bound) + c.abs_err_bound + d.abs_err_bound
    return val, err + 4 * EPS * np.abs(val)


def log_I(v):
    """(log I(v), abs error) with I(v) = (G(1-v/2)/G(1+v/2))^2 G(1+v)/G(1-v)."""
    v = _check_v(v)
    a, b = ln_gamma(1 - v / 2), ln_gamma(1 + v / 2)
    c, d = ln_gamma(1 + v), ln_gamma(1 - v)
    val = 2 * (a.value - b.value) + c.value - d.value
    err = 2 * (a.abs_err_bound + b.abs_err_bound) + c.abs_err_bound + d.abs_err_bound
    return val, err + 4 * EPS * np.abs(val)


# log_F/log_I are defined on |v| < 1, which the genus sweep needs; the public
# evaluators keep to |v| < 1/2, the range of the derivative bounds.


def F_func(v):
    return np.exp(log_F(_check_v(v, 0.5))[0])


def I_func(v):
    return np.exp(log_I(_check_v(v, 0.5))[0])


def L_func(v):
    """L(v) = (G(1+v/2)/G(1-v/2))^2 G(1-v)/G(1+v), the reciprocal of I(v)."""
    return np.exp(-log_I(_check_v(v, 0.5))[0])


# ------------------------------------------------------- critical values


@dataclass(frozen=True)
class CriticalValues:
    g: int
    t1: float
    t2: float
    t3: float
    rel_err: tuple[float, float, float]


def _log_t_closed(s: float) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    lg = lambda x: ln_gamma(x)  # noqa: E731
    r = {x: lg(x) for x in (1 - s, 1 + s, 1 - s / 2, 1 + s / 2, 1 - 2 * s, 1 + 2 * s, 1.5 - s / 2, 0.5 + s / 2)}
    v = {k: x.value for k, x in r.items()}
    e = {k: x.abs_err_bound for k, x in r.items()}
    # t1^2 = K0/J0 rewritten with the duplication formula
    log_t1 = (
        0.5 * math.log((1 + s) / (1 - s)) - 2 * s * math.log(2.0)
        + 0.5 * (v[1 + s] - v[1 - s]) + v[1 - s / 2] - v[1 + s / 2]
    )
    err_t1 = 0.5 * (e[1 + s] + e[1 - s]) + e[1 - s / 2] + e[1 + s / 2]
    log_t2 = 0.5 * (v[1 - s] - v[1 + s]) + v[1 + s / 2] - v[1 - s / 2]
    err_t2 = 0.5 * (e[1 - s] + e[1 + s]) + e[1 + s / 2] + e[1 - s / 2]
    log_t3 = (
        math.log(2 / (1 - s)) + 1.5 * (v[1 + s] - v[1 - s]) + 0.5 * (v[1 - 2 * s] - v[1 + 2 * s])
        + v[1.5 - s / 2] - v[0.5 + s / 2]
    )
    err_t3 = 1.5 * (e[1 + s] + e[1 - s]) + 0.5 * (e[1 - 2 * s] + e[1 + 2 * s]) + e[1.5 - s / 2] + e[0.5 + s / 2]
    return (log_t1, log_t2, log_t3), (err_t1, err_t2, err_t3)


def t3_squared(s) -> tuple[np.ndarray, np.ndarray]:
    """(t3^2(s), relative error bound); vectorised in s."""
    s = np.asarray(s, dtype=float)
    lg = ln_gamma
    terms = [(1.5, lg(1 + s)), (-1.5, lg(1 - s)), (0.5, lg(1 - 2 * s)), (-0.5, lg(1 + 2 * s)),
             (1.0, lg(1.5 - s / 2)), (-1.0, lg(0.5 + s / 2))]
    log_t = np.log(2 / (1 - s)) + sum(c * r.value for c, r in terms)
    err = sum(abs(c) * r.abs_err_bound for c, r in terms) + 8 * EPS
    return np.exp(2 * log_t), np.expm1(2 * err) + 4 * EPS


def critical_values(params: GenusParams) -> CriticalValues:
    """t1 < t2 < t3, the three parameters solving the base system for every g >= 2.

    The closed forms are cross-checked against the constant ratios
    t1^2 = K0/J0, t2^2 = I1/((2g+3) L1), t3^2 = I2 J0/(g L0 K0).
    """
    params.require_surface_genus()
    g, s = params.g, params.s
    logs, errs = _log_t_closed(s)
    t1, t2, t3 = (math.exp(x) for x in logs)
    rel = tuple(math.expm1(e) + 4 * EPS for e in errs)

    K0, J0, I1, L1 = K_const(0, g)[0], J_const(0, g)[0], I_const(1, g)[0], L_const(1, g)[0]
    I2, L0 = I_const(2, g)[0], L_const(0, g)[0]
    ratio = (math.sqrt(K0 / J0), math.sqrt(I1 / ((2 * g + 3) * L1)), math.sqrt(I2 * J0 / (g * L0 * K0)))
    for name, closed, direct in zip(("t1", "t2", "t3"), (t1, t2, t3), ratio):
        if abs(closed - direct) > 1e-10 * abs(direct):
            raise RuntimeError(f"{name}: closed form {closed!r} disagrees with ratio form {direct!r}")
    if not t3 > t2:
        raise RuntimeError(f"t3 > t2 violated at g={g}")
    return CriticalValues(g, t1, t2, t3, rel)


# ------------------------------------------------------------ the quartic


@dataclass(frozen=True)
class QuarticInstance:
    g: int
    l: int
    a: float
    b: float
    c: float
    X: float
    X_direct: float
    X_rel_err: float
    T1: float
    roots: tuple[float, ...]  # () or (t_minus, t_plus)

    @property
    def has_roots(self) -> bool:
        return bool(self.roots)

    @property
    def t_minus(self) -> float | None:
        return self.roots[0] if self.roots else None

    @property
    def t_plus(self) -> float | None:
        return self.roots[1] if self.roots else None


def solve_t_squared(a: float, b: float, c: float, X: float | None = None) -> tuple[float, ...]:
    """Positive t with a t^4 + b t^2 + c = 0 (a, c > 0, b < 0); () when the discriminant is negative.

    X = b^2/(4ac) may be passed in when a more accurate value is available.
    """
    if X is None:
        X = b * b / (4 * a * c)
    if X < 1 - TIE_TOL:
        return ()
    if X - 1 < TIE_TOL:
        u = -b / (2 * a)
        return (math.sqrt(u), math.sqrt(u))
    disc = (-b) * math.sqrt(1 - 1 / X)  # sqrt(b^2 - 4ac) without forming the difference
    u_plus = (-b + disc) / (2 * a)
    u_minus = c / (a * u_plus)
    return (math.sqrt(u_minus), math.sqrt(u_plus))


def quartic_instance(l: int, params: GenusParams) -> QuarticInstance:
    """Coefficients of a t^4 + b t^2 + c for the (l, g) block of the extended system."""
    g = params.g
    if not 2 <= l <= g - 1:
        raise ValueError(f"l must lie in [2, g-1], got l={l}, g={g}")
    m = g - l + 1
    Im, eIm = I_const(m, g)
    Jm, eJm = J_const(m, g)
    Km, eKm = K_const(m, g)
    Jl, eJl = J_const(l + 1, g)
    Il, eIl = I_const(l + 1, g)
    Ll, eLl = L_const(l + 1, g)
    a = (2 * g - l + 3) * Im * Jm * Ll
    b = -2 * (g - l + 1) * Jl * Jm * Km
    c = (l + 1) * Im * Il * Km
    if not (a > 0 and c > 0 and b < 0):
        raise RuntimeError(f"unexpected coefficient signs at (l={l}, g={g}): {a}, {b}, {c}")
    X_direct = b * b / (4 * a * c)

    s = params.s
    lf, ef = log_F(l * s)
    lz, ez = log_I((l - 1) * s)
    ly, ey = log_I((l + 1) * s)
    X = l * l / (l * l - 1) * math.exp(2 * lf + lz + ly)
    X_err = math.expm1(2 * ef + ez + ey) + 6 * EPS
    if abs(X - X_direct) > 1e-9 * X:
        raise RuntimeError(f"X routes disagree at (l={l}, g={g}): {X} vs {X_direct}")
    T1 = l / (l - 1) * math.exp(lf + lz)
    return QuarticInstance(g, l, a, b, c, X, X_direct, X_err, T1, solve_t_squared(a, b, c, X))


def _log_constants(g: int, m: np.ndarray, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (log value, abs err) of I_m or J_m over an index array."""
    n = 2 * (g + 1)
    m = np.asarray(m, dtype=float)
    if kind == "I":
        pre, num, den = (g + 1) / m, [1 + m / n, 1 - m / (g + 1)], [1 - m / n]
    else:
        pre, num, den = (g + 1) / (g - m + 2), [0.5 + (m - 1) / n, 1 - (m - 1) / (g + 1)], [0.5 - (m - 1) / n]
    val = np.log(pre)
    err = np.zeros_like(m)
    for sign, args in ((1, num), (-1, den)):
        for a in args:
            r = ln_gamma(a)
            val = val + sign * r.value
            err = err + r.abs_err_bound
    return val, err + EPS * (3 + np.abs(val))


def quartic_coefficients(g: int) -> dict[str, np.ndarray]:
    """a, b, c and X = b^2/(4ac) for every l in [2, g-1], straight from the period constants.

    This is the constant-level route; discriminant_table reaches X through F and I instead.
    """
    l = np.arange(2, g, dtype=float)
    m = g - l + 1
    lIm, eIm = _log_constants(g, m, "I")
    lJm, eJm = _log_constants(g, m, "J")
    lKm, eKm = _log_constants(g, m + 2, "J")
    lJl, eJl = _log_constants(g, l + 1, "J")
    lIl, eIl = _log_constants(g, l + 1, "I")
    lI2, eI2 = _log_constants(g, l - 1, "I")  # L_{l+1} = (l-1)/(2g-l+3) I_{l-1}
    lLl = np.log((l - 1) / (2 * g - l + 3)) + lI2
    log_a = np.log(2 * g - l + 3) + lIm + lJm + lLl
    log_b = np.log(2 * (g - l + 1)) + lJl + lJm + lKm
    log_c = np.log(l + 1) + lIm + lIl + lKm
    log_X = 2 * log_b - np.log(4.0) - log_a - log_c
    err = 2 * (eJl + eJm + eKm) + (eIm + eJm + eI2) + (eIm + eIl + eKm) + 8 * EPS * (1 + np.abs(log_X))
    return {"l": l.astype(int), "a": np.exp(log_a), "b": -np.exp(log_b), "c": np.exp(log_c),
            "X": np.exp(log_X), "X_rel_err": np.expm1(err)}


# -------------------------------------------------- vectorised genus sweep


@dataclass(frozen=True)
class ScanRow:
    g: int
    l: int
    X: float
    has_roots: bool
    t_minus: float
    t_plus: float
    t3: float
    margin: float


def _lattice_logs(g: int):
    """log F(n s), log I(n s) for n = 0..g from one lnGamma table on the lattice j/(2(g+1))."""
    N = g + 1
    lat = ln_gamma(np.arange(1, 4 * N + 1) / (2.0 * N))
    G = np.concatenate(([np.nan], lat.value))
    E = np.concatenate(([np.nan], lat.abs_err_bound))
    n = np.arange(g + 1)
    two = 2 * N
    lF = 2 * (G[N + n] - G[N - n]) + G[two - 2 * n] - G[two + 2 * n]
    eF = 2 * (E[N + n] + E[N - n]) + E[two - 2 * n] + E[two + 2 * n]
    lI = 2 * (G[two - n] - G[two + n]) + G[two + 2 * n] - G[two - 2 * n]
    eI = 2 * (E[two - n] + E[two + n]) + E[two + 2 * n] + E[two - 2 * n]
    return lF, eF + 4 * EPS * np.abs(lF), lI, eI + 4 * EPS * np.abs(lI)


def discriminant_table(g: int) -> dict[str, np.ndarray]:
    """All l in [2, g-1] at once: X, roots u = t^2 and the margin t_-^2 - t3^2 with error bounds."""
    s = 1.0 / (g + 1)
    lF, eF, lI, eI = _lattice_logs(g)
    l = np.arange(2, g, dtype=float)
    li = l.astype(int)
    logX = np.log(l * l / (l * l - 1)) + 2 * lF[li] + lI[li - 1] + lI[li + 1]
    X = np.exp(logX)
    X_err = np.expm1(2 * eF[li] + eI[li - 1] + eI[li + 1]) + 6 * EPS
    T1 = l / (l - 1) * np.exp(lF[li] + lI[li - 1])
    eT1 = np.expm1(eF[li] + eI[li - 1]) + 4 * EPS
    P = (l + 1) / (l - 1) * np.exp(lI[li - 1] - lI[li + 1])  # c/a = t_-^2 t_+^2
    eP = np.expm1(eI[li - 1] + eI[li + 1]) + 4 * EPS

    has = X >= 1 - TIE_TOL
    q = np.where(has, np.clip(1 - 1 / X, 0.0, None), 0.0)
    dq = X_err / np.maximum(X, 1e-300) + 2 * EPS
    root_q = np.sqrt(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        d_root = np.minimum(np.where(root_q > 0, dq / (2 * root_q), np.inf), np.sqrt(dq))
    u_plus = T1 * (1 + root_q)
    du_plus = u_plus * eT1 + T1 * d_root
    u_minus = P / u_plus
    du_minus = u_minus * (eP + du_plus / u_plus + 2 * EPS)

    t3sq, e3 = t3_squared(s)
    t3sq = float(t3sq)
    margin = u_minus - t3sq
    margin_err = du_minus + t3sq * float(e3) + EPS * np.abs(margin)
    nan = np.full_like(X, np.nan)
    return {
        "g": np.full(l.shape, g, dtype=int),
        "l": li,
        "x": l * s,
        "X": X,
        "X_err": X * X_err,
        "has_roots": has,
        "T1": T1,
        "T1_err": T1 * eT1,
        "P": P,
        "u_minus": np.where(has, u_minus, nan),
        "u_minus_err": np.where(has, du_minus, nan),
        "u_plus": np.where(has, u_plus, nan),
        "T2": np.where(has, T1 * root_q, nan),
        "T2_err": np.where(has, T1 * d_root + T1 * root_q * eT1, nan),
        "t3": math.sqrt(t3sq),
        "t3_sq": t3sq,
        "t3_sq_err": t3sq * float(e3),
        "margin": np.where(has, margin, nan),
        "margin_err": np.where(has, margin_err, nan),
    }


SCAN_COLUMNS = ("g", "l", "X", "X_err", "has_roots", "t_minus", "t_plus", "t3", "margin", "margin_err")
EXTRA_COLUMNS = ("T1", "T1_err", "T2", "T2_err", "u_minus_err")


def genus_block(g: int, roots_only: bool = False, extra: bool = False) -> dict[str, np.ndarray]:
    """Scan columns for one genus, optionally restricted to cells with real roots."""
    tab = discriminant_table(g)
    cols = {
        "g": tab["g"], "l": tab["l"], "X": tab["X"], "X_err": tab["X_err"],
        "has_roots": tab["has_roots"],
        "t_minus": np.sqrt(tab["u_minus"]), "t_plus": np.sqrt(tab["u_plus"]),
        "t3": np.full(tab["l"].shape, tab["t3"]),
        "margin": tab["margin"], "margin_err": tab["margin_err"],
    }
    if extra:
        cols.update({k: tab[k] for k in EXTRA_COLUMNS})
    if roots_only:
        keep = tab["has_roots"]
        cols = {k: v[keep] for k, v in cols.items()}
    return cols


def _block_all(g):
    return genus_block(g, False)


def _block_roots(g):
    return genus_block(g, True)


def _block_roots_extra(g):
    return genus_block(g, True, True)


def _block_all_extra(g):
    return genus_block(g, False, True)


def worker_count() -> int:
    env = os.environ.get("CHM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_genera(fn, genera, workers: int | None = None):
    """Apply fn over genera, in parallel when allowed; results come back in input order."""
    genera = list(genera)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(genera) < 8:
        return [fn(g) for g in genera]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, genera, chunksize=max(1, len(genera) // (4 * workers))))


def iter_scan(g_min: int, g_max: int, roots_only: bool = False, workers: int | None = None,
              extra: bool = False):
    """Yield per-genus column blocks in increasing g; memory stays bounded by one batch."""
    if not 2 <= g_min <= g_max:
        raise ValueError("need 2 <= g_min <= g_max")
    fn = {(False, False): _block_all, (True, False): _block_roots,
          (True, True): _block_roots_extra, (False, True): _block_all_extra}[(roots_only, extra)]
    batch = 256
    for lo in range(g_min, g_max + 1, batch):
        yield from map_genera(fn, range(lo, min(lo + batch, g_max + 1)), workers)


@dataclass
class ScanTable:
    columns: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.columns["g"])

    def rows(self):
        c = self.columns
        for i in range(len(self)):
            yield ScanRow(int(c["g"][i]), int(c["l"][i]), float(c["X"][i]), bool(c["has_roots"][i]),
                          float(c["t_minus"][i]), float(c["t_plus"][i]), float(c["t3"][i]), float(c["margin"][i]))

    def root_rows(self) -> "ScanTable":
        keep = self.columns["has_roots"]
        return ScanTable({k: v[keep] for k, v in self.columns.items()})


def scan(g_min: int, g_max: int, roots_only: bool = False, workers: int | None = None) -> ScanTable:
    """Columns (g, l, X, has_roots, t_minus, t_plus, t3, margin, ...) for all (l, g), sorted by (g, l).

    Without ``roots_only`` the table has about g_max^2/2 rows; prefer iter_scan for large ranges.
    """
    blocks = list(iter_scan(g_min, g_max, roots_only, workers))
    if not blocks:
        return ScanTable({k: np.zeros(0) for k in SCAN_COLUMNS})
    return ScanTable({k: np.concatenate([b[k] for b in blocks]) for k in SCAN_COLUMNS})


# ------------------------------------------------------- nullity and index


@dataclass(frozen=True)
class NullityStatus:
    g: int
    t: float | None
    value: int | None
    lower_bound: int
    matched: str | None

    @property
    def determinate(self) -> bool:
        return self.value is not None


def _near(t: float, ref: float, tol: float) -> bool:
    return abs(t - ref) <= tol * ref


def nullity_status(params: GenusParams, t: float | None = None, tol: float = DEFAULT_TOL) -> NullityStatus:
    """Nul(G_t), flagged as undetermined where it is not known.

    ``t=None`` means the Gauss map of the surface itself: t = t2 for g >= 2 and
    the Costa surface (g = 1), whose nullity 4 is taken as known.
    """
    g = params.g
    if g == 1:
        if t is not None:
            raise ValueError("for g = 1 only the Costa surface itself (t=None) is supported")
        return NullityStatus(1, None, 4, 4, "costa")
    cv = critical_values(params)
    if t is None:
        t = cv.t2
    if not t > 0:
        raise ValueError("t must be positive")
    if _near(t, cv.t1, tol):
        return NullityStatus(g, t, 4, 4, "t1")
    if _near(t, cv.t2, tol):
        return NullityStatus(g, t, 4, 4, "t2")
    if _near(t, cv.t3, tol):
        return NullityStatus(g, t, 5, 5, "t3")
    if g > SMALL_GENUS_MAX and t > cv.t3:
        tab = discriminant_table(g)
        for i in np.nonzero(tab["has_roots"])[0]:
            for label, u in (("t_minus", tab["u_minus"][i]), ("t_plus", tab["u_plus"][i])):
                if _near(t, math.sqrt(u), tol):
                    return NullityStatus(g, t, None, 4, f"{label}(l={int(tab['l'][i])})")
    return NullityStatus(g, t, 3, 3, None)


def nullity(params: GenusParams, t: float | None = None, tol: float = DEFAULT_TOL) -> int:
    status = nullity_status(params, t, tol)
    if status.value is None:
        raise IndeterminateNullity(status)
    return status.value


def index(params: GenusParams, t: float | None = None, tol: float = DEFAULT_TOL) -> int:
    """Ind(G_t) from the three-branch table; valid for all t when g <= 37 and t <= t3 beyond."""
    g = params.g
    if g == 1:
        if t is not None:
            raise ValueError("for g = 1 only the Costa surface itself (t=None) is supported")
        return 5
    cv = critical_values(params)
    if t is None:
        t = cv.t2
    if not t > 0:
        raise ValueError("t must be positive")
    if _near(t, cv.t3, tol):
        return 2 * g + 2
    if t > cv.t3:
        if g > SMALL_GENUS_MAX:
            raise OutOfValidity(f"index for g={g} is only known for t <= t3 = {cv.t3}")
        return 2 * g + 3
    if _near(t, cv.t1, tol) or _near(t, cv.t2, tol) or t < cv.t1 or t > cv.t2:
        return 2 * g + 3
    return 2 * g + 4
