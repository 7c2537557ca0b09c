"""Log-gamma, digamma and polygamma on the positive real axis with error bounds.

Every routine accepts a scalar or a numpy array and returns an :class:`EvalResult`
whose ``abs_err_bound``/``rel_err_bound`` are conservative a-priori bounds:
the first neglected term of the asymptotic (or Taylor) series plus a rounding
allowance proportional to the magnitude of the summed terms.

Strategy: push the argument above a threshold with the recurrence, then use
the asymptotic expansion. ``ln_gamma`` additionally switches to its Taylor
series around 1 and 2 so that relative accuracy survives near the two zeros.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

EPS = np.finfo(float).eps
EULER_GAMMA = 0.57721566490153286061
LN_2PI_HALF = 0.5 * math.log(2.0 * math.pi)

_LNG_SHIFT = 8.0
_LNG_TERMS = 8
_PSI_SHIFT = 10.0
_PSI_TERMS = 8
_TAYLOR_RADIUS = 0.3
_TAYLOR_TERMS = 40
MAX_POLYGAMMA_ORDER = 8


class DomainError(ValueError):
    """Argument outside the domain where the function is defined or supported."""


@dataclass(frozen=True)
class EvalResult:
    value: float | np.ndarray
    rel_err_bound: float | np.ndarray
    abs_err_bound: float | np.ndarray

    def __float__(self) -> float:
        return float(self.value)


@lru_cache(maxsize=None)
def bernoulli_even(count: int) -> tuple[Fraction, ...]:
    """Exact B_2, B_4, ..., B_{2*count} (Akiyama-Tanigawa)."""
    n_max = 2 * count
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _finish(value, abs_err, scalar: bool) -> EvalResult:
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(value != 0, abs_err / np.abs(value), np.where(abs_err == 0, 0.0, np.inf))
    if scalar:
        return EvalResult(float(value[0]), float(rel[0]), float(abs_err[0]))
    return EvalResult(value, rel, abs_err)


def _require_positive(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} requires finite x > 0")


# --------------------------------------------------------------------- zeta


def _hurwitz_scalar(s: int, x: float) -> tuple[float, float]:
    """zeta(s, x) for integer s >= 2 and x > 0 by direct sum plus Euler-Maclaurin tail."""
    y0 = max(12.0, 3.0 * s)
    head = 0.0
    while x < y0:
        head += x ** (-s)
        x += 1.0
    tail, trunc, mag = _hurwitz_tail(s, np.array([x]))
    value = head + float(tail[0])
    err = float(trunc[0]) + 4.0 * (y0 + 12) * EPS * (head + float(mag[0]))
    return value, err


def _hurwitz_tail(s: int, y: np.ndarray, terms: int = 10):
    """Asymptotic zeta(s, y) = y^(1-s)/(s-1) + y^-s/2 + sum B_2k/(2k)! (s)_{2k-1} y^(-s-2k+1)."""
    bern = bernoulli_even(terms + 1)
    total = y ** (1 - s) / (s - 1) + 0.5 * y ** (-s)
    mag = np.abs(total)
    poch = float(s)  # (s)_1
    fact = 2.0  # (2k)! for k=1
    for k in range(1, terms + 1):
        term = float(bern[k - 1]) / fact * poch * y ** (-s - 2 * k + 1)
        total = total + term
        mag = mag + np.abs(term)
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    trunc = 2.0 * abs(float(bern[terms])) / fact * poch * y ** (-s - 2 * terms - 1)
    return total, trunc, mag


@lru_cache(maxsize=None)
def zeta(s: int) -> float:
    """Riemann zeta at an integer s >= 2."""
    if int(s) != s or s < 2:
        raise DomainError("zeta is provided for integer s >= 2 only")
    return _hurwitz_scalar(int(s), 1.0)[0]


@lru_cache(maxsize=None)
def _zeta_table(n: int) -> tuple[float, ...]:
    return tuple(zeta(k) for k in range(2, n + 2))


def hurwitz_zeta(s: int, x) -> EvalResult:
    """zeta(s, x) for integer s >= 2, x > 0 (vectorised)."""
    arr, scalar = _as_array(x)
    _require_positive(arr, "hurwitz_zeta")
    if int(s) != s or s < 2:
        raise DomainError("hurwitz_zeta needs integer s >= 2")
    s = int(s)
    y0 = max(12.0, 3.0 * s)
    y = arr.copy()
    head = np.zeros_like(arr)
    for _ in range(int(math.ceil(y0))):
        low = y < y0
        if not low.any():
            break
        head = head + np.where(low, np.where(low, y, 1.0) ** (-s), 0.0)
        y = np.where(low, y + 1.0, y)
    tail, trunc, mag = _hurwitz_tail(s, y)
    value = head + tail
    err = trunc + 4.0 * (y0 + 12) * EPS * (head + mag)
    return _finish(value, err, scalar)


# ---------------------------------------------------------------- log gamma


def _lngamma_taylor(eps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """ln Gamma(1 + eps) = -gamma*eps + sum_{k>=2} (-1)^k zeta(k) eps^k / k."""
    zt = _zeta_table(_TAYLOR_TERMS)
    coeffs = [-EULER_GAMMA] + [(-1) ** k * zt[k - 2] / k for k in range(2, _TAYLOR_TERMS + 1)]
    acc = np.zeros_like(eps)
    mag = np.zeros_like(eps)
    ae = np.abs(eps)
    for c in reversed(coeffs):
        acc = (acc + c) * eps
        mag = (mag + abs(c)) * ae
    n = _TAYLOR_TERMS
    trunc = 1.1 * ae ** (n + 1) / ((n + 1) * (1.0 - ae))
    return acc, trunc + 2.0 * (n + 4) * EPS * mag


def _lngamma_stirling(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    bern = bernoulli_even(_LNG_TERMS + 1)
    ly = np.log(y)
    main = (y - 0.5) * ly - y + LN_2PI_HALF
    mag = np.abs((y - 0.5) * ly) + y + LN_2PI_HALF
    inv = 1.0 / y
    inv2 = inv * inv
    series = np.zeros_like(y)
    p = inv.copy()
    for k in range(1, _LNG_TERMS + 1):
        series = series + float(bern[k - 1]) / (2 * k * (2 * k - 1)) * p
        p = p * inv2
    K = _LNG_TERMS + 1
    trunc = abs(float(bern[K - 1])) / (2 * K * (2 * K - 1)) * p
    return main + series, trunc + 6.0 * EPS * (mag + np.abs(series))


def ln_gamma(x) -> EvalResult:
    """ln Gamma(x) for real x > 0."""
    arr, scalar = _as_array(x)
    _require_positive(arr, "ln_gamma")
    value = np.empty_like(arr)
    err = np.empty_like(arr)

    near1 = np.abs(arr - 1.0) <= _TAYLOR_RADIUS
    near2 = np.abs(arr - 2.0) <= _TAYLOR_RADIUS
    rest = ~(near1 | near2)

    if near1.any():
        v, e = _lngamma_taylor(arr[near1] - 1.0)
        value[near1], err[near1] = v, e
    if near2.any():
        eps = arr[near2] - 2.0
        v, e = _lngamma_taylor(eps)
        lp = np.log1p(eps)
        value[near2] = lp + v
        err[near2] = e + 2.0 * EPS * (np.abs(lp) + np.abs(v))
    if rest.any():
        xr = arr[rest]
        steps = np.maximum(np.ceil(_LNG_SHIFT - xr), 0.0)
        prod = np.ones_like(xr)
        for j in range(int(steps.max()) if steps.size else 0):
            prod = prod * np.where(j < steps, xr + j, 1.0)
        st, e = _lngamma_stirling(xr + steps)
        lp = np.log(prod)
        value[rest] = st - lp
        # product of <= 8 factors: relative error (steps + 1) eps, i.e. absolute error in its log
        err[rest] = e + (steps + 2.0) * EPS + 2.0 * EPS * (np.abs(lp) + np.abs(st))
    return _finish(value, err, scalar)


def gamma_ratio(p, q) -> EvalResult:
    """Gamma(p)/Gamma(q) evaluated as exp(lnGamma(p) - lnGamma(q))."""
    a = ln_gamma(p)
    b = ln_gamma(q)
    diff = np.asarray(a.value) - np.asarray(b.value)
    value = np.exp(diff)
    d_err = np.asarray(a.abs_err_bound) + np.asarray(b.abs_err_bound) + EPS * np.abs(diff)
    rel = np.expm1(d_err) + 2 * EPS
    if np.ndim(value) == 0:
        return EvalResult(float(value), float(rel), float(rel * value))
    return EvalResult(value, rel, rel * value)


# ------------------------------------------------------------------ digamma


def digamma(x) -> EvalResult:
    """psi(x) = d/dx ln Gamma(x) for real x > 0."""
    arr, scalar = _as_array(x)
    _require_positive(arr, "digamma")
    steps = np.maximum(np.ceil(_PSI_SHIFT - arr), 0.0)
    head = np.zeros_like(arr)
    for j in range(int(steps.max()) if steps.size else 0):
        head = head + np.where(j < steps, 1.0 / (arr + j), 0.0)
    y = arr + steps
    bern = bernoulli_even(_PSI_TERMS + 1)
    inv2 = 1.0 / (y * y)
    ly = np.log(y)
    series = ly - 0.5 / y
    p = inv2.copy()
    for k in range(1, _PSI_TERMS + 1):
        series = series - float(bern[k - 1]) / (2 * k) * p
        p = p * inv2
    K = _PSI_TERMS + 1
    trunc = abs(float(bern[K - 1])) / (2 * K) * p
    value = series - head
    err = trunc + (2.0 * _PSI_SHIFT + 8.0) * EPS * (np.abs(ly) + 0.5 / y + head)
    return _finish(value, err, scalar)


def polygamma(n: int, x) -> EvalResult:
    """psi^(n)(x) = (-1)^(n+1) n! zeta(n+1, x) for 1 <= n <= 8, x > 0."""
    if int(n) != n or not 1 <= n <= MAX_POLYGAMMA_ORDER:
        raise DomainError(f"polygamma order must be an integer in [1, {MAX_POLYGAMMA_ORDER}]")
    return _polygamma(int(n), x)


def _polygamma(n: int, x) -> EvalResult:
    hz = hurwitz_zeta(n + 1, x)
    scale = (-1) ** (n + 1) * math.factorial(n)
    value = scale * np.asarray(hz.value)
    err = abs(scale) * np.asarray(hz.abs_err_bound)
    rel = np.asarray(hz.rel_err_bound) + EPS
    if np.ndim(value) == 0:
        return EvalResult(float(value), float(rel), float(err))
    return EvalResult(value, rel, err)


def psi_n(n: int, x) -> np.ndarray:
    """Bare value of psi^(n) (n = 0 is digamma); convenience for closed-form expressions."""
    if n == 0:
        return digamma(x).value
    return polygamma(n, x).value


def psi_n_err(n: int, x) -> np.ndarray:
    if n == 0:
        return digamma(x).abs_err_bound
    return polygamma(n, x).abs_err_bound


ZETA3 = zeta(3)
