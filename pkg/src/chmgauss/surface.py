"""The compact surface w^(g+1) = z^g (z^2 - 1), its symmetries and meromorphic 1-forms."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

RELATION_TOL = 1e-10


class ContinuationError(RuntimeError):
    """Branch tracking could not resolve the sheets along a path."""


class ResidueError(RuntimeError):
    """Contour residue did not converge or the two radii disagree."""


def rho(g: int) -> complex:
    return cmath.exp(1j * math.pi * g / (g + 1))


def branch_value(z, g: int):
    return z ** g * (z * z - 1)


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    w: complex
    g: int

    def __post_init__(self):
        lhs = complex(self.w) ** (self.g + 1)
        rhs = complex(branch_value(complex(self.z), self.g))
        scale = max(abs(lhs), abs(rhs))
        if scale > 0 and abs(lhs - rhs) > RELATION_TOL * scale:
            raise ValueError(f"({self.z}, {self.w}) is not on the genus-{self.g} surface")


def w_branches(z: complex, g: int) -> list[complex]:
    """All g+1 solutions w, ordered by principal argument (ties by modulus)."""
    c = complex(branch_value(complex(z), g))
    if c == 0:
        return [0j] * (g + 1)
    r = abs(c) ** (1.0 / (g + 1))
    base = cmath.phase(c) / (g + 1)
    roots = [r * cmath.exp(1j * (base + 2 * math.pi * m / (g + 1))) for m in range(g + 1)]
    return sorted(roots, key=lambda w: (round(cmath.phase(w), 14), abs(w)))


def sym_lambda(p: SurfacePoint) -> SurfacePoint:
    """(z, w) -> (-z, rho w), the order-(2g+2) generator."""
    return SurfacePoint(-p.z, rho(p.g) * p.w, p.g)


def sym_kappa(p: SurfacePoint) -> SurfacePoint:
    return SurfacePoint(complex(p.z).conjugate(), complex(p.w).conjugate(), p.g)


# ------------------------------------------------------------ continuation


@dataclass(frozen=True)
class Continuation:
    z: np.ndarray
    w: np.ndarray
    g: int
    deck_power: int  # w_end = w_start * exp(2 pi i deck_power/(g+1)) when the path is closed
    closed: bool

    @property
    def deck_factor(self) -> complex:
        return cmath.exp(2j * math.pi * self.deck_power / (self.g + 1))


def _unwrapped_log(v: np.ndarray) -> np.ndarray:
    return np.log(np.abs(v)) + 1j * np.unwrap(np.angle(v))


def _track(zs: np.ndarray, w_start: complex, g: int) -> np.ndarray:
    """Continue w along sampled z by unwrapping log z and log(z^2 - 1)."""
    if np.any(zs == 0) or np.any(zs * zs == 1):
        raise ContinuationError("path passes through a branch point z in {0, 1, -1}")
    lz = _unwrapped_log(zs)
    lq = _unwrapped_log(zs * zs - 1)
    jumps = np.concatenate((np.abs(np.diff(lz.imag)), np.abs(np.diff(lq.imag))))
    if jumps.size and jumps.max() > math.pi / 4:
        raise ContinuationError("path sampling too coarse for branch tracking")
    d = (g * (lz - lz[0]) + (lq - lq[0])) / (g + 1)
    return w_start * np.exp(d)


def continue_w(path: Callable[[np.ndarray], np.ndarray] | np.ndarray, w_start: complex, g: int,
               samples: int = 256, max_samples: int = 1 << 20) -> Continuation:
    """Track the branch of w along a z-path starting at w_start.

    ``path`` is either an array of z samples or a callable on parameters in [0, 1];
    callables are resampled more finely until consecutive w values are closer
    than half the gap between neighbouring sheets.
    """
    refine = callable(path)
    n = samples
    while True:
        zs = np.asarray(path(np.linspace(0.0, 1.0, n + 1)) if refine else path, dtype=complex)
        if abs(complex(w_start) ** (g + 1) - complex(branch_value(zs[0], g))) > RELATION_TOL * max(
            1.0, abs(complex(w_start)) ** (g + 1)
        ):
            raise ValueError("w_start is not a branch over the path start")
        try:
            ws = _track(zs, complex(w_start), g)
            gap = np.abs(ws) * abs(1 - cmath.exp(2j * math.pi / (g + 1)))
            ok = np.all(np.abs(np.diff(ws)) < 0.5 * np.minimum(gap[:-1], gap[1:]))
        except ContinuationError:
            if not refine:
                raise
            ok = False
        if ok:
            break
        if not refine or n >= max_samples:
            raise ContinuationError("branch gap below sampling resolution")
        n *= 2
    closed = abs(zs[-1] - zs[0]) <= 1e-12 * max(1.0, abs(zs[0]))
    turns = (g * np.unwrap(np.angle(zs))[-1] - g * np.angle(zs[0])
             + np.unwrap(np.angle(zs * zs - 1))[-1] - np.angle(zs[0] ** 2 - 1)) / (2 * math.pi)
    deck = int(round(turns)) % (g + 1) if closed else 0
    return Continuation(zs, ws, g, deck, bool(closed))


# --------------------------------------------------------- marked points


@dataclass(frozen=True)
class RamificationSet:
    g: int
    Q0: SurfacePoint
    P_plus: SurfacePoint
    P_minus: SurfacePoint
    P_inf: str
    P: tuple[SurfacePoint, ...]
    S: tuple[SurfacePoint, ...]

    def __len__(self) -> int:
        return 4 + len(self.P) + len(self.S)

    def point(self, label: str) -> SurfacePoint:
        if label in ("Q0", "P_plus", "P_minus"):
            return getattr(self, label)
        if label[0] in "PS" and label[1:].isdigit():
            return (self.P if label[0] == "P" else self.S)[int(label[1:])]
        raise KeyError(label)


def _root_sequence(c: float, g: int) -> tuple[complex, ...]:
    principal = complex(c) ** (1.0 / (g + 1))
    return tuple(principal * cmath.exp(2j * math.pi * m / (g + 1)) for m in range(g + 1))


def ramification_set(g: int) -> RamificationSet:
    """Q0, P_plus, P_minus, P_inf and P_m = (A, B_m), S_m = (-A, C_m), m = 0..g.

    B_m is the principal (g+1)-th root of A^g (A^2 - 1) times exp(2 pi i m/(g+1)); C_m likewise.
    """
    A = math.sqrt(g / (g + 2))
    B = _root_sequence(A ** g * (A * A - 1), g)
    C = _root_sequence((-A) ** g * (A * A - 1), g)
    return RamificationSet(
        g, SurfacePoint(0, 0, g), SurfacePoint(1, 0, g), SurfacePoint(-1, 0, g), "P_inf",
        tuple(SurfacePoint(A, b, g) for b in B), tuple(SurfacePoint(-A, c, g) for c in C),
    )


# ----------------------------------------------------------- 1-forms


@dataclass(frozen=True)
class DifferentialForm:
    """z^z_power w^w_power N(z^2) (z^2 - A^2)^(-pole_order) dz, N given by coefficients in z^2."""

    family: str
    k: int
    g: int
    z_power: int
    w_power: int
    numerator: tuple[float, ...] = (1.0,)
    pole_order: int = 0

    @property
    def A(self) -> float:
        return math.sqrt(self.g / (self.g + 2))

    def coefficient(self, z, w):
        """Value of the form against dz at (z, w); vectorised."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        z2 = z * z
        num = np.zeros_like(z)
        for c in reversed(self.numerator):
            num = num * z2 + c
        return z ** self.z_power * w ** self.w_power * num / (z2 - self.A ** 2) ** self.pole_order

    def __call__(self, p: SurfacePoint) -> complex:
        return complex(self.coefficient(p.z, p.w))

    def times_gamma(self, power: int) -> "DifferentialForm":
        """gamma^power * form, gamma(z, w) = w."""
        return DifferentialForm(self.family, self.k, self.g, self.z_power, self.w_power + power,
                                self.numerator, self.pole_order)

    def lambda_phase(self) -> complex:
        """c with lambda^* form = c * form (lambda(z, w) = (-z, rho w), dz -> -dz)."""
        return (-1) ** (self.z_power + 1) * rho(self.g) ** self.w_power


def candidate_forms(g: int) -> list[DifferentialForm]:
    """The 5g+1 forms spanning the differentials sigma/dw before the residue selection."""
    if g < 2:
        raise ValueError("g >= 2 required")
    out = []
    for k in range(-1, g):
        out.append(DifferentialForm("candidate-1", k, g, 1 - k, k, pole_order=2))
    for k in range(-1, g):
        out.append(DifferentialForm("candidate-2", k, g, -k, k, pole_order=2))
    for k in range(-1, g):
        out.append(DifferentialForm("candidate-3", k, g, -k - 1, k, pole_order=1))
    for k in range(1, g):
        out.append(DifferentialForm("candidate-4", k, g, k, -k - 1, pole_order=1))
    for k in range(1, g):
        out.append(DifferentialForm("candidate-5", k, g, k - 1, -k - 1, pole_order=1))
    return out


def omega(family: int, k: int, g: int) -> DifferentialForm:
    """Basis form omega_k^(family)."""
    A2 = g / (g + 2)
    if family == 1:
        if not 1 <= k <= g - 1:
            raise ValueError("omega^(1) needs 1 <= k <= g-1")
        return DifferentialForm("omega1", k, g, k - 1, -k - 1)
    num = (-k * A2, float(k - 2))  # (k-2) z^2 - k A^2
    if family == 2:
        if not 0 <= k <= g:
            raise ValueError("omega^(2) needs 0 <= k <= g")
        return DifferentialForm("omega2", k, g, k - 1, -k, num, 2)
    if family == 3:
        if not 0 <= k <= g - 1:
            raise ValueError("omega^(3) needs 0 <= k <= g-1")
        return DifferentialForm("omega3", k, g, k - 1, -k - 1, num, 2)
    raise ValueError("family must be 1, 2 or 3")


def basis_index(g: int) -> list[tuple[int, int]]:
    return ([(1, k) for k in range(1, g)] + [(2, k) for k in range(0, g + 1)]
            + [(3, k) for k in range(0, g)])


def basis_forms(g: int) -> list[DifferentialForm]:
    """The 3g forms with vanishing residues at the ramification points of gamma."""
    if g < 2:
        raise ValueError("g >= 2 required")
    return [omega(f, k, g) for f, k in basis_index(g)]


# ------------------------------------------------ quadratic differentials


def admissible_type1(j: int, k: int, g: int) -> bool:
    """z^k w^j (dz/w)^2 has divisor + 2K + R >= 0."""
    return k * (g + 1) + j * g >= -1 and j >= -2 * (g - 1) and -k * (g + 1) - j * (g + 2) >= -1


def admissible_type2(j: int, k: int, g: int) -> bool:
    """z^k w^j (dz/w)^2 lies in H^0 of the auxiliary divisor used for the 1/(z +- A) forms."""
    return k * (g + 1) + j * g >= -1 and j >= -2 * (g - 1) and -k * (g + 1) - j * (g + 2) >= -(g + 2)


def quadratic_differentials(g: int) -> list[tuple[str, int, int]]:
    """(label, j, k) for the 5g+1 quadratic differentials z^k w^j [eta] (dz/w)^2."""
    out = [("q1", j, -j) for j in range(-g + 1, 2)]
    out += [("q2", j, -j) for j in range(2 - 2 * g, -g + 1)]
    out += [("q3", j, -j - 1) for j in range(2 - 2 * g, -g + 1)]
    for eta in ("eta1", "eta2"):
        out += [(eta, j, -j + 1) for j in range(-g + 1, 2)]
    return out


def divisor_degree(g: int) -> int:
    """deg(2K + R) with K = (g-1)(P_+ + P_-) and R = Q0 + P_inf + sum (P_m + S_m)."""
    canonical = 2 * (g - 1)
    ramification = 2 + 2 * (g + 1)
    return 2 * canonical + ramification


def riemann_roch_dimension(g: int) -> int:
    """l(D) = deg D - g + 1, valid since deg D > 2g - 2."""
    d = divisor_degree(g)
    if d <= 2 * g - 2:
        raise ValueError("degree too small for the simplified Riemann-Roch count")
    return d - g + 1


# ------------------------------------------------------------- residues


@dataclass(frozen=True)
class Residue:
    value: complex
    error: float
    radii: tuple[float, float]
    values: tuple[complex, complex]


def _center_data(label: str, g: int) -> tuple[complex, complex, int, float]:
    """(z centre, w at centre, number of z-turns to close, radius)."""
    A = math.sqrt(g / (g + 2))
    if label == "Q0":
        return 0j, 0j, g + 1, min(A, 1.0) / 4
    if label in ("P_plus", "P_minus"):
        return (1.0 if label == "P_plus" else -1.0), 0j, g + 1, min(1 - A, 1.0) / 4
    pt = ramification_set(g).point(label)
    return complex(pt.z), complex(pt.w), 1, min(1 - A, A) / 4


def _circle_integral(form: DifferentialForm, zc: complex, wc: complex, turns: int, r: float,
                     n: int) -> complex:
    theta = np.linspace(0.0, 2 * math.pi * turns, n * turns, endpoint=False)
    zs = zc + r * np.exp(1j * theta)
    if wc == 0:
        w0 = w_branches(zs[0], form.g)[0]
    else:
        w0 = min(w_branches(zs[0], form.g), key=lambda w: abs(w - wc))
    ws = continue_w(np.append(zs, zs[0]), w0, form.g).w[:-1]
    dz = 1j * r * np.exp(1j * theta)
    return complex(np.sum(form.coefficient(zs, ws) * dz) * (2 * math.pi / n) / (2j * math.pi))


def _converged_circle(form, zc, wc, turns, r, tol) -> complex:
    n = 64
    prev = _circle_integral(form, zc, wc, turns, r, n)
    while n < 1 << 15:
        n *= 2
        cur = _circle_integral(form, zc, wc, turns, r, n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise ResidueError(f"circle quadrature did not converge for {form.family} k={form.k}")


def residue_at(form: DifferentialForm, center: str, tol: float = 1e-10) -> Residue:
    """Residue of form at a ramification point by branch-tracked contour quadrature.

    The contour is a z-circle around the point, run as many times as the local
    sheet count so that it closes on the surface; radii r and r/2 must agree.
    """
    zc, wc, turns, r = _center_data(center, form.g)
    a = _converged_circle(form, zc, wc, turns, r, tol * 1e-3)
    b = _converged_circle(form, zc, wc, turns, r / 2, tol * 1e-3)
    err = abs(a - b)
    if err > tol * max(1.0, abs(a)):
        raise ResidueError(f"radii disagree at {center}: {a} vs {b}")
    return Residue(b, err, (r, r / 2), (a, b))
