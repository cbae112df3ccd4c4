"""Generic local-series machinery at regular singular points.

For an ODE u'' + p(z) u' + q(z) u = 0 with rational coefficients, the local
solution at a regular singular point s with exponent rho is

    u(z) = (z - s)^rho * sum_n a_n (z - s)^n,      a_0 = 1,

with coefficients from the standard recurrence driven by the Taylor series of
A(t) = (z-s) p(z) and B(t) = (z-s)^2 q(z) in t = z - s.  To keep every stored
quantity bounded for arbitrarily small or large convergence radii, the series
is held in the contracted variable u = t / scale with scale = 0.9 * radius:
``coeffs[n]`` is a_n * scale^n.  Evaluation therefore never forms large powers.

Entirety of a solution across a chain of singular points is accepted exactly
when the pairwise Wronskians of consecutive local solutions vanish at a point
of each overlap of their convergence discs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _poly
from .errors import DomainError, NoConvergence, ResonantExponents
from .model import OdeSpec

#: Evaluation stays inside this fraction of the guaranteed convergence radius.
SAFETY = 0.9

#: A recurrence denominator smaller than this is treated as an exact resonance.
RESONANCE_TOL = 1e-10


@dataclass(frozen=True)
class FrobeniusSolution:
    """One local Frobenius solution.

    ``coeffs[n]`` stores a_n * scale^n (a_0 = 1); ``radius`` is the guaranteed
    convergence radius min_j |s - s_j| and ``scale`` the contraction used for
    storage/evaluation (0.9 * radius for engine-built solutions).
    """

    center: float
    rho: float
    coeffs: np.ndarray
    radius: float
    scale: float
    last_term: float

    @property
    def n_terms(self):
        return len(self.coeffs)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class OverlapRegion:
    """Real slice of the intersection of two consecutive convergence discs."""

    index: int
    lo: float
    hi: float

    @property
    def empty(self):
        return not self.hi > self.lo

    def midpoint(self):
        if self.empty:
            raise DomainError(f"overlap region {self.index} is empty")
        return 0.5 * (self.lo + self.hi)


def _scaled_pole_series(num, den, s, pole_order, scale, n):
    """Taylor coefficients (in u = t/scale) of t^pole_order * num(z)/den(z) at s.

    Only the short shifted polynomials are scaled explicitly, so no large
    powers of ``scale`` are ever formed.
    """
    ns = _poly.polyshift(num, s)
    ds = _poly.polyshift(den, s)
    # t^pole_order * ns(t): shift the coefficient array up
    ns_full = np.concatenate([np.zeros(pole_order), ns])
    m = _poly.trailing_zero_order(ds)
    if _poly.trailing_zero_order(ns_full) < m:
        raise DomainError(f"irregular singular point at {s!r}")
    ns_c = ns_full[m:]
    ds_c = ds[m:]
    # rescale: coefficient of u^k picks up scale^k (short arrays only)
    ns_c = ns_c * scale ** np.arange(len(ns_c))
    ds_c = ds_c * scale ** np.arange(len(ds_c))
    return _poly.series_divide(ns_c, ds_c, n)


def _pq_constant_terms(ode: OdeSpec, s):
    p0 = _scaled_pole_series(ode.p_num, ode.p_den, s, 1, 1.0, 1)[0]
    q0 = _scaled_pole_series(ode.q_num, ode.q_den, s, 2, 1.0, 1)[0]
    return p0, q0


def indicial_exponents(ode: OdeSpec, s):
    """Roots (rho, sigma) of r(r-1) + P0 r + Q0 = 0, ordered rho >= sigma."""
    if s not in ode.singular_points:
        raise DomainError(f"{s!r} is not a declared singular point of this ODE")
    p0, q0 = _pq_constant_terms(ode, s)
    b = p0 - 1.0
    disc = b * b - 4.0 * q0
    if disc < 0.0:
        raise DomainError(f"complex indicial exponents at {s!r} are not supported")
    root = math.sqrt(disc)
    r1 = 0.5 * (-b + root)
    r2 = 0.5 * (-b - root)
    return (r1, r2) if r1 >= r2 else (r2, r1)


def local_series(ode: OdeSpec, s, rho, tol=1e-15, n_max=5000) -> FrobeniusSolution:
    """Frobenius series at singular point s with exponent rho.

    Truncates once 5 consecutive terms at the evaluation radius 0.9*r fall
    below ``tol`` relative to the running partial-sum magnitude.  Raises
    ResonantExponents when a recurrence denominator vanishes (integer exponent
    difference) and NoConvergence past ``n_max`` terms.
    """
    if s not in ode.singular_points:
        raise DomainError(f"{s!r} is not a declared singular point of this ODE")
    radius = ode.radius(s)
    scale = SAFETY * radius if math.isfinite(radius) else 1.0
    P = _scaled_pole_series(ode.p_num, ode.p_den, s, 1, scale, n_max + 1)
    Q = _scaled_pole_series(ode.q_num, ode.q_den, s, 2, scale, n_max + 1)
    p0, q0 = P[0], Q[0]

    def indicial(r):
        return r * (r - 1.0) + p0 * r + q0

    b = np.zeros(n_max + 1)
    b[0] = 1.0
    partial = 1.0
    partial_max = 1.0
    ok_run = 0
    n_used = None
    for n in range(1, n_max + 1):
        den = indicial(rho + n)
        k = np.arange(1, n + 1)
        w = P[1 : n + 1] * (rho + n - k) + Q[1 : n + 1]
        rhs = -float(np.dot(w, b[n - 1 :: -1]))
        if abs(den) < RESONANCE_TOL:
            # 0/0 keeps a holomorphic branch (coefficient chosen 0); a genuine
            # resonance (nonzero right-hand side) has no power-series solution
            if abs(rhs) <= RESONANCE_TOL * max(1.0, partial_max):
                b[n] = 0.0
            else:
                raise ResonantExponents(
                    f"resonant recurrence at order {n} (exponent {rho!r} at s={s!r})"
                )
        else:
            b[n] = rhs / den
        partial += b[n]
        partial_max = max(partial_max, abs(partial))
        if abs(b[n]) <= tol * partial_max:
            ok_run += 1
            if ok_run >= 5 and n >= 8:
                n_used = n
                break
        else:
            ok_run = 0
    if n_used is None:
        raise NoConvergence(
            f"series at s={s!r} did not settle within {n_max} terms"
        )
    return FrobeniusSolution(
        center=float(s),
        rho=float(rho),
        coeffs=b[: n_used + 1],
        radius=radius,
        scale=scale,
        last_term=abs(b[n_used]),
    )


def _horner(coeffs, u):
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * u + c
    return acc


def evaluate(sol: FrobeniusSolution, z, order=0):
    """Value (order=0) or first derivative (order=1) of the local solution.

    The point must satisfy |z - center| <= 0.9 * radius.
    """
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    t = z - sol.center
    if abs(t) > SAFETY * sol.radius * (1.0 + 1e-12):
        raise DomainError(
            f"|z - {sol.center!r}| = {abs(t):.6g} outside the safe disc "
            f"{SAFETY * sol.radius:.6g}"
        )
    rho = sol.rho
    rho_int = abs(rho - round(rho)) < 1e-12
    if t == 0.0:
        if order == 0:
            return 1.0 if rho == 0.0 else 0.0
        if rho == 0.0:
            return sol.coeffs[1] / sol.scale if sol.n_terms > 1 else 0.0
        if rho == 1.0:
            return 1.0
        if rho > 1.0:
            return 0.0
        raise DomainError(f"derivative diverges at the center for exponent {rho!r}")
    if t < 0.0 and not rho_int:
        raise DomainError(
            f"negative offset {t!r} with non-integer exponent {rho!r} has no real branch"
        )
    u = t / sol.scale
    if order == 0:
        return t**rho * _horner(sol.coeffs, u)
    n = np.arange(sol.n_terms)
    return t ** (rho - 1.0) * _horner(sol.coeffs * (rho + n), u)


def tail_bound(sol: FrobeniusSolution, z, order=0):
    """Crude geometric estimate of the truncation error at z (not a certificate)."""
    t = z - sol.center
    q = abs(t) / sol.radius
    if q >= 1.0:
        return math.inf
    n_last = sol.n_terms - 1
    m = abs(sol.coeffs[-1]) * (abs(t) / sol.scale) ** n_last
    if order == 1:
        m *= (abs(sol.rho) + n_last + 1.0) / max(abs(t), 1e-300)
    if abs(t) > 0 or sol.rho == 0:
        m *= abs(t) ** sol.rho if t != 0.0 else 1.0
    return m * q / (1.0 - q)


def overlap_regions(ode: OdeSpec):
    """Real overlaps U_i of consecutive convergence discs, i = 1..m-1."""
    pts = ode.singular_points
    if len(pts) < 2:
        raise DomainError("need at least two singular points")
    radii = [ode.radius(s) for s in pts]
    out = []
    for i in range(len(pts) - 1):
        lo = max(pts[i] - radii[i], pts[i + 1] - radii[i + 1])
        hi = min(pts[i] + radii[i], pts[i + 1] + radii[i + 1])
        out.append(OverlapRegion(index=i, lo=lo, hi=hi))
    return out


def pairwise_wronskian(sol_a: FrobeniusSolution, sol_b: FrobeniusSolution, z_star):
    """W = u_a(z*) u_b'(z*) - u_a'(z*) u_b(z*)."""
    return evaluate(sol_a, z_star, 0) * evaluate(sol_b, z_star, 1) - evaluate(
        sol_a, z_star, 1
    ) * evaluate(sol_b, z_star, 0)


def integrate_simpson(f, a, b, tol=1e-10, max_depth=40):
    """Adaptive Simpson quadrature of f on [a, b]."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def abel_products(ode: OdeSpec, sol_a, sol_b, zs, z0=None, tol=1e-11):
    """W(z) * exp(int_{z0}^{z} p) at each z; constant for true solution pairs."""
    zs = list(zs)
    if z0 is None:
        z0 = zs[0]
    out = []
    for z in zs:
        w = pairwise_wronskian(sol_a, sol_b, z)
        integral = integrate_simpson(ode.p, z0, z, tol=tol) if z != z0 else 0.0
        out.append(w * math.exp(integral))
    return np.array(out)


def series_residual(ode: OdeSpec, sol: FrobeniusSolution):
    """Relative residual coefficients of the truncated series in the ODE.

    Substituting the truncation into t^2 u'' + A(t) t u' + B(t) u leaves
    residual coefficients r_m; returns |r_m| normalized by the magnitude of the
    contributing terms, for m = 0 .. n_terms-1 (zero to rounding by
    construction of the recurrence).
    """
    n = sol.n_terms
    P = _scaled_pole_series(ode.p_num, ode.p_den, sol.center, 1, sol.scale, n + 1)
    Q = _scaled_pole_series(ode.q_num, ode.q_den, sol.center, 2, sol.scale, n + 1)
    rho = sol.rho
    out = np.zeros(n)
    for m in range(n):
        k = np.arange(0, m + 1)
        w = P[: m + 1] * (rho + m - k) + Q[: m + 1]
        terms = w * sol.coeffs[m::-1]
        r = (rho + m) * (rho + m - 1.0) * sol.coeffs[m] + float(np.sum(terms))
        scale = abs((rho + m) * (rho + m - 1.0) * sol.coeffs[m]) + float(
            np.sum(np.abs(terms))
        )
        out[m] = abs(r) / max(scale, 1e-300)
    return out
