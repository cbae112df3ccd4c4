"""Parity-resolved matching functions G_+ / G_- of the symmetric model (eps = 0).

Both wavefunction components are expanded about the left singular point in the
shifted coordinate y = z + lam:

    phi_1(y) = sum_n T_n y^n,   phi_2(y) = sum_n P_n y^n,
    T_n = mu P_n / (x - n),
    2 lam (n+1) P_{n+1} = [n - x + 4 lam^2 + mu^2/(x - n)] P_n - 2 lam P_{n-1},

normalized to P_0 = 1.  The components are reconstructed as
psi_i(z) = e^{-lam z} phi_i(z + lam) (a constant overall factor is dropped;
it cannot move zeros), and the parity-sigma matching function is

    G_sigma(z) = psi_2(-z) - sigma psi_1(z).

For a spectral parameter x, G_sigma vanishes identically in z exactly when x
is an eigenvalue of parity sigma.  A zero of G_sigma at a single z is NOT
sufficient: isolated (spurious) zeros exist.  Membership requires the two
conditions G_sigma(z*) = 0 and G'_sigma(z*) = 0 at any one z*, which
``classify_zero`` tests (with the spectral-determinant value as a cross-check).

G_sigma obeys a second-order linear ODE obtained by eliminating the second
component from the coupled system (both psi_2(-z) and psi_1(z) solve it):

    (z^2 - lam^2) g'' + [z(1 - 2x) - lam] g'
        + [lam z (1 - lam z) + (x - lam^2)^2 - lam^2 - mu^2] g = 0,

which ``g_ode_residual`` verifies against the series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NoConvergence, PoleProximity
from .model import EXCLUSION_DELTA, ModelParams, exclusion_segments

_STOP_TOL = 1e-15
_N_MAX = 5000


def _dist_nonneg_int(x):
    """Distance to the nearest non-negative integer."""
    if x < 0.0:
        return abs(x)
    return abs(x - round(x))


@dataclass(frozen=True)
class PhiCoefficients:
    """Stored expansion coefficients of both components (P_0 = 1)."""

    x: float
    lam: float
    mu: float
    phi: np.ndarray        # second component: P_0 .. P_N
    phi_tilde: np.ndarray  # first component:  T_0 .. T_N

    @property
    def n_terms(self):
        return len(self.phi)

    def __post_init__(self):
        for name in ("phi", "phi_tilde"):
            c = np.asarray(getattr(self, name), dtype=float)
            c.flags.writeable = False
            object.__setattr__(self, name, c)


def phi_coefficients(x, lam, mu, n_terms) -> PhiCoefficients:
    """Coefficient sequences up to order ``n_terms`` (inclusive).

    Requires lam != 0 and x at least EXCLUSION_DELTA away from every
    non-negative integer (the linkage denominators x - n).
    """
    if lam == 0.0:
        raise DomainError("lam = 0 has no series construction; use the oracle")
    if _dist_nonneg_int(x) < EXCLUSION_DELTA:
        raise PoleProximity(
            f"x = {x:.12g} is within {EXCLUSION_DELTA:g} of a non-negative integer"
        )
    phi = np.zeros(n_terms + 1)
    phi[0] = 1.0
    for n in range(n_terms):
        prev = phi[n - 1] if n >= 1 else 0.0
        fac = n - x + 4.0 * lam * lam + mu * mu / (x - n)
        phi[n + 1] = (fac * phi[n] - 2.0 * lam * prev) / (2.0 * lam * (n + 1))
    phi_tilde = mu * phi / (x - np.arange(n_terms + 1))
    return PhiCoefficients(x=x, lam=lam, mu=mu, phi=phi, phi_tilde=phi_tilde)


def _phi_sums(x, lam, mu, z, n_deriv=1, tol=_STOP_TOL, n_max=_N_MAX):
    """Series sums of both components at the two reflected arguments.

    ``x`` may be an array; excluded entries must be NaN (they propagate).
    Returns (s2, s1, n_used) where s2[d] = sum_n n(n-1)..  P_n (lam-z)^{n-d}
    derivatives d = 0..n_deriv of phi_2 at lam - z, and s1 likewise for phi_1
    at lam + z.  Terms are accumulated directly (never large powers alone), so
    the recurrence stays bounded for any 0 < |z| < |lam| wedge.
    """
    x = np.asarray(x, dtype=float)
    t2 = lam - z
    t1 = lam + z
    two_lam = 2.0 * lam
    u_prev = np.zeros(x.shape)
    u_cur = np.ones(x.shape)   # P_n t2^n
    v_prev = np.zeros(x.shape)
    v_cur = np.ones(x.shape)   # P_n t1^n
    s2 = [np.ones(x.shape), np.zeros(x.shape), np.zeros(x.shape)][: n_deriv + 1]
    w0 = mu / x
    s1 = [w0.copy(), np.zeros(x.shape), np.zeros(x.shape)][: n_deriv + 1]
    level = np.maximum(1.0, np.abs(w0))
    ok_run = 0
    with np.errstate(invalid="ignore"):
        for n in range(n_max):
            fac = n - x + 4.0 * lam * lam + mu * mu / (x - n)
            m = n + 1.0
            u_next = (fac * u_cur * t2 - two_lam * u_prev * t2 * t2) / (two_lam * m)
            v_next = (fac * v_cur * t1 - two_lam * v_prev * t1 * t1) / (two_lam * m)
            w_next = mu * v_next / (x - m)
            s2[0] += u_next
            s1[0] += w_next
            if n_deriv >= 1:
                s2[1] += m * u_next / t2
                s1[1] += m * w_next / t1
            if n_deriv >= 2:
                s2[2] += m * (m - 1.0) * u_next / (t2 * t2)
                s1[2] += m * (m - 1.0) * w_next / (t1 * t1)
            np.maximum(level, np.abs(s2[0]), out=level)
            np.maximum(level, np.abs(s1[0]), out=level)
            worst = np.nanmax(
                (1.0 + m + m * m) * np.maximum(np.abs(u_next), np.abs(w_next)) / level
            )
            if np.isnan(worst):
                return [np.full(x.shape, np.nan) for _ in s2], [
                    np.full(x.shape, np.nan) for _ in s1
                ], n + 1
            if worst <= tol:
                ok_run += 1
                if ok_run >= 5 and n >= 8:
                    return s2, s1, n + 1
            else:
                ok_run = 0
            u_prev, u_cur = u_cur, u_next
            v_prev, v_cur = v_cur, v_next
    raise NoConvergence(f"component series did not settle within {n_max} terms")


def _check_z(z, lam, margin=0.0):
    if not abs(z) < abs(lam) - margin:
        raise DomainError(
            f"z = {z!r} outside the series window (-|lam|, |lam|)"
            + (f" with margin {margin}" if margin else "")
        )


@dataclass(frozen=True)
class ParityFunctionSample:
    """One evaluation of G_sigma with its derivative and magnitude scale."""

    z: float
    x: float
    sigma: int
    value: float
    derivative: float
    scale: float
    in_series_domain: bool


def _g_parts(z, x, lam, mu, sigma, n_deriv):
    xarr = np.array([float(x)])
    s2, s1, _ = _phi_sums(xarr, lam, mu, z, n_deriv=n_deriv)
    ep = math.exp(lam * z)
    em = math.exp(-lam * z)
    S2 = [float(v[0]) for v in s2]
    S1 = [float(v[0]) for v in s1]
    g = ep * S2[0] - sigma * em * S1[0]
    out = [g]
    if n_deriv >= 1:
        out.append(
            ep * (lam * S2[0] - S2[1]) + sigma * em * (lam * S1[0] - S1[1])
        )
    if n_deriv >= 2:
        out.append(
            ep * (lam * lam * S2[0] - 2.0 * lam * S2[1] + S2[2])
            - sigma * em * (lam * lam * S1[0] - 2.0 * lam * S1[1] + S1[2])
        )
    scale = abs(ep * S2[0]) + abs(em * S1[0])
    return out, scale


def g_sigma(z, x, lam, mu, sigma):
    """(G_sigma, G'_sigma) at one point; z must lie inside (-|lam|, |lam|)."""
    if sigma not in (-1, 1):
        raise ValueError("sigma must be +1 or -1")
    _check_z(z, lam)
    if _dist_nonneg_int(x) < EXCLUSION_DELTA:
        raise PoleProximity(
            f"x = {x:.12g} is within {EXCLUSION_DELTA:g} of a non-negative integer"
        )
    (g, gp), _ = _g_parts(z, x, lam, mu, sigma, n_deriv=1)
    return g, gp


def g_sample(z, x, lam, mu, sigma) -> ParityFunctionSample:
    """Like :func:`g_sigma` but bundled with the magnitude scale
    |psi_2(-z)| + |psi_1(z)| used for relative zero tests."""
    if sigma not in (-1, 1):
        raise ValueError("sigma must be +1 or -1")
    _check_z(z, lam)
    if _dist_nonneg_int(x) < EXCLUSION_DELTA:
        raise PoleProximity(
            f"x = {x:.12g} is within {EXCLUSION_DELTA:g} of a non-negative integer"
        )
    (g, gp), scale = _g_parts(z, x, lam, mu, sigma, n_deriv=1)
    return ParityFunctionSample(
        z=float(z),
        x=float(x),
        sigma=int(sigma),
        value=g,
        derivative=gp,
        scale=scale,
        in_series_domain=abs(z) < abs(lam),
    )


def g_ode_residual(z, x, lam, mu, sigma):
    """Relative residual of G_sigma in its second-order ODE (see module docs).

    Requires |z| <= |lam| - 0.05 so the second-derivative series is comfortably
    inside the convergence window.
    """
    _check_z(z, lam, margin=0.05)
    (g, gp, gpp), _ = _g_parts(z, x, lam, mu, sigma, n_deriv=2)
    t2 = (z * z - lam * lam) * gpp
    t1 = (z * (1.0 - 2.0 * x) - lam) * gp
    t0 = (lam * z * (1.0 - lam * z) + (x - lam * lam) ** 2 - lam * lam - mu * mu) * g
    return abs(t2 + t1 + t0) / max(abs(t2) + abs(t1) + abs(t0), 1e-300)


class ZeroClassification(Enum):
    SPECTRUM_POINT = "spectrum-point"
    ISOLATED_ZERO = "isolated-zero"


def classify_zero(x0, z_star, lam, mu, sigma, tol=1e-6) -> ZeroClassification:
    """Classify a zero of x -> G_sigma(z*, x).

    ``x0`` must already satisfy |G| <= tol * scale there.  The point belongs to
    the spectrum iff additionally |G'| < tol * scale AND the spectral
    determinant vanishes (|W| < tol * its scale); otherwise the zero is
    isolated and x0 is not an eigenvalue.
    """
    from .spectrum import spectral_determinant

    s = g_sample(z_star, x0, lam, mu, sigma)
    if abs(s.value) > tol * s.scale:
        raise ValueError(
            f"x0 = {x0!r} is not a zero of G_sigma at z* = {z_star!r} "
            f"(|G|/scale = {abs(s.value) / s.scale:.3e})"
        )
    det = spectral_determinant(ModelParams.from_x(x0, lam, mu, 0.0))
    if abs(s.derivative) < tol * s.scale and abs(det.w) < tol * det.scale:
        return ZeroClassification.SPECTRUM_POINT
    return ZeroClassification.ISOLATED_ZERO


@dataclass(frozen=True)
class GGrid:
    """Row-major samples of both parity functions on an (x, z) rectangle.

    Rows whose x falls in an exclusion zone hold NaN (series poles there); the
    zero-level contours are unaffected.
    """

    x: np.ndarray
    z: np.ndarray
    g_plus: np.ndarray   # shape (len(x), len(z))
    g_minus: np.ndarray
    excluded: np.ndarray  # bool, per x row


def g_grid(x_range, z_range, lam, mu, resolution) -> GGrid:
    """Sample G_+ and G_- on a rectangular grid for external contouring."""
    nx, nz = resolution
    if nx < 1 or nz < 1:
        raise ValueError("resolution must be positive")
    x = np.linspace(x_range[0], x_range[1], nx) if nx > 1 else np.array([x_range[0]])
    z = np.linspace(z_range[0], z_range[1], nz) if nz > 1 else np.array([z_range[0]])
    if abs(z[0]) >= abs(lam) or abs(z[-1]) >= abs(lam):
        raise DomainError("z range must lie inside (-|lam|, |lam|)")
    # distance to non-negative integers only: negative x is never resonant
    excluded = np.where(
        x < 0, np.abs(x) < EXCLUSION_DELTA, np.abs(x - np.round(x)) < EXCLUSION_DELTA
    )
    xm = np.where(excluded, np.nan, x)
    gp = np.empty((nx, nz))
    gm = np.empty((nx, nz))
    for j, zv in enumerate(z):
        s2, s1, _ = _phi_sums(xm, lam, mu, float(zv), n_deriv=0)
        ep = math.exp(lam * zv)
        em = math.exp(-lam * zv)
        gp[:, j] = ep * s2[0] - em * s1[0]
        gm[:, j] = ep * s2[0] + em * s1[0]
    return GGrid(x=x, z=z, g_plus=gp, g_minus=gm, excluded=excluded)


def g_curve(z_star, x_values, lam, mu, sigma):
    """Vectorized (G, G', scale, excluded) along an x grid at fixed z*."""
    _check_z(z_star, lam)
    x = np.asarray(x_values, dtype=float)
    excluded = np.where(
        x < 0, np.abs(x) < EXCLUSION_DELTA, np.abs(x - np.round(x)) < EXCLUSION_DELTA
    )
    xm = np.where(excluded, np.nan, x)
    s2, s1, _ = _phi_sums(xm, lam, mu, float(z_star), n_deriv=1)
    ep = math.exp(lam * z_star)
    em = math.exp(-lam * z_star)
    g = ep * s2[0] - sigma * em * s1[0]
    gp = ep * (lam * s2[0] - s2[1]) + sigma * em * (lam * s1[0] - s1[1])
    scale = np.abs(ep * s2[0]) + np.abs(em * s1[0])
    return g, gp, scale, excluded


def scan_g_zeros(z_star, lam, mu, sigma, x_lo, x_hi, step=1e-3, refine_tol=1e-10):
    """Zeros of x -> G_sigma(z*, x) on [x_lo, x_hi] outside exclusion zones.

    Sign changes of G/scale are bracketed on a step grid inside zone-free
    segments (segment endpoints sit on zone edges) and refined by bisection to
    |dx| < refine_tol.  Returns the refined x values, ascending.
    """
    if step > 1e-3 * (1 + 1e-9):
        raise ValueError("scan step must be <= 1e-3")
    _check_z(z_star, lam)

    def f(xv):
        s = g_sample(z_star, xv, lam, mu, sigma)
        return s.value / s.scale

    roots = []
    for lo, hi in exclusion_segments(x_lo, x_hi, 0.0):
        k0 = math.ceil((lo - x_lo) / step - 1e-9)
        pts = [lo] + [
            x_lo + k * step
            for k in range(k0, int((hi - x_lo) / step) + 1)
            if lo < x_lo + k * step < hi
        ] + [hi]
        g, _, scale, _ = g_curve(z_star, np.array(pts), lam, mu, sigma)
        vals = g / scale
        for i in range(len(pts) - 1):
            a, b = vals[i], vals[i + 1]
            if np.isnan(a) or np.isnan(b) or a * b > 0.0:
                continue
            xa, xb, fa = pts[i], pts[i + 1], a
            while xb - xa > refine_tol:
                mid = 0.5 * (xa + xb)
                fm = f(mid)
                if fa * fm <= 0.0:
                    xb = mid
                else:
                    xa, fa = mid, fm
            roots.append(0.5 * (xa + xb))
    # merge duplicates from shared segment endpoints
    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-8:
            out.append(r)
    return out
