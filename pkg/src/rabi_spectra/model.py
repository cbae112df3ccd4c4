"""Model parameters and the scalar-ODE forms of the (generalized) Rabi model.

The two-level/single-mode system is treated in the representation by entire
functions, where it becomes a pair of coupled first-order ODEs with regular
singular points at z = -lambda and z = +lambda.  Eliminating the second
component yields one second-order equation; the substitution
y = (1 + z/lambda)/2 together with the gauge psi1 = exp(2*lambda^2*y) * v(y)
brings it to confluent-Heun form.  This module holds the parameter bundles,
the parameter maps, and the coordinate/gauge changes connecting the two forms.

Spectral parameters are used interchangeably as the energy E or the shifted
value x = E + lambda^2.  Values of x too close to the resonant sets
(x - eps or x + eps near an integer) are rejected by the series-based entry
points; the corresponding eigenvalues are handled by the diagonalization
oracle only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _poly
from .errors import DomainError, PoleProximity

#: Half-width of the exclusion zones around resonant x values.  Series
#: denominators contain factors (x - eps - n) and (x + eps - n); closer than
#: this the local expansions degenerate and the eigenvalue (if any) is of the
#: exceptional kind, which only the oracle reports.
EXCLUSION_DELTA = 1e-3


def x_from_E(E, lam):
    """Shifted spectral parameter x = E + lambda^2."""
    return E + lam * lam


def E_from_x(x, lam):
    """Inverse of :func:`x_from_E`."""
    return x - lam * lam


def dist_to_integers(v):
    """Distance from v to the nearest integer (works on arrays)."""
    return np.abs(v - np.round(v))


def in_exclusion_zone(x, eps=0.0, delta=EXCLUSION_DELTA):
    """True where min(dist(x-eps, Z), dist(x+eps, Z)) < delta (elementwise)."""
    return np.minimum(dist_to_integers(x - eps), dist_to_integers(x + eps)) < delta


def exclusion_segments(x_lo, x_hi, eps=0.0, delta=EXCLUSION_DELTA):
    """Split [x_lo, x_hi] into closed subintervals free of exclusion zones.

    Zone centers are the two lattices {n + eps} and {n - eps}; each zone is the
    open interval of half-width ``delta`` around a center.  Segment endpoints
    land exactly on zone edges so that roots arbitrarily close to (but outside)
    a zone stay bracketable.
    """
    if not x_hi > x_lo:
        return []
    centers = set()
    for shift in (eps, -eps):
        n = math.floor(x_lo - shift - 1)
        while n + shift <= x_hi + 1:
            c = n + shift
            if x_lo - delta <= c <= x_hi + delta:
                centers.add(c)
            n += 1
    segments = []
    lo = x_lo
    for c in sorted(centers):
        a, b = c - delta, c + delta
        if b <= lo:
            continue
        if a > lo:
            segments.append((lo, min(a, x_hi)))
        lo = b
        if lo >= x_hi:
            break
    if lo < x_hi:
        segments.append((lo, x_hi))
    return [(a, b) for a, b in segments if b > a]


@dataclass(frozen=True)
class ModelParams:
    """Spectral-parameter bundle (E, lambda, mu, eps) with derived x.

    ``lam`` is the mode-level coupling (must be nonzero on the Heun path),
    ``mu`` half the level separation (mu >= 0), ``eps`` the symmetry-breaking
    bias (eps = 0 restores the parity-symmetric model).
    """

    E: float
    lam: float
    mu: float
    eps: float = 0.0
    x: float = field(init=False)

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        object.__setattr__(self, "x", x_from_E(self.E, self.lam))

    @classmethod
    def from_x(cls, x, lam, mu, eps=0.0):
        return cls(E=E_from_x(x, lam), lam=lam, mu=mu, eps=eps)

    def excluded(self, delta=EXCLUSION_DELTA):
        return bool(in_exclusion_zone(self.x, self.eps, delta))


def require_heun_path(p: ModelParams, delta=EXCLUSION_DELTA):
    """Guard for entry points that expand local Heun series.

    Raises DomainError for lam = 0 (singular points coincide; use the oracle)
    and PoleProximity inside an exclusion zone.
    """
    if p.lam == 0.0:
        raise DomainError("lam = 0 has no Heun path; use the diagonalization oracle")
    if p.excluded(delta):
        raise PoleProximity(
            f"x = {p.x:.12g} is within {delta:g} of a resonant value "
            f"(x - eps or x + eps near an integer)"
        )


@dataclass(frozen=True)
class HeunLocalParams:
    """Parameter quintuple (alpha, beta, gamma, delta, eta) of one local
    confluent-Heun solution, plus the derived accessory combinations."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    eta: float

    @property
    def mu_tilde(self):
        a, b, g = self.alpha, self.beta, self.gamma
        return 0.5 * (a - b - g + a * b - b * g) - self.eta

    @property
    def nu_tilde(self):
        a, b, g = self.alpha, self.beta, self.gamma
        return 0.5 * (a + b + g + a * g + b * g) + self.delta + self.eta

    def swapped(self) -> "HeunLocalParams":
        """Parameters of the companion solution anchored at the other singular
        point: (-alpha, gamma, beta, -delta, delta + eta).  An involution."""
        return HeunLocalParams(
            -self.alpha, self.gamma, self.beta, -self.delta, self.delta + self.eta
        )


def heun_params(p: ModelParams):
    """Local-solution parameter quintuples (a0, a1) at y = 0 and y = 1."""
    x, lam, mu, eps = p.x, p.lam, p.mu, p.eps
    lam2 = lam * lam
    alpha = 4.0 * lam2
    beta = -x + eps
    gamma = -1.0 - x - eps
    delta = 2.0 * (1.0 - 2.0 * eps) * lam2
    eta = 0.5 * (
        1.0 - 2.0 * mu * mu + (1.0 + x) * (x - 4.0 * lam2) + eps * (1.0 + 4.0 * lam2) - eps * eps
    )
    a0 = HeunLocalParams(alpha, beta, gamma, delta, eta)
    return a0, a0.swapped()


def mu_nu_tilde(a: HeunLocalParams):
    """Accessory combinations (mu~, nu~) entering the Heun-form coefficients."""
    return a.mu_tilde, a.nu_tilde


@dataclass(frozen=True)
class OdeSpec:
    """A second-order linear ODE u'' + p(z) u' + q(z) u = 0 with rational
    coefficients, given as polynomial ratios (ascending coefficient tuples),
    plus its declared finite regular singular points (strictly increasing)."""

    p_num: tuple
    p_den: tuple
    q_num: tuple
    q_den: tuple
    singular_points: tuple

    def p(self, z):
        return _poly.polyval(self.p_num, z) / _poly.polyval(self.p_den, z)

    def q(self, z):
        return _poly.polyval(self.q_num, z) / _poly.polyval(self.q_den, z)

    def radius(self, s):
        """Guaranteed convergence radius of the local series at singular point s."""
        others = [t for t in self.singular_points if t != s]
        if not others:
            return math.inf
        return min(abs(s - t) for t in others)


def make_ode(p_num, p_den, q_num, q_den, singular_points, tol=1e-12) -> OdeSpec:
    """Validated OdeSpec constructor.

    Checks that every denominator root appears in the declared singular-point
    list (within ``tol``), that every declared point is actually a denominator
    root, and that each declared point is regular: the pole order of p there is
    at most 1 and of q at most 2.
    """
    pts = tuple(sorted(float(s) for s in singular_points))
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise ValueError("singular points must be strictly increasing")
    den_roots = np.concatenate([_poly.real_roots(p_den), _poly.real_roots(q_den)])
    for r in den_roots:
        if not any(abs(r - s) <= max(tol, tol * max(1.0, abs(s))) for s in pts):
            raise ValueError(f"denominator root {r!r} is not a declared singular point")
    for s in pts:
        if not any(abs(r - s) <= max(tol, tol * max(1.0, abs(s))) for r in den_roots):
            raise ValueError(f"declared singular point {s!r} is not a denominator root")
        mp = _poly.trailing_zero_order(_poly.polyshift(p_den, s)) - _poly.trailing_zero_order(
            _poly.polyshift(p_num, s)
        )
        mq = _poly.trailing_zero_order(_poly.polyshift(q_den, s)) - _poly.trailing_zero_order(
            _poly.polyshift(q_num, s)
        )
        if mp > 1 or mq > 2:
            raise ValueError(f"singular point {s!r} is irregular (pole orders p:{mp}, q:{mq})")
    return OdeSpec(
        tuple(map(float, p_num)),
        tuple(map(float, p_den)),
        tuple(map(float, q_num)),
        tuple(map(float, q_den)),
        pts,
    )


def eliminated_ode(p: ModelParams) -> OdeSpec:
    """Scalar ODE for the first wavefunction component, poles at z = -+lam.

    p(z) = -[lam(1+2 eps) + z(2E + 2 lam^2 - 1)] / (z^2 - lam^2)
    q(z) = -[eps^2 - E^2 + 2 z eps lam + lam(lam + z(z lam - 1)) + mu^2] / (z^2 - lam^2)
    """
    if p.lam == 0.0:
        raise DomainError("lam = 0: the two singular points coincide")
    E, lam, mu, eps = p.E, p.lam, p.mu, p.eps
    lam2 = lam * lam
    den = (-lam2, 0.0, 1.0)
    p_num = (-lam * (1.0 + 2.0 * eps), 1.0 - 2.0 * E - 2.0 * lam2)
    q_num = (E * E - eps * eps - lam2 - mu * mu, lam - 2.0 * eps * lam, -lam2)
    return make_ode(p_num, den, q_num, den, (-abs(lam), abs(lam)))


def z_to_y(z, lam):
    """Map z in the original coordinate to y = (1 + z/lam)/2 (inverse of
    z = lam(2y - 1)); sends -lam, 0, +lam to 0, 1/2, 1."""
    if lam == 0.0:
        raise DomainError("lam = 0 has no y coordinate")
    return 0.5 * (1.0 + z / lam)


def y_to_z(y, lam):
    """Inverse map z = lam(2y - 1)."""
    if lam == 0.0:
        raise DomainError("lam = 0 has no y coordinate")
    return lam * (2.0 * y - 1.0)


def y_gauge(v, y, lam):
    """First-component value psi1(lam(2y-1)) = exp(2 lam^2 y) v(y)."""
    return math.exp(2.0 * lam * lam * y) * v


def y_gauge_deriv(v, dv, y, lam):
    """z-derivative of the gauged value: psi1'(z) = exp(2 lam^2 y) (lam v + dv/(2 lam))."""
    if lam == 0.0:
        raise DomainError("lam = 0 has no y coordinate")
    return math.exp(2.0 * lam * lam * y) * (lam * v + dv / (2.0 * lam))
