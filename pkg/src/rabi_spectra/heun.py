"""Fast evaluator for the local confluent-Heun solutions.

The equation in the unit-interval coordinate is

    v'' + (alpha + (beta+1)/y + (gamma+1)/(y-1)) v'
        + (mu~/y + nu~/(y-1)) v = 0,

with regular singular points 0 and 1 and an irregular point at infinity.  The
local solution analytic at y = 0 is normalized to v(0) = 1 (this fixes the
convention; no external special-function table is consulted) and obeys the
three-term recurrence

    (n+1)(n+beta+1) c_{n+1}
        = [n(n-1) + n(beta+gamma+2-alpha) - mu~] c_n
          + [alpha(n-1) + mu~ + nu~] c_{n-1},          c_{-1} = 0, c_0 = 1.

The solution analytic at y = 1 is the same construction with the companion
parameter quintuple evaluated in 1 - y.  Series arguments are capped at 0.75
so the geometric tail keeps certified truncation cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergence, ResonantExponents
from .model import HeunLocalParams, ModelParams, heun_params

#: Largest allowed series argument (safety margin inside the unit disc).
Y_MAX = 0.75

_RES_TOL = 1e-10


def heunc_sum_arrays(alpha, beta, gamma, mu_t, nu_t, y, tol=1e-14, n_max=5000):
    """Series value and derivative for arrays of parameter quintuples.

    All parameter arguments broadcast elementwise; ``y`` is a scalar in
    [0, Y_MAX].  Entries whose recurrence hits a vanishing denominator are
    returned as NaN and reported in the resonance mask instead of raising, so
    grid scans can pre-mask excluded spectral parameters.

    Returns (value, derivative, resonant_mask, n_used).
    """
    if not 0.0 <= y <= Y_MAX:
        raise DomainError(f"series argument {y!r} outside [0, {Y_MAX}]")
    alpha, beta, gamma, mu_t, nu_t = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (alpha, beta, gamma, mu_t, nu_t))
    )
    shape = alpha.shape
    c_prev = np.zeros(shape)
    c_cur = np.ones(shape)
    value = np.ones(shape)
    deriv = np.zeros(shape)
    resonant = np.zeros(shape, dtype=bool)
    ypow = 1.0  # y^n
    level = np.ones(shape)
    ok_run = 0
    n_used = None
    with np.errstate(invalid="ignore"):
        for n in range(n_max):
            den = (n + 1.0) * (n + beta + 1.0)
            bad = np.abs(den) < _RES_TOL
            if bad.any():
                resonant |= bad
                if resonant.all():
                    break
            den = np.where(resonant, 1.0, den)
            c_next = (
                (n * (n - 1.0) + n * (beta + gamma + 2.0 - alpha) - mu_t) * c_cur
                + (alpha * (n - 1.0) + mu_t + nu_t) * c_prev
            ) / den
            c_next = np.where(resonant, np.nan, c_next)
            term_d = (n + 1.0) * c_next * ypow
            ypow *= y
            term_v = c_next * ypow
            value = value + term_v
            deriv = deriv + term_d
            np.maximum(level, np.abs(value), out=level)
            np.maximum(level, np.abs(deriv), out=level)
            worst = np.nanmax(
                np.maximum(np.abs(term_v), np.abs(term_d)) / level
            ) if not resonant.all() else 0.0
            if np.isnan(worst) or worst <= tol:
                ok_run += 1
                if ok_run >= 5 and n >= 8:
                    n_used = n + 1
                    break
            else:
                ok_run = 0
            c_prev, c_cur = c_cur, c_next
    if resonant.all():
        value = np.full(shape, np.nan)
        deriv = np.full(shape, np.nan)
        return value, deriv, resonant, 0
    if n_used is None:
        raise NoConvergence(f"series did not settle within {n_max} terms at y={y!r}")
    value = np.where(resonant, np.nan, value)
    deriv = np.where(resonant, np.nan, deriv)
    return value, deriv, resonant, n_used


@dataclass(frozen=True)
class HeunSeries:
    """Stored coefficient sequence of one local solution (c_0 = 1)."""

    params: HeunLocalParams
    coeffs: np.ndarray
    last_term: float

    @property
    def n_terms(self):
        return len(self.coeffs)

    def coefficient_ratio(self):
        """|c_N / c_{N-1}| near truncation; ~1 when the radius is 1 (diagnostic)."""
        if self.n_terms < 2 or self.coeffs[-2] == 0.0:
            return np.nan
        return abs(self.coeffs[-1] / self.coeffs[-2])

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)


def heunc_series(a: HeunLocalParams, tol=1e-15, n_max=5000) -> HeunSeries:
    """Coefficient sequence truncated for evaluation anywhere in [0, Y_MAX]."""
    mu_t, nu_t = a.mu_tilde, a.nu_tilde
    coeffs = [1.0]
    c_prev, c_cur = 0.0, 1.0
    partial = 1.0
    level = 1.0
    ypow = 1.0
    ok_run = 0
    for n in range(n_max):
        den = (n + 1.0) * (n + a.beta + 1.0)
        if abs(den) < _RES_TOL:
            raise ResonantExponents(
                f"vanishing denominator at order {n + 1} (beta = {a.beta!r})"
            )
        c_next = (
            (n * (n - 1.0) + n * (a.beta + a.gamma + 2.0 - a.alpha) - mu_t) * c_cur
            + (a.alpha * (n - 1.0) + mu_t + nu_t) * c_prev
        ) / den
        coeffs.append(c_next)
        ypow *= Y_MAX
        partial += c_next * ypow
        level = max(level, abs(partial))
        if abs(c_next) * ypow <= tol * level:
            ok_run += 1
            if ok_run >= 5 and n >= 8:
                break
        else:
            ok_run = 0
        c_prev, c_cur = c_cur, c_next
    else:
        raise NoConvergence(f"coefficient sequence did not settle within {n_max} terms")
    return HeunSeries(params=a, coeffs=np.array(coeffs), last_term=abs(coeffs[-1]) * ypow)


def heunc_eval(a: HeunLocalParams, y, tol=1e-12):
    """Value and derivative of the local solution at y in [0, Y_MAX].

    The truncation tail of both outputs is below ``tol`` relative to the
    running magnitude.  Raises ResonantExponents on vanishing denominators and
    NoConvergence past the term budget.
    """
    v, d, resonant, _ = heunc_sum_arrays(
        a.alpha, a.beta, a.gamma, a.mu_tilde, a.nu_tilde, float(y), tol=0.25 * tol
    )
    if bool(resonant):
        raise ResonantExponents(f"vanishing denominator for beta = {a.beta!r}")
    return float(v), float(d)


def h1_h2(p: ModelParams, y):
    """Values and y-derivatives of the two local solutions at one point.

    H1 is anchored at y = 0 and evaluated at y; H2 is anchored at y = 1 and
    evaluated through its reflected series in 1 - y (the chain-rule sign is
    applied to its derivative).  Requires 0.25 <= y <= 0.75 so both series
    arguments stay within Y_MAX.
    """
    if not 0.25 <= y <= 0.75:
        raise DomainError(f"evaluation point {y!r} outside [0.25, 0.75]")
    a0, a1 = heun_params(p)
    h1, h1p = heunc_eval(a0, y)
    v, vp = heunc_eval(a1, 1.0 - y)
    return h1, h1p, v, -vp


def heun_ode_spec(a: HeunLocalParams):
    """The equation as a generic rational-coefficient ODE (for cross-checks).

    p(y) = [alpha y(y-1) + (beta+1)(y-1) + (gamma+1) y] / (y(y-1))
    q(y) = [mu~ (y-1) + nu~ y] / (y(y-1))
    """
    from .model import make_ode

    mu_t, nu_t = a.mu_tilde, a.nu_tilde
    p_num = (-(a.beta + 1.0), a.beta + a.gamma + 2.0 - a.alpha, a.alpha)
    q_num = (-mu_t, mu_t + nu_t)
    den = (0.0, -1.0, 1.0)
    return make_ode(p_num, den, q_num, den, (0.0, 1.0))
