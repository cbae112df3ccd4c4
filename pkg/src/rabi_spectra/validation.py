"""Self-contained invariant suite behind the ``validate`` subcommand.

Each check measures a worst-case discrepancy over deterministic random draws
and compares it to a threshold; the CLI prints one line per check and exits
nonzero when any fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frobenius, gfunction, heun, oracle, spectrum
from .model import HeunLocalParams, ModelParams, in_exclusion_zone, x_from_E

DEFAULT_SEED = 20250811


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return (
            f"{status} {self.name} measured={self.measured:.3e} "
            f"threshold={self.threshold:.3e}{extra}"
        )


def _draw_model(rng):
    lam = rng.uniform(0.2, 1.5)
    mu = rng.uniform(0.0, 1.0)
    eps = rng.uniform(0.0, 0.3)
    while True:
        x = rng.uniform(0.05, 5.0)
        if not in_exclusion_zone(x, eps, 5e-3):
            return ModelParams.from_x(x, lam, mu, eps)


def _draw_heun(rng):
    def clear_of_negative_integers(v):
        return v >= -0.025 or abs(v - round(v)) > 0.05

    alpha = rng.uniform(-4.0, 4.0)
    while True:
        beta = rng.uniform(-3.0, 3.0)
        if clear_of_negative_integers(beta):
            break
    while True:
        gamma = rng.uniform(-3.0, 3.0)
        if clear_of_negative_integers(gamma):
            break
    return HeunLocalParams(
        alpha, beta, gamma, rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)
    )


def check_abel_invariance(n_draws=50, seed=DEFAULT_SEED, threshold=1e-8):
    """w(y) times the closed-form integrating factor is y-independent."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    ys = (0.3, 0.5, 0.6)
    for _ in range(n_draws):
        p = _draw_model(rng)
        for y1, y2 in ((ys[0], ys[1]), (ys[0], ys[2]), (ys[1], ys[2])):
            worst = max(worst, spectrum.wronskian_invariance_check(p, y1, y2))
    return CheckResult("abel-invariance", worst < threshold, worst, threshold)


def check_engine_cross(n_draws=50, seed=DEFAULT_SEED, threshold=1e-10):
    """Specialized recurrence vs generic series engine, values and derivatives."""
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(n_draws):
        a = _draw_heun(rng)
        ode = heun.heun_ode_spec(a)
        sol = frobenius.local_series(ode, 0.0, 0.0)
        for y in (0.1, 0.25, 0.5):
            v_fast, d_fast = heun.heunc_eval(a, y, tol=1e-13)
            v_gen = frobenius.evaluate(sol, y, 0)
            d_gen = frobenius.evaluate(sol, y, 1)
            worst = max(
                worst,
                abs(v_fast - v_gen) / max(abs(v_fast), abs(v_gen), 1e-12),
                abs(d_fast - d_gen) / max(abs(d_fast), abs(d_gen), 1e-12),
            )
    return CheckResult("engine-cross-check", worst < threshold, worst, threshold)


def check_g_ode_residual(n_samples=100, seed=DEFAULT_SEED, threshold=1e-8, lam=0.7, mu=0.4):
    """The parity function solves its second-order ODE along the series."""
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    count = 0
    while count < n_samples:
        x = rng.uniform(0.05, 4.0)
        if gfunction._dist_nonneg_int(x) < 5e-3:
            continue
        z = rng.uniform(-(lam - 0.06), lam - 0.06)
        sigma = 1 if rng.uniform() < 0.5 else -1
        worst = max(worst, gfunction.g_ode_residual(z, x, lam, mu, sigma))
        count += 1
    return CheckResult("g-ode-residual", worst < threshold, worst, threshold)


def check_oracle_match(quick=False, threshold=1e-6):
    """Wronskian roots and truncated-basis eigenvalues agree both ways."""
    e_hi = 2.5 if quick else 5.0
    cases = [(0.7, 0.4, 0.0)] if quick else [(0.7, 0.4, 0.0), (0.7, 0.4, 0.2)]
    worst = 0.0
    detail = []
    for lam, mu, eps in cases:
        report = spectrum.scan_roots(
            lam, mu, eps, x_from_E(-1.0, lam), x_from_E(e_hi, lam), 0.01
        )
        roots = report.eigenvalues()
        k = 8 if quick else 16
        vals, _ = oracle.converged_spectrum(lam, mu, eps, k, tol=1e-8)
        vals = vals[vals < e_hi]
        vals = vals[vals > -1.0]
        keep = ~in_exclusion_zone(vals + lam * lam, eps)
        vals = vals[keep]
        if len(vals) != len(roots):
            return CheckResult(
                "oracle-match",
                False,
                float("inf"),
                threshold,
                f"count mismatch eps={eps}: {len(roots)} roots vs {len(vals)} oracle",
            )
        worst = max(worst, float(np.max(np.abs(np.sort(vals) - np.sort(roots)))))
        detail.append(f"eps={eps}: {len(vals)} levels")
    return CheckResult("oracle-match", worst < threshold, worst, threshold, "; ".join(detail))


def check_isolated_zero(threshold=1e-3):
    """A single-point zero of G_+ that is not an eigenvalue exists."""
    lam, mu, z_star = 0.7, 0.4, -0.43
    zeros = gfunction.scan_g_zeros(z_star, lam, mu, +1, 0.003, 4.0)
    best = 0.0
    for x0 in zeros:
        s = gfunction.g_sample(z_star, x0, lam, mu, +1)
        det = spectrum.spectral_determinant(ModelParams.from_x(x0, lam, mu, 0.0))
        strength = min(abs(s.derivative) / s.scale, abs(det.w) / det.scale)
        best = max(best, strength)
    return CheckResult(
        "isolated-zero-exists",
        best > threshold,
        best,
        threshold,
        f"{len(zeros)} zeros scanned",
    )


def run_validation(seed=DEFAULT_SEED, quick=False, tol=None):
    """Run every check; ``tol`` overrides the series-identity thresholds."""
    n_draws = 5 if quick else 50
    n_samples = 5 if quick else 100
    checks = [
        check_abel_invariance(n_draws, seed, tol if tol is not None else 1e-8),
        check_engine_cross(n_draws, seed, tol if tol is not None else 1e-10),
        check_g_ode_residual(n_samples, seed, tol if tol is not None else 1e-8),
        check_oracle_match(quick=quick),
        check_isolated_zero(),
    ]
    return checks
