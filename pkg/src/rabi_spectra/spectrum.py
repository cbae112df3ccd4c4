"""Spectral determinant from the two local Heun solutions and its root scans.

The determinant at a point y* of the overlap (0, 1) is

    w(y*) = H1(y*) H2'(y*) - H1'(y*) H2(y*),

where H1/H2 are the local solutions anchored at y = 0 and y = 1.  Both are
restrictions of one entire solution exactly at the eigenvalues, so the
spectrum is the zero set of w in the spectral parameter (outside the resonant
exclusion zones, where only the diagonalization oracle reports eigenvalues).
The default evaluation point is y* = 1/2; by the first-order identity for
Wronskians, w(y) e^{alpha y} y^{beta+1} (1-y)^{gamma+1} is y-independent, so
the zero set does not depend on that choice (``wronskian_invariance_check``).

Root isolation normalizes by scale = |H1 H2'| + |H1' H2| (the raw determinant
swings over orders of magnitude and flips sign across resonance poles without
roots), brackets sign changes on a grid laid inside zone-free segments, and
refines by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle as _oracle
from .errors import DomainError, PoleProximity
from .heun import h1_h2, heunc_sum_arrays
from .model import (
    EXCLUSION_DELTA,
    HeunLocalParams,
    ModelParams,
    E_from_x,
    exclusion_segments,
    heun_params,
    in_exclusion_zone,
    require_heun_path,
    x_from_E,
)

WRONSKIAN_ROOT = "wronskian-root"
ORACLE_ONLY = "oracle-only"

#: A refined bracket is accepted as a root only if |w|/scale dips below this.
ROOT_DIP = 1e-6


@dataclass(frozen=True)
class SpectralDeterminantSample:
    params: ModelParams
    y_star: float
    w: float
    scale: float
    excluded: bool


@dataclass(frozen=True)
class EigenvalueRecord:
    x: float
    E: float
    bracket: tuple | None
    residual: float
    provenance: str


@dataclass
class SpectrumReport:
    lam: float
    mu: float
    eps: float
    records: list
    settings: dict = field(default_factory=dict)

    def eigenvalues(self, provenance=None):
        return np.array(
            [r.E for r in self.records if provenance is None or r.provenance == provenance]
        )


def spectral_determinant(p: ModelParams, y_star=0.5) -> SpectralDeterminantSample:
    """Determinant sample at y*; requires lam != 0 and x outside exclusion zones."""
    if not 0.25 <= y_star <= 0.75:
        raise DomainError(f"y* = {y_star!r} outside [0.25, 0.75]")
    require_heun_path(p)
    h1, h1p, h2, h2p = h1_h2(p, y_star)
    w = h1 * h2p - h1p * h2
    scale = abs(h1 * h2p) + abs(h1p * h2)
    return SpectralDeterminantSample(
        params=p, y_star=y_star, w=w, scale=scale, excluded=False
    )


def abel_factor(a: HeunLocalParams, y):
    """Closed-form integrating factor e^{alpha y} y^{beta+1} (1-y)^{gamma+1}."""
    return math.exp(a.alpha * y) * y ** (a.beta + 1.0) * (1.0 - y) ** (a.gamma + 1.0)


def wronskian_invariance_check(p: ModelParams, y1, y2):
    """Relative discrepancy of w(y) * AbelFactor(y) between two points."""
    s1 = spectral_determinant(p, y1)
    s2 = spectral_determinant(p, y2)
    a0, _ = heun_params(p)
    v1 = s1.w * abel_factor(a0, y1)
    v2 = s2.w * abel_factor(a0, y2)
    denom = max(abs(v1), abs(v2))
    if denom == 0.0:
        return 0.0
    return abs(v1 - v2) / denom


def _w_values(x_values, lam, mu, eps, y_star=0.5, tol=1e-14):
    """Vectorized (w, scale, invalid) along an x grid (excluded entries NaN)."""
    x = np.asarray(x_values, dtype=float)
    lam2 = lam * lam
    alpha = 4.0 * lam2
    beta = -x + eps
    gamma = -1.0 - x - eps
    delta = 2.0 * (1.0 - 2.0 * eps) * lam2
    eta = 0.5 * (
        1.0 - 2.0 * mu * mu + (1.0 + x) * (x - 4.0 * lam2) + eps * (1.0 + 4.0 * lam2) - eps * eps
    )

    def acc(a, b, g):
        mu_t = 0.5 * (a - b - g + a * b - b * g)
        nu_t = 0.5 * (a + b + g + a * g + b * g)
        return mu_t, nu_t

    mt0, nt0 = acc(alpha, beta, gamma)
    mt0 = mt0 - eta
    nt0 = nt0 + delta + eta
    mt1, nt1 = acc(-alpha, gamma, beta)
    mt1 = mt1 - (delta + eta)
    nt1 = nt1 + (-delta) + (delta + eta)
    h1, h1p, res0, _ = heunc_sum_arrays(alpha, beta, gamma, mt0, nt0, y_star, tol=tol)
    v, vp, res1, _ = heunc_sum_arrays(-alpha, gamma, beta, mt1, nt1, 1.0 - y_star, tol=tol)
    h2, h2p = v, -vp
    w = h1 * h2p - h1p * h2
    scale = np.abs(h1 * h2p) + np.abs(h1p * h2)
    return w, scale, res0 | res1 | np.isnan(w)


def scan_roots(
    lam,
    mu,
    eps,
    x_lo,
    x_hi,
    step=0.01,
    y_star=0.5,
    refine_tol=1e-10,
    delta=EXCLUSION_DELTA,
) -> SpectrumReport:
    """Isolate zeros of the normalized determinant over [x_lo, x_hi].

    Grid points are laid inside exclusion-zone-free segments, with the zone
    edges themselves as extra evaluation points so roots arbitrarily close to
    a zone stay bracketable.  Brackets where |w|/scale never dips below
    ``ROOT_DIP`` are discarded (pole-flank sign flips); duplicates within 1e-8
    are merged.  Records come back sorted by energy.
    """
    if lam == 0.0:
        raise DomainError("lam = 0 has no determinant path; use the oracle")
    if step > 0.01 * (1.0 + 1e-9):
        raise ValueError("scan step must be <= 0.01 to avoid hopping over roots")
    if not x_hi > x_lo:
        raise ValueError("empty scan window")

    def f_many(xs):
        w, scale, bad = _w_values(xs, lam, mu, eps, y_star)
        if bool(np.any(bad)) or bool(np.any(scale == 0.0)):
            culprit = xs[np.nonzero(bad | (scale == 0.0))[0][0]]
            raise PoleProximity(f"determinant evaluation failed at x = {culprit!r}")
        return w / scale

    lo_list, hi_list, flo_list, fhi_list = [], [], [], []
    for lo, hi in exclusion_segments(x_lo, x_hi, eps, delta):
        k0 = math.ceil((lo - x_lo) / step - 1e-9)
        pts = [lo] + [
            x_lo + k * step
            for k in range(k0, int((x_hi - x_lo) / step) + 2)
            if lo < x_lo + k * step < hi
        ] + [hi]
        w, scale, bad = _w_values(np.array(pts), lam, mu, eps, y_star)
        with np.errstate(invalid="ignore"):
            vals = np.where(bad | (scale == 0.0), np.nan, w / np.where(scale == 0, 1, scale))
        for i in range(len(pts) - 1):
            a, b = vals[i], vals[i + 1]
            if np.isnan(a) or np.isnan(b) or a * b > 0.0:
                continue
            lo_list.append(pts[i])
            hi_list.append(pts[i + 1])
            flo_list.append(float(a))
            fhi_list.append(float(b))
    roots = []
    if lo_list:
        # all brackets are refined in lockstep: one vector evaluation per
        # bisection level instead of one scalar evaluation per bracket
        blo = np.array(lo_list)
        bhi = np.array(hi_list)
        flo = np.array(flo_list)
        dip = np.minimum(np.abs(flo), np.abs(fhi_list))
        brackets = list(zip(lo_list, hi_list))
        while float(np.max(bhi - blo)) > refine_tol:
            mid = 0.5 * (blo + bhi)
            fm = f_many(mid)
            dip = np.minimum(dip, np.abs(fm))
            keep_low = flo * fm > 0.0  # root in the upper half
            blo = np.where(keep_low, mid, blo)
            flo = np.where(keep_low, fm, flo)
            bhi = np.where(keep_low, bhi, mid)
        x_roots = 0.5 * (blo + bhi)
        resid = np.abs(f_many(x_roots))
        for i in range(len(x_roots)):
            if min(dip[i], resid[i]) >= ROOT_DIP:
                continue  # sign flip without a genuine zero
            roots.append((float(x_roots[i]), brackets[i], float(resid[i])))
    roots.sort(key=lambda r: r[0])
    merged = []
    for r in roots:
        if merged and r[0] - merged[-1][0] <= 1e-8:
            if r[2] < merged[-1][2]:
                merged[-1] = r
            continue
        merged.append(list(r))
    records = [
        EigenvalueRecord(
            x=x_root,
            E=E_from_x(x_root, lam),
            bracket=bracket,
            residual=resid,
            provenance=WRONSKIAN_ROOT,
        )
        for x_root, bracket, resid in merged
    ]
    return SpectrumReport(
        lam=lam,
        mu=mu,
        eps=eps,
        records=records,
        settings={
            "x_lo": x_lo,
            "x_hi": x_hi,
            "step": step,
            "y_star": y_star,
            "refine_tol": refine_tol,
            "delta": delta,
        },
    )


def with_oracle_fill(report: SpectrumReport, k=16, tol=1e-8) -> SpectrumReport:
    """Add oracle-only records for eigenvalues inside exclusion zones.

    The truncated-basis oracle is the only source for the exceptional
    (resonant) part of the spectrum; every added record lies inside a zone.
    """
    x_lo = report.settings["x_lo"]
    x_hi = report.settings["x_hi"]
    delta = report.settings.get("delta", EXCLUSION_DELTA)
    vals, n_used = _oracle.converged_spectrum(report.lam, report.mu, report.eps, k, tol=tol)
    extra = []
    for E in vals:
        x = x_from_E(E, report.lam)
        if not (x_lo <= x <= x_hi):
            continue
        if in_exclusion_zone(x, report.eps, delta):
            extra.append(
                EigenvalueRecord(
                    x=float(x),
                    E=float(E),
                    bracket=None,
                    residual=float(tol),
                    provenance=ORACLE_ONLY,
                )
            )
    records = sorted(report.records + extra, key=lambda r: (r.E, r.provenance))
    settings = dict(report.settings)
    settings["oracle_n_used"] = n_used
    return SpectrumReport(
        lam=report.lam, mu=report.mu, eps=report.eps, records=records, settings=settings
    )


def _scan_one_lambda(args):
    lam, mu, eps, e_lo, e_hi, step = args
    try:
        rep = scan_roots(lam, mu, eps, x_from_E(e_lo, lam), x_from_E(e_hi, lam), step)
        return lam, [r.E for r in rep.records], None
    except Exception as exc:  # per-point failures are data, not fatal
        return lam, [], f"{type(exc).__name__}: {exc}"


def spectrum_vs_lambda(mu, eps, lam_grid, e_window, step=0.01, n_jobs=1):
    """Eigenvalue curves E(lam): flattened (lam, E) rows plus per-lam failures."""
    lam_grid = [float(v) for v in lam_grid]
    if any(v == 0.0 for v in lam_grid):
        raise ValueError("lam grid must exclude 0")
    e_lo, e_hi = e_window
    jobs = [(lam, mu, eps, e_lo, e_hi, step) for lam in lam_grid]
    if n_jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_scan_one_lambda, jobs))
    else:
        results = [_scan_one_lambda(j) for j in jobs]
    rows = []
    failures = []
    for lam, energies, err in results:
        if err is not None:
            failures.append((lam, err))
        rows.extend((lam, e) for e in energies)
    return rows, failures
