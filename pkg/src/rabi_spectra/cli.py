"""Command-line front end: figure reproduction, spectra, and validation.

Subcommands
-----------
scan-w    sweep of the normalized spectral determinant over x or E (CSV/JSON)
spectrum  isolated roots, optionally merged with oracle-only resonant levels
fig1      zero contours of both parity functions on the (x, z) plane
fig2      G and G' along x at a fixed z* (the single-condition counterexample)
fig5      spectrum of the symmetry-broken model over a coupling grid
validate  invariant suite; one PASS/FAIL line per check

Figure subcommands write ``<name>.csv``, ``<name>.png`` and a standalone
``<name>_plot.py`` next to each other.  CSV output is byte-deterministic
(17 significant digits, LF endings).  ``RABI_SPECTRA_THREADS`` caps the
process parallelism of the fig5 coupling sweep.

Exit codes: 0 success, 1 failed validation, 2 invalid configuration,
3 numerical failure (the message names the failing x).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import figures, gfunction, spectrum, validation
from .errors import InvalidConfig, RabiSpectraError
from .model import E_from_x, in_exclusion_zone, x_from_E
from .spectrum import _w_values, scan_roots, spectrum_vs_lambda, with_oracle_fill


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_table(header, rows, out_path):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _write_records(header, rows, out_path, fmt):
    if fmt == "csv":
        _write_table(header, rows, out_path)
        return
    records = [
        {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in zip(header, row)}
        for row in rows
    ]
    text = json.dumps(records, separators=(",", ":")) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _parse_range(text, n_fields):
    parts = text.split(":")
    if len(parts) != n_fields:
        raise InvalidConfig(f"expected {'lo:hi:step' if n_fields == 3 else 'lo:hi'}, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidConfig(f"bad range {text!r}: {exc}") from None
    return vals


def _grid(lo, hi, step):
    """Points lo, lo+step, ... up to hi inclusive; reversed bounds are empty."""
    if step <= 0:
        raise InvalidConfig(f"step must be positive, got {step!r}")
    if hi < lo:
        return []
    count = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + k * step for k in range(count + 1)]


@dataclass
class RunConfig:
    """Validated run settings shared by the heun-path subcommands."""

    lam: float
    mu: float
    eps: float
    y_star: float = 0.5

    def __post_init__(self):
        if self.lam == 0.0:
            raise InvalidConfig("lambda must be nonzero for determinant subcommands")
        if self.mu < 0.0:
            raise InvalidConfig("mu must be >= 0")
        if not 0.25 <= self.y_star <= 0.75:
            raise InvalidConfig("y-star must lie in [0.25, 0.75]")


def _n_jobs():
    raw = os.environ.get("RABI_SPECTRA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidConfig(f"RABI_SPECTRA_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def _locate_failure(x_values, lam, mu, eps, y_star, exc):
    """Best-effort identification of the first failing grid point."""
    for xv in x_values:
        try:
            _w_values(np.array([xv]), lam, mu, eps, y_star)
        except RabiSpectraError:
            raise RabiSpectraError(f"determinant evaluation failed at x = {xv!r}: {exc}")
    raise exc


def cmd_scan_w(args):
    cfg = RunConfig(args.lam, args.mu, args.eps, args.y_star)
    if args.E is not None:
        lo, hi, step = _parse_range(args.E, 3)
        e_vals = _grid(lo, hi, step)
        x_vals = [x_from_E(e, cfg.lam) for e in e_vals]
    else:
        lo, hi, step = _parse_range(args.x, 3)
        x_vals = _grid(lo, hi, step)
        e_vals = [E_from_x(x, cfg.lam) for x in x_vals]
    header = ["x", "E", "W", "scale", "excluded"]
    if not x_vals:
        _write_records(header, [], args.out, args.format)
        return 0
    x_arr = np.array(x_vals)
    excluded = in_exclusion_zone(x_arr, cfg.eps)
    xm = np.where(excluded, np.nan, x_arr)
    try:
        w, scale, bad = _w_values(xm, cfg.lam, cfg.mu, cfg.eps, cfg.y_star)
    except RabiSpectraError as exc:
        _locate_failure(x_arr[~excluded], cfg.lam, cfg.mu, cfg.eps, cfg.y_star, exc)
        raise
    rows = [
        (x_vals[i], e_vals[i], float(w[i]), float(scale[i]), int(excluded[i]))
        for i in range(len(x_vals))
    ]
    _write_records(header, rows, args.out, args.format)
    if args.plot is not None:
        axis = "E" if args.E is not None else "x"
        figures.render_scan(
            args.plot,
            axis,
            e_vals if axis == "E" else x_vals,
            w,
            scale,
            f"lam={cfg.lam:g} mu={cfg.mu:g} eps={cfg.eps:g}",
        )
    return 0


def cmd_spectrum(args):
    cfg = RunConfig(args.lam, args.mu, args.eps, args.y_star)
    if args.E is not None:
        lo, hi = _parse_range(args.E, 2)
        x_lo, x_hi = x_from_E(lo, cfg.lam), x_from_E(hi, cfg.lam)
    else:
        x_lo, x_hi = _parse_range(args.x, 2)
    if args.step <= 0 or args.step > 0.01:
        raise InvalidConfig("spectrum scan step must be in (0, 0.01]")
    if not x_hi > x_lo:
        raise InvalidConfig("scan window bounds out of order")
    report = scan_roots(cfg.lam, cfg.mu, cfg.eps, x_lo, x_hi, args.step, cfg.y_star)
    if args.oracle:
        report = with_oracle_fill(report)
    rows = [
        (i, r.x, r.E, r.provenance, r.residual) for i, r in enumerate(report.records)
    ]
    _write_records(["index", "x", "E", "provenance", "residual"], rows, args.out, args.format)
    return 0


def _figure_paths(outdir, stem):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{stem}.csv", out / f"{stem}.png", out / f"{stem}_plot.py"


def cmd_fig1(args):
    cfg = RunConfig(args.lam, args.mu, 0.0)
    x_lo, x_hi = _parse_range(args.x, 2)
    z_lo, z_hi = _parse_range(args.z, 2)
    if args.nx < 2 or args.nz < 2:
        raise InvalidConfig("grid resolution must be at least 2x2")
    if not (abs(z_lo) < abs(cfg.lam) and abs(z_hi) < abs(cfg.lam)):
        raise InvalidConfig("z range must lie inside (-|lambda|, |lambda|)")
    grid = gfunction.g_grid((x_lo, x_hi), (z_lo, z_hi), cfg.lam, cfg.mu, (args.nx, args.nz))
    csv_path, png_path, script_path = _figure_paths(args.outdir, "fig1")
    rows = [
        (grid.x[i], grid.z[j], float(grid.g_plus[i, j]), float(grid.g_minus[i, j]))
        for i in range(len(grid.x))
        for j in range(len(grid.z))
    ]
    _write_table(["x", "z", "Gplus", "Gminus"], rows, csv_path)
    figures.render_contours(
        png_path, grid.x, grid.z, grid.g_plus, grid.g_minus,
        f"parity-function zero contours, lam={cfg.lam:g} mu={cfg.mu:g}",
    )
    figures.write_plot_script(script_path, "contours", csv_path.name, png_path.name)
    print(f"wrote {csv_path} {png_path} {script_path}")
    return 0


def cmd_fig2(args):
    cfg = RunConfig(args.lam, args.mu, 0.0)
    lo, hi, step = _parse_range(args.x, 3)
    if not abs(args.z_star) < abs(cfg.lam):
        raise InvalidConfig("z-star must lie inside (-|lambda|, |lambda|)")
    x_vals = np.array(_grid(lo, hi, step))
    g, gp, _, _ = gfunction.g_curve(args.z_star, x_vals, cfg.lam, cfg.mu, args.sigma)
    csv_path, png_path, script_path = _figure_paths(args.outdir, "fig2")
    rows = [(float(x_vals[i]), float(g[i]), float(gp[i])) for i in range(len(x_vals))]
    _write_table(["x", "G", "Gprime"], rows, csv_path)
    figures.render_parity_curve(
        png_path, x_vals, g, gp, args.z_star,
        f"sigma={args.sigma:+d}, lam={cfg.lam:g} mu={cfg.mu:g}",
    )
    figures.write_plot_script(script_path, "parity", csv_path.name, png_path.name)
    print(f"wrote {csv_path} {png_path} {script_path}")
    return 0


def cmd_fig5(args):
    if args.mu < 0:
        raise InvalidConfig("mu must be >= 0")
    g_lo, g_hi, g_step = _parse_range(args.lambda_grid, 3)
    e_lo, e_hi = _parse_range(args.E_window, 2)
    if e_hi <= e_lo:
        raise InvalidConfig("empty energy window")
    lam_grid = [v for v in _grid(g_lo, g_hi, g_step) if v != 0.0]
    if not lam_grid:
        raise InvalidConfig("lambda grid is empty")
    rows, failures = spectrum_vs_lambda(
        args.mu, args.eps, lam_grid, (e_lo, e_hi), args.step, n_jobs=_n_jobs()
    )
    csv_path, png_path, script_path = _figure_paths(args.outdir, "fig5")
    _write_table(["lambda", "E"], rows, csv_path)
    for lam, err in failures:
        print(f"note: lambda={lam:g} skipped: {err}", file=sys.stderr)
    figures.render_spectrum_map(
        png_path,
        [r[0] for r in rows],
        [r[1] for r in rows],
        f"spectrum vs coupling, mu={args.mu:g} eps={args.eps:g}",
    )
    figures.write_plot_script(script_path, "spectrum-map", csv_path.name, png_path.name)
    print(f"wrote {csv_path} {png_path} {script_path}")
    return 0


def cmd_validate(args):
    if args.tol is not None and args.tol <= 0:
        raise InvalidConfig("tolerance must be positive")
    checks = validation.run_validation(seed=args.seed, quick=args.quick, tol=args.tol)
    for check in checks:
        print(check.line())
    return 0 if all(c.passed for c in checks) else 1


def _add_model_args(p, lam=0.7, mu=0.4, eps=0.0):
    p.add_argument("--lambda", dest="lam", type=float, default=lam, help="coupling (nonzero)")
    p.add_argument("--mu", type=float, default=mu, help="half level separation (>= 0)")
    p.add_argument("--eps", type=float, default=eps, help="symmetry-breaking bias")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rabi-spectra",
        description="Spectra of the (generalized) quantum Rabi model via the "
        "Wronskian spectral determinant, with figure-reproduction and "
        "validation workflows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-w", help="sweep the normalized spectral determinant")
    _add_model_args(p)
    p.add_argument("--x", default="0:6:0.002", help="x sweep as lo:hi:step")
    p.add_argument("--E", default=None, help="E sweep as lo:hi:step (overrides --x)")
    p.add_argument("--y-star", dest="y_star", type=float, default=0.5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--plot", default=None, help="also render a PNG to this path")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_scan_w)

    p = sub.add_parser("spectrum", help="isolate determinant roots (optionally + oracle)")
    _add_model_args(p)
    p.add_argument("--x", default="0:6", help="x window as lo:hi")
    p.add_argument("--E", default=None, help="E window as lo:hi (overrides --x)")
    p.add_argument("--step", type=float, default=0.01, help="scan step (<= 0.01)")
    p.add_argument("--y-star", dest="y_star", type=float, default=0.5)
    p.add_argument("--oracle", action="store_true", help="merge oracle-only rows in exclusion zones")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fig1", help="parity-function zero contours on the (x, z) plane")
    _add_model_args(p)
    p.add_argument("--x", default="0:4", help="x range as lo:hi")
    p.add_argument("--z", default="-0.65:0.65", help="z range as lo:hi")
    p.add_argument("--nx", type=int, default=400)
    p.add_argument("--nz", type=int, default=200)
    p.add_argument("--outdir", default=".")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", help="G and G' along x at fixed z*")
    _add_model_args(p)
    p.add_argument("--z-star", dest="z_star", type=float, default=-0.43)
    p.add_argument("--x", default="0:4:0.001", help="x sweep as lo:hi:step")
    p.add_argument("--sigma", type=int, choices=(1, -1), default=1)
    p.add_argument("--outdir", default=".")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig5", help="spectrum of the symmetry-broken model vs coupling")
    p.add_argument("--mu", type=float, default=0.7)
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--lambda-grid", dest="lambda_grid", default="0.05:1.5:0.01")
    p.add_argument("--E-window", dest="E_window", default="-1:6")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--outdir", default=".")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_fig5)

    p = sub.add_parser("validate", help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="5 draws per check, small windows")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=None, help="override series-identity thresholds")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RabiSpectraError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
