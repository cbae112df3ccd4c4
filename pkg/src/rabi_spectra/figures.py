"""Figure rendering for the CLI report path, plus standalone plot scripts.

Every figure-producing subcommand writes three files side by side: the CSV
data, a rendered PNG, and a small matplotlib script that regenerates the panel
from the CSV alone (referenced by relative filename, so the triple can be
moved around together).
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_scan(png_path, axis_name, axis_values, w, scale, title):
    """Normalized determinant sweep with its zero axis."""
    plt = _pyplot()
    with np.errstate(invalid="ignore", divide="ignore"):
        wn = np.asarray(w) / np.asarray(scale)
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=150)
    ax.plot(axis_values, wn, lw=0.9, color="C0")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel(axis_name)
    ax.set_ylabel("W / scale")
    ax.set_title(title)
    ax.set_ylim(-1.05, 1.05)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)


def render_contours(png_path, x, z, g_plus, g_minus, title):
    """Zero-level contours of both parity functions on the (x, z) plane."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
    xx, zz = np.meshgrid(x, z, indexing="ij")
    ax.contour(xx, zz, g_plus, levels=[0.0], colors="C0", linestyles="solid")
    ax.contour(xx, zz, g_minus, levels=[0.0], colors="C3", linestyles="dashed")
    ax.set_xlabel("x")
    ax.set_ylabel("z")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)


def _robust_ylim(*arrays, quantile=0.98, pad=1.2):
    stack = np.concatenate([np.asarray(a)[np.isfinite(a)] for a in arrays])
    if stack.size == 0:
        return -1.0, 1.0
    m = np.quantile(np.abs(stack), quantile) * pad
    m = m if m > 0 else 1.0
    return -m, m


def render_parity_curve(png_path, x, g, gp, z_star, title):
    """G and G' along x at fixed z*, clipped to a robust band around zero."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=150)
    ax.plot(x, g, lw=1.0, color="C0", label="G")
    ax.plot(x, gp, lw=1.0, color="C1", ls=":", label="G'")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_ylim(*_robust_ylim(g, gp))
    ax.set_xlabel("x")
    ax.set_ylabel(f"G, G' at z* = {z_star:g}")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)


def render_spectrum_map(png_path, lam, energy, title):
    """Eigenvalue curves over the coupling axis as a dense point cloud."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
    ax.plot(lam, energy, ".", ms=1.5, color="C0")
    ax.set_xlabel("lambda")
    ax.set_ylabel("E")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)


_SCRIPT_HEADER = """#!/usr/bin/env python3
\"\"\"Regenerate the panel from {csv_name} (kept in the same directory).\"\"\"
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

data = np.genfromtxt("{csv_name}", delimiter=",", names=True)
"""

_SCRIPT_BODIES = {
    "scan": """
axis = data["{axis}"]
with np.errstate(invalid="ignore", divide="ignore"):
    wn = data["W"] / data["scale"]
fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=150)
ax.plot(axis, wn, lw=0.9, color="C0")
ax.axhline(0.0, color="k", lw=0.6)
ax.set_xlabel("{axis}")
ax.set_ylabel("W / scale")
ax.set_ylim(-1.05, 1.05)
fig.tight_layout()
fig.savefig("{png_name}")
""",
    "contours": """
x = np.unique(data["x"])
z = np.unique(data["z"])
gp = data["Gplus"].reshape(len(x), len(z))
gm = data["Gminus"].reshape(len(x), len(z))
xx, zz = np.meshgrid(x, z, indexing="ij")
fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
ax.contour(xx, zz, gp, levels=[0.0], colors="C0", linestyles="solid")
ax.contour(xx, zz, gm, levels=[0.0], colors="C3", linestyles="dashed")
ax.set_xlabel("x")
ax.set_ylabel("z")
fig.tight_layout()
fig.savefig("{png_name}")
""",
    "parity": """
x, g, gp = data["x"], data["G"], data["Gprime"]
band = np.concatenate([g[np.isfinite(g)], gp[np.isfinite(gp)]])
m = 1.2 * np.quantile(np.abs(band), 0.98) if band.size else 1.0
fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=150)
ax.plot(x, g, lw=1.0, color="C0", label="G")
ax.plot(x, gp, lw=1.0, color="C1", ls=":", label="G'")
ax.axhline(0.0, color="k", lw=0.6)
ax.set_ylim(-m, m)
ax.set_xlabel("x")
ax.set_ylabel("G, G'")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig("{png_name}")
""",
    "spectrum-map": """
fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
ax.plot(data["lambda"], data["E"], ".", ms=1.5, color="C0")
ax.set_xlabel("lambda")
ax.set_ylabel("E")
fig.tight_layout()
fig.savefig("{png_name}")
""",
}


def write_plot_script(path, kind, csv_name, png_name, axis="x"):
    """Emit a standalone matplotlib script regenerating the panel from the CSV."""
    body = _SCRIPT_BODIES[kind].format(csv_name=csv_name, png_name=png_name, axis=axis)
    text = _SCRIPT_HEADER.format(csv_name=csv_name) + body
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
