"""Independent ground truth: truncated number-basis diagonalization.

The operator behind the coupled first-order system is

    H = a'a + eps * s_z + mu * s_x + lam * s_z (a + a'),

acting on number states |n> tensored with a two-level system (s = +-1), which
follows from the correspondence a -> d/dz, a' -> z applied to the system.  In
the ordered basis |n, s> (index 2n for s = +1, 2n + 1 for s = -1) the nonzero
elements are

    <n, s|H|n, s>   = n + s * eps
    <n,-s|H|n, s>   = mu
    <n+1, s|H|n, s> = s * lam * sqrt(n + 1).

Eigenvalues come from an in-repo cyclic Jacobi solver so this oracle shares no
numerics with the series/Wronskian path.  For eps = 0 the parity operator
(number parity tensor spin flip) commutes with H and labels the eigenvectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergence


@dataclass(frozen=True)
class TruncatedHamiltonian:
    lam: float
    mu: float
    eps: float
    n_levels: int         # number states 0 .. n_levels-1
    matrix: np.ndarray    # dense symmetric, dimension 2*n_levels

    @property
    def dim(self):
        return 2 * self.n_levels

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def build(lam, mu, eps, n_levels) -> TruncatedHamiltonian:
    """Assemble the truncation with ``n_levels`` number states (>= 2)."""
    if n_levels < 2:
        raise ValueError("need at least 2 number states")
    dim = 2 * n_levels
    h = np.zeros((dim, dim))
    n = np.arange(n_levels)
    h[2 * n, 2 * n] = n + eps
    h[2 * n + 1, 2 * n + 1] = n - eps
    h[2 * n, 2 * n + 1] = mu
    h[2 * n + 1, 2 * n] = mu
    root = lam * np.sqrt(n[:-1] + 1.0)
    for s_idx, sign in ((0, 1.0), (1, -1.0)):
        rows = 2 * (n[:-1] + 1) + s_idx
        cols = 2 * n[:-1] + s_idx
        h[rows, cols] = sign * root
        h[cols, rows] = sign * root
    return TruncatedHamiltonian(lam=lam, mu=mu, eps=eps, n_levels=n_levels, matrix=h)


def parity_operator(n_levels) -> np.ndarray:
    """Matrix of (number parity) tensor (spin flip): <n,-s|P|n,s> = (-1)^n."""
    dim = 2 * n_levels
    p = np.zeros((dim, dim))
    n = np.arange(n_levels)
    sign = (-1.0) ** n
    p[2 * n, 2 * n + 1] = sign
    p[2 * n + 1, 2 * n] = sign
    return p


def jacobi_eigh(matrix, tol=1e-12, max_sweeps=100, compute_vectors=True):
    """Cyclic Jacobi diagonalization of a dense symmetric matrix.

    Sweeps rotate away off-diagonal elements above a per-sweep threshold until
    the off-diagonal Frobenius norm falls below ``tol`` times the Frobenius
    norm of the input.  Returns eigenvalues ascending and, optionally, the
    matching orthonormal eigenvector columns.
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.max(np.abs(a))))):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n) if compute_vectors else None
    hnorm = float(np.linalg.norm(a))
    if hnorm == 0.0:
        w = np.zeros(n)
        return (w, v) if compute_vectors else w
    target = tol * hnorm
    converged = False
    for _ in range(max_sweeps):
        off2 = a * a
        np.fill_diagonal(off2, 0.0)
        off = math.sqrt(float(np.sum(off2)))
        if off <= target:
            converged = True
            break
        thresh = max(off / n, target / n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < thresh:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = (
                    math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                    if theta != 0.0
                    else 1.0
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = a[q, p] = 0.0
                if compute_vectors:
                    v_p = v[:, p].copy()
                    v_q = v[:, q].copy()
                    v[:, p] = c * v_p - s * v_q
                    v[:, q] = s * v_p + c * v_q
    if not converged:
        off2 = a * a
        np.fill_diagonal(off2, 0.0)
        off = math.sqrt(float(np.sum(off2)))
        if off > target:
            raise NoConvergence(
                f"Jacobi sweeps exhausted at off/norm = {off / hnorm:.3e}",
                last_result=np.sort(np.diag(a)),
            )
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    if compute_vectors:
        return w[order], v[:, order]
    return w[order]


def lowest_eigenvalues(h: TruncatedHamiltonian, k) -> np.ndarray:
    """The k smallest eigenvalues of the truncation, ascending."""
    if k > h.dim:
        raise ValueError(f"k = {k} exceeds matrix dimension {h.dim}")
    w = jacobi_eigh(h.matrix, compute_vectors=False)
    return w[:k]


def converged_spectrum(lam, mu, eps, k, tol=1e-8, n_start=64, n_cap=2048):
    """Double the truncation until the k lowest eigenvalues move < tol.

    Returns (eigenvalues, n_used).  Raises NoConvergence (with the last
    iterate attached) if the cap is reached.
    """
    if tol < 1e-10:
        raise ValueError("tol below 1e-10 is not resolvable by the truncation study")
    n = n_start
    prev = lowest_eigenvalues(build(lam, mu, eps, n), k)
    while n < n_cap:
        n *= 2
        cur = lowest_eigenvalues(build(lam, mu, eps, n), k)
        if float(np.max(np.abs(cur - prev))) < tol:
            return cur, n
        prev = cur
    raise NoConvergence(
        f"truncation study hit the cap n = {n_cap}", last_result=(prev, n)
    )


def parity_labels(h: TruncatedHamiltonian, eigvals, eigvecs, threshold=0.99):
    """Parity sign per eigenvector from the expectation of the parity operator.

    Only defined for eps = 0 (broken symmetry leaves nothing to label).
    Expectations with |<P>| <= threshold are flagged with label 0 (typically
    near level crossings).  Returns (labels, expectations).
    """
    if h.eps != 0.0:
        raise DomainError("parity labels are only defined for eps = 0")
    p = parity_operator(h.n_levels)
    expectations = np.einsum("ij,ij->j", eigvecs, p @ eigvecs)
    labels = np.where(np.abs(expectations) > threshold, np.sign(expectations), 0.0)
    return labels.astype(int), expectations


def commutator_norm(h: TruncatedHamiltonian) -> float:
    """Frobenius norm of [P, H] relative to the norm of H (diagnostic)."""
    p = parity_operator(h.n_levels)
    c = p @ h.matrix - h.matrix @ p
    return float(np.linalg.norm(c) / np.linalg.norm(h.matrix))


def write_reference_table(path, rows):
    """Write regression rows ``lambda mu epsilon N_used k E_1 .. E_k``."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# lambda mu epsilon N_used k E_1 ... E_k\n")
        for lam, mu, eps, n_used, values in rows:
            vals = " ".join(format(v, ".17g") for v in values)
            fh.write(f"{lam:.17g} {mu:.17g} {eps:.17g} {n_used} {len(values)} {vals}\n")


def read_reference_table(path):
    """Parse rows written by :func:`write_reference_table`."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            lam, mu, eps = (float(v) for v in parts[:3])
            n_used, k = int(parts[3]), int(parts[4])
            values = np.array([float(v) for v in parts[5 : 5 + k]])
            out.append((lam, mu, eps, n_used, values))
    return out
