"""Small dense-polynomial helpers used by the ODE machinery.

Coefficients are stored in ascending order: ``coeffs[k]`` multiplies ``z**k``.
"""

import numpy as np


def polyval(coeffs, z):
    """Evaluate a polynomial (ascending coefficients) by Horner's rule."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def polyshift(coeffs, s):
    """Coefficients of P(s + t) in powers of t (in-place Taylor shift)."""
    w = np.array(coeffs, dtype=float)
    n = len(w)
    for k in range(n):
        for i in range(n - 2, k - 1, -1):
            w[i] += s * w[i + 1]
    return w


def series_divide(num, den, n):
    """First ``n`` coefficients of the power series num(t)/den(t), den[0] != 0."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    if den[0] == 0.0:
        raise ZeroDivisionError("series division needs a nonzero constant term")
    q = np.zeros(n)
    for k in range(n):
        acc = num[k] if k < len(num) else 0.0
        jmax = min(k, len(den) - 1)
        for j in range(1, jmax + 1):
            acc -= den[j] * q[k - j]
        q[k] = acc / den[0]
    return q


def trailing_zero_order(coeffs, rel_tol=1e-13):
    """Multiplicity of the root t = 0, judged relative to the largest coefficient."""
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return len(c)
    m = 0
    while m < len(c) and abs(c[m]) <= rel_tol * scale:
        m += 1
    return m


def real_roots(coeffs, imag_tol=1e-9):
    """Real roots of a polynomial with ascending coefficients."""
    c = np.asarray(coeffs, dtype=float)
    nz = np.nonzero(np.abs(c) > 0)[0]
    if nz.size == 0 or nz[-1] == 0:
        return np.array([])
    c = c[: nz[-1] + 1]
    roots = np.roots(c[::-1])
    return np.sort(roots[np.abs(roots.imag) < imag_tol].real)
