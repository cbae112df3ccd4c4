"""Shared fixtures: converged oracle spectra and determinant root scans."""

import numpy as np
import pytest

from rabi_spectra import oracle, spectrum

LAM, MU = 0.7, 0.4


@pytest.fixture(scope="session")
def rabi_oracle():
    """Converged low spectrum of the symmetric benchmark (lam=0.7, mu=0.4)."""
    vals, n_used = oracle.converged_spectrum(LAM, MU, 0.0, 16, tol=1e-8)
    return vals, n_used


@pytest.fixture(scope="session")
def shifted_oracle():
    """Converged low spectrum of the broken-symmetry benchmark (eps=0.2)."""
    vals, n_used = oracle.converged_spectrum(LAM, MU, 0.2, 16, tol=1e-8)
    return vals, n_used


@pytest.fixture(scope="session")
def rabi_parity():
    """Eigenpairs plus parity labels at a truncation deep enough for E < 6."""
    h = oracle.build(LAM, MU, 0.0, 64)
    w, v = oracle.jacobi_eigh(h.matrix)
    labels, expectations = oracle.parity_labels(h, w, v)
    return h, w, v, labels, expectations


@pytest.fixture(scope="session")
def rabi_scan():
    """Determinant roots of the symmetric benchmark over E in (-1, 5.1)."""
    return spectrum.scan_roots(LAM, MU, 0.0, -0.51, 5.59, 0.01)


@pytest.fixture(scope="session")
def shifted_scan():
    return spectrum.scan_roots(LAM, MU, 0.2, -0.51, 5.59, 0.01)


def assert_close(a, b, rel, floor=0.0):
    a = float(a)
    b = float(b)
    assert abs(a - b) <= rel * max(abs(a), abs(b), floor), f"{a!r} vs {b!r}"


def rel_err(a, b, floor=1e-300):
    return abs(a - b) / max(abs(a), abs(b), floor)


def nearest(values, target):
    values = np.asarray(values)
    return values[np.argmin(np.abs(values - target))]
