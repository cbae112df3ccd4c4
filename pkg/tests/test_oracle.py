"""Truncated number-basis oracle: matrix, eigensolver, parity, convergence."""

from pathlib import Path

import numpy as np
import pytest

from rabi_spectra import (
    DomainError,
    NoConvergence,
    build,
    converged_spectrum,
    jacobi_eigh,
    lowest_eigenvalues,
    parity_labels,
)
from rabi_spectra.oracle import (
    commutator_norm,
    parity_operator,
    read_reference_table,
    write_reference_table,
)

DATA = Path(__file__).parent / "data" / "oracle_reference.txt"


def test_build_pure_number_operator():
    h = build(0.0, 0.0, 0.0, 3)
    assert np.array_equal(h.matrix, np.diag([0.0, 0.0, 1.0, 1.0, 2.0, 2.0]))


def test_build_entry_table():
    lam, mu, eps = 0.7, 0.4, 0.2
    h = build(lam, mu, eps, 4).matrix
    assert h[0, 0] == pytest.approx(0.0 + eps)
    assert h[1, 1] == pytest.approx(0.0 - eps)
    assert h[4, 4] == pytest.approx(2.0 + eps)
    assert h[0, 1] == h[1, 0] == mu
    assert h[2, 0] == pytest.approx(lam * np.sqrt(1.0))      # s = +1
    assert h[3, 1] == pytest.approx(-lam * np.sqrt(1.0))     # s = -1
    assert h[4, 2] == pytest.approx(lam * np.sqrt(2.0))
    assert np.array_equal(h, h.T)
    with pytest.raises(ValueError):
        build(0.7, 0.4, 0.0, 1)


def test_decoupled_level_splitting():
    h = build(0.0, 0.4, 0.0, 16)
    assert lowest_eigenvalues(h, 4) == pytest.approx([-0.4, 0.4, 0.6, 1.4], abs=1e-12)


def test_jacobi_small_diagonal_case():
    w = jacobi_eigh(np.diag([0.0, 0.0, 1.0, 1.0]), compute_vectors=False)
    assert w[:2] == pytest.approx([0.0, 0.0], abs=0.0)


def test_jacobi_against_lapack_and_reconstruction():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(40, 40))
    m = 0.5 * (m + m.T)
    w, v = jacobi_eigh(m)
    assert np.max(np.abs(w - np.linalg.eigvalsh(m))) < 1e-10
    assert np.linalg.norm(v.T @ v - np.eye(40)) < 1e-12
    assert np.linalg.norm(v.T @ m @ v - np.diag(w)) < 1e-10 * np.linalg.norm(m)
    with pytest.raises(ValueError):
        jacobi_eigh(rng.normal(size=(4, 4)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))


def test_jacobi_budget_error():
    rng = np.random.default_rng(6)
    m = rng.normal(size=(30, 30))
    m = 0.5 * (m + m.T)
    with pytest.raises(NoConvergence) as exc_info:
        jacobi_eigh(m, max_sweeps=1)
    assert exc_info.value.last_result is not None


def test_displaced_oscillator_limit():
    # eps = 0 leaves each displaced level doubly degenerate (both spin
    # sectors); eps splits them to n - lam^2 +- eps
    vals, _ = converged_spectrum(0.7, 0.0, 0.0, 6, tol=1e-8)
    assert vals == pytest.approx(np.repeat(np.arange(3) - 0.49, 2), abs=1e-10)
    vals, _ = converged_spectrum(0.7, 0.0, 0.2, 8, tol=1e-8)
    exact = np.sort(np.concatenate([np.arange(4) - 0.49 - 0.2, np.arange(4) - 0.49 + 0.2]))
    assert vals == pytest.approx(exact, abs=1e-10)


def test_converged_spectrum_block_diagonal_is_exact_at_start():
    vals, n_used = converged_spectrum(0.0, 0.4, 0.0, 8, tol=1e-8)
    start = lowest_eigenvalues(build(0.0, 0.4, 0.0, 64), 8)
    assert np.max(np.abs(vals - start)) < 1e-12
    assert n_used == 128
    with pytest.raises(ValueError):
        converged_spectrum(0.7, 0.4, 0.0, 4, tol=1e-11)


def test_converged_spectrum_cap():
    with pytest.raises(NoConvergence) as exc_info:
        converged_spectrum(0.7, 0.4, 0.0, 4, tol=1e-8, n_start=2, n_cap=4)
    prev, n = exc_info.value.last_result
    assert n == 4
    assert len(prev) == 4


def test_variational_monotonicity():
    prev = None
    for n in (16, 32, 64):
        w = lowest_eigenvalues(build(0.7, 0.4, 0.0, n), 6)
        if prev is not None:
            assert np.all(w <= prev + 1e-12)
        prev = w


def test_spectrum_invariant_under_coupling_sign(rabi_oracle):
    vals, _ = rabi_oracle
    flipped = lowest_eigenvalues(build(-0.7, 0.4, 0.0, 128), 16)
    assert np.max(np.abs(flipped - vals)) < 1e-10


def test_strong_coupling_needs_deeper_truncation():
    # truncation error at a fixed shallow cutoff grows with the coupling
    errs = {}
    for lam in (0.7, 1.5):
        ref, _ = converged_spectrum(lam, 0.4, 0.0, 8, tol=1e-8)
        shallow = lowest_eigenvalues(build(lam, 0.4, 0.0, 8), 8)
        errs[lam] = float(np.max(np.abs(shallow - ref)))
    assert errs[1.5] > 10 * errs[0.7]


def test_parity_labels_decoupled_case():
    h = build(0.0, 0.4, 0.0, 16)
    w, v = jacobi_eigh(h.matrix)
    labels, expectations = parity_labels(h, w, v)
    # eigenstate |n> x |s>_x has E = n + s*mu and parity s * (-1)^n
    for n in range(4):
        for s in (1, -1):
            i = int(np.argmin(np.abs(w - (n + s * 0.4))))
            assert abs(w[i] - (n + s * 0.4)) < 1e-10
            assert labels[i] == s * (-1) ** n
            assert abs(expectations[i]) > 0.999


def test_parity_labels_guards_and_threshold(rabi_parity):
    h, w, v, labels, expectations = rabi_parity
    assert np.all(labels[:12] != 0)
    assert np.max(np.abs(np.abs(expectations[:12]) - 1.0)) < 1e-9
    hb = build(0.7, 0.4, 0.2, 8)
    wb, vb = jacobi_eigh(hb.matrix)
    with pytest.raises(DomainError):
        parity_labels(hb, wb, vb)
    # an impossible threshold flags everything as ambiguous
    all_ambiguous, _ = parity_labels(h, w, v, threshold=1.01)
    assert np.all(all_ambiguous == 0)


def test_parity_commutes_only_without_bias():
    assert commutator_norm(build(0.7, 0.4, 0.0, 40)) < 1e-12
    c1 = commutator_norm(build(0.7, 0.4, 0.1, 40))
    c2 = commutator_norm(build(0.7, 0.4, 0.2, 40))
    assert c1 > 1e-3
    assert c2 == pytest.approx(2.0 * c1, rel=0.05)


def test_parity_operator_shape():
    p = parity_operator(3)
    assert np.array_equal(p, p.T)
    assert np.array_equal(p @ p, np.eye(6))


def test_reference_regression():
    rows = read_reference_table(DATA)
    assert len(rows) == 3
    for lam, mu, eps, n_used, values in rows:
        fresh = lowest_eigenvalues(build(lam, mu, eps, n_used), len(values))
        assert np.max(np.abs(fresh - values)) < 1e-9


def test_reference_roundtrip(tmp_path):
    rows = [(0.5, 0.25, 0.0, 64, np.array([-0.1, 0.2, 0.3]))]
    path = tmp_path / "ref.txt"
    write_reference_table(path, rows)
    back = read_reference_table(path)
    assert back[0][3] == 64
    assert np.array_equal(back[0][4], rows[0][4])
