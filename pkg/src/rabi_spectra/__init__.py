"""Spectra of the quantum Rabi model and its symmetry-broken generalization.

The spectral condition is the vanishing of a Wronskian-type determinant built
from the two local confluent-Heun solutions; a single-point zero of the older
parity-function criterion is shown (and tested) to be insufficient.  Every
result is cross-checked against an independent truncated number-basis
diagonalization.
"""

from .errors import (
    DomainError,
    InvalidConfig,
    NoConvergence,
    PoleProximity,
    RabiSpectraError,
    ResonantExponents,
)
from .frobenius import (
    FrobeniusSolution,
    OverlapRegion,
    evaluate,
    indicial_exponents,
    local_series,
    overlap_regions,
    pairwise_wronskian,
)
from .gfunction import (
    PhiCoefficients,
    ZeroClassification,
    classify_zero,
    g_grid,
    g_sigma,
    g_ode_residual,
    phi_coefficients,
    scan_g_zeros,
)
from .heun import HeunSeries, h1_h2, heun_ode_spec, heunc_eval, heunc_series
from .model import (
    EXCLUSION_DELTA,
    HeunLocalParams,
    ModelParams,
    OdeSpec,
    eliminated_ode,
    heun_params,
    in_exclusion_zone,
    make_ode,
    mu_nu_tilde,
    x_from_E,
    y_gauge,
    y_gauge_deriv,
    z_to_y,
)
from .oracle import (
    TruncatedHamiltonian,
    build,
    converged_spectrum,
    jacobi_eigh,
    lowest_eigenvalues,
    parity_labels,
)
from .spectrum import (
    SpectrumReport,
    scan_roots,
    spectral_determinant,
    spectrum_vs_lambda,
    with_oracle_fill,
    wronskian_invariance_check,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EXCLUSION_DELTA",
    "FrobeniusSolution",
    "HeunLocalParams",
    "HeunSeries",
    "InvalidConfig",
    "ModelParams",
    "NoConvergence",
    "OdeSpec",
    "OverlapRegion",
    "PhiCoefficients",
    "PoleProximity",
    "RabiSpectraError",
    "ResonantExponents",
    "SpectrumReport",
    "TruncatedHamiltonian",
    "ZeroClassification",
    "build",
    "classify_zero",
    "converged_spectrum",
    "eliminated_ode",
    "evaluate",
    "g_grid",
    "g_ode_residual",
    "g_sigma",
    "h1_h2",
    "heun_ode_spec",
    "heun_params",
    "heunc_eval",
    "heunc_series",
    "in_exclusion_zone",
    "indicial_exponents",
    "jacobi_eigh",
    "local_series",
    "lowest_eigenvalues",
    "make_ode",
    "mu_nu_tilde",
    "overlap_regions",
    "pairwise_wronskian",
    "parity_labels",
    "phi_coefficients",
    "scan_g_zeros",
    "scan_roots",
    "spectral_determinant",
    "spectrum_vs_lambda",
    "with_oracle_fill",
    "wronskian_invariance_check",
    "x_from_E",
    "y_gauge",
    "y_gauge_deriv",
    "z_to_y",
    "__version__",
]
