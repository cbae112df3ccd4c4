"""Parameter maps, the eliminated scalar ODE, and coordinate/gauge changes."""

import math

import numpy as np
import pytest

from rabi_spectra import (
    DomainError,
    HeunLocalParams,
    ModelParams,
    eliminated_ode,
    heun_ode_spec,
    heun_params,
    in_exclusion_zone,
    indicial_exponents,
    make_ode,
    mu_nu_tilde,
    x_from_E,
    y_gauge,
    y_gauge_deriv,
    z_to_y,
)
from rabi_spectra.model import E_from_x, exclusion_segments, y_to_z

from conftest import rel_err


def test_x_from_E_identity_cases():
    assert x_from_E(0.0, 0.0) == 0.0
    assert x_from_E(-0.49, 0.7) == pytest.approx(0.0, abs=1e-15)
    assert x_from_E(1.0, 0.7) == pytest.approx(1.49, abs=1e-15)


def test_model_params_recomputes_x():
    p = ModelParams(E=1.0, lam=0.7, mu=0.4)
    assert p.x == pytest.approx(1.49, abs=1e-15)
    q = ModelParams.from_x(1.49, 0.7, 0.4)
    assert q.E == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        ModelParams(E=0.0, lam=0.7, mu=-0.1)


def test_heun_params_reference_point():
    p = ModelParams.from_x(0.0, 0.7, 0.4, 0.0)
    a0, a1 = heun_params(p)
    assert (a0.alpha, a0.beta, a0.gamma) == pytest.approx((1.96, 0.0, -1.0), abs=1e-14)
    assert (a0.delta, a0.eta) == pytest.approx((0.98, -0.64), abs=1e-14)
    assert (a1.alpha, a1.beta, a1.gamma) == pytest.approx((-1.96, -1.0, 0.0), abs=1e-14)
    assert (a1.delta, a1.eta) == pytest.approx((-0.98, 0.34), abs=1e-14)


def test_heun_params_all_couplings_off():
    p = ModelParams.from_x(0.0, 0.0, 0.0, 0.0)
    a0, _ = heun_params(p)
    assert (a0.alpha, a0.beta, a0.gamma, a0.delta, a0.eta) == pytest.approx(
        (0.0, 0.0, -1.0, 0.0, 0.5), abs=1e-15
    )


def test_mu_nu_tilde_values():
    a = HeunLocalParams(1.96, 0.0, -1.0, 0.98, -0.64)
    assert mu_nu_tilde(a) == pytest.approx((2.12, -0.16), abs=1e-14)
    assert mu_nu_tilde(HeunLocalParams(0, 0, 0, 0, 0)) == (0.0, 0.0)
    assert mu_nu_tilde(HeunLocalParams(0, 0, 0, 1, 0)) == (0.0, 1.0)


def test_companion_slot_rule_is_involution():
    a = HeunLocalParams(1.7, -0.3, -2.1, 0.55, 0.9)
    b = a.swapped()
    assert (b.alpha, b.beta, b.gamma, b.delta, b.eta) == (
        -1.7,
        -2.1,
        -0.3,
        -0.55,
        0.55 + 0.9,
    )
    c = b.swapped()
    assert (c.alpha, c.beta, c.gamma, c.delta, c.eta) == pytest.approx(
        (a.alpha, a.beta, a.gamma, a.delta, a.eta), abs=1e-15
    )


def test_eliminated_ode_pointwise():
    assert eliminated_ode(ModelParams(E=0.3, lam=0.7, mu=0.4)).p(0.0) == pytest.approx(
        1.0 / 0.7, rel=1e-15
    )
    assert eliminated_ode(ModelParams(E=0.3, lam=0.7, mu=0.4, eps=0.2)).p(
        0.0
    ) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(DomainError):
        eliminated_ode(ModelParams(E=0.3, lam=0.0, mu=0.4))


def test_eliminated_ode_indicial_exponents():
    # independent oracle: numerical limits of (z-s)p and (z-s)^2 q, then the
    # indicial quadratic solved directly
    p = ModelParams.from_x(1.3, 0.7, 0.4, 0.0)
    ode = eliminated_ode(p)
    for s, expected in ((-0.7, (1.3, 0.0)), (0.7, (2.3, 0.0))):
        h = 1e-7
        p0 = (s + h - s) * ode.p(s + h)
        q0 = (s + h - s) ** 2 * ode.q(s + h)
        roots = np.roots([1.0, p0 - 1.0, q0])
        assert sorted(roots.real, reverse=True) == pytest.approx(expected, abs=1e-5)
        assert indicial_exponents(ode, s) == pytest.approx(expected, abs=1e-12)


def test_eliminated_ode_indicial_general_offsets():
    p = ModelParams.from_x(2.45, 0.9, 0.3, 0.17)
    ode = eliminated_ode(p)
    assert indicial_exponents(ode, -0.9) == pytest.approx((p.x - p.eps, 0.0), abs=1e-10)
    assert indicial_exponents(ode, 0.9) == pytest.approx(
        (1.0 + p.x + p.eps, 0.0), abs=1e-10
    )


def test_two_routes_to_the_scalar_ode_agree():
    # Heun-form coefficients mapped back through the gauge reproduce the
    # eliminated ODE's p and q pointwise.
    p = ModelParams.from_x(1.3, 0.7, 0.4, 0.15)
    lam = p.lam
    ode = eliminated_ode(p)
    a0, _ = heun_params(p)
    heun_ode = heun_ode_spec(a0)
    for y in np.linspace(0.07, 0.93, 20):
        z = y_to_z(y, lam)
        p_back = (heun_ode.p(y) - 4.0 * lam * lam) / (2.0 * lam)
        q_back = heun_ode.q(y) / (4.0 * lam * lam) - lam * lam - lam * p_back
        assert rel_err(p_back, ode.p(z)) < 1e-10
        assert rel_err(q_back, ode.q(z)) < 1e-10


def test_coordinate_map_and_gauge():
    lam = 0.7
    assert z_to_y(-lam, lam) == pytest.approx(0.0, abs=1e-15)
    assert z_to_y(lam, lam) == pytest.approx(1.0, abs=1e-15)
    assert z_to_y(0.0, lam) == pytest.approx(0.5, abs=1e-15)
    assert y_to_z(z_to_y(0.123, lam), lam) == pytest.approx(0.123, abs=1e-15)
    with pytest.raises(DomainError):
        z_to_y(0.1, 0.0)
    # gauge: value and chain-rule derivative at y = 1/2
    v, dv = 1.37, -0.52
    assert y_gauge(v, 0.5, lam) == pytest.approx(math.exp(lam * lam) * v, rel=1e-15)
    assert y_gauge_deriv(v, dv, 0.5, lam) == pytest.approx(
        math.exp(lam * lam) * (lam * v + dv / (2 * lam)), rel=1e-15
    )


def test_gauge_maps_heun_solution_onto_eliminated_ode():
    # psi built from the y-side solution satisfies the z-side ODE pointwise
    from rabi_spectra import heunc_eval

    p = ModelParams.from_x(1.3, 0.7, 0.4, 0.0)
    ode = eliminated_ode(p)
    a0, _ = heun_params(p)
    heun_ode = heun_ode_spec(a0)
    for y in (0.3, 0.5, 0.62):
        z = y_to_z(y, p.lam)
        v, dv = heunc_eval(a0, y, tol=1e-13)
        # second derivative from the Heun equation itself
        d2v = -heun_ode.p(y) * dv - heun_ode.q(y) * v
        phi = y_gauge(v, y, p.lam)
        dphi = y_gauge_deriv(v, dv, y, p.lam)
        d2phi = math.exp(2 * p.lam**2 * y) * (
            p.lam**2 * v + dv + d2v / (4 * p.lam**2)
        )
        resid = d2phi + ode.p(z) * dphi + ode.q(z) * phi
        scale = abs(d2phi) + abs(ode.p(z) * dphi) + abs(ode.q(z) * phi)
        assert abs(resid) / scale < 1e-12


def test_exclusion_zones():
    assert in_exclusion_zone(2.0005, 0.0)
    assert not in_exclusion_zone(2.0015, 0.0)
    assert in_exclusion_zone(3.2004, 0.2)   # x - eps near 3
    assert in_exclusion_zone(2.7996, 0.2)   # x + eps near 3
    assert not in_exclusion_zone(3.5, 0.2)
    p = ModelParams.from_x(2.0005, 0.7, 0.4)
    assert p.excluded()


def test_exclusion_segments_cover_window():
    segs = exclusion_segments(0.5, 3.5, 0.2)
    # zones at 0.8, 1.2, 1.8, 2.2, 2.8, 3.2 (width 2e-3 each)
    assert len(segs) == 7
    total = sum(b - a for a, b in segs)
    assert total == pytest.approx(3.0 - 6 * 2e-3, abs=1e-12)
    for a, b in segs:
        assert b > a
        assert not in_exclusion_zone(0.5 * (a + b), 0.2)


def test_make_ode_rejects_artificial_and_irregular_points():
    # v'' - v = 0 with a made-up singular point
    with pytest.raises(ValueError):
        make_ode((0.0,), (1.0,), (-1.0,), (1.0,), (0.5,))
    # third-order pole in q is irregular
    with pytest.raises(ValueError):
        make_ode((0.0,), (1.0,), (1.0,), (0.0, 0.0, 0.0, 1.0), (0.0,))
    # denominator root missing from the declared list
    with pytest.raises(ValueError):
        make_ode((1.0,), (-1.0, 0.0, 1.0), (1.0,), (-1.0, 0.0, 1.0), (1.0,))


def test_ode_spec_radius():
    ode = eliminated_ode(ModelParams(E=0.3, lam=0.7, mu=0.4))
    assert ode.singular_points == (-0.7, 0.7)
    assert ode.radius(-0.7) == pytest.approx(1.4)
    assert ode.radius(0.7) == pytest.approx(1.4)


def test_E_x_roundtrip():
    assert E_from_x(x_from_E(0.37, 1.1), 1.1) == pytest.approx(0.37, abs=1e-15)
