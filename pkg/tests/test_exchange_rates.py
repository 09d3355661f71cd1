"""Momentum exchange closures against the quadrature oracle.

The anchor literals below were computed once with rate_quadrature_oracle at
its tightest ladder and frozen; the tests assert the closed forms and the
oracle still reproduce them.
"""

import math

import numpy as np
import pytest

from kinmix import KernelSpec, SpeciesSpec
from kinmix.exchange_rates import (
    ExchangeContext,
    friction_zeta,
    i_pq,
    i_pq_radial_quadrature,
    rate_hard_sphere_closed,
    rate_pseudo_maxwellian,
    rate_quadrature_oracle,
    xi_hard_sphere_linear,
    xi_pseudo_maxwellian,
)

# anchor state: unequal masses, densities, temperatures off 1, drift along x
PM_ANCHOR_RATE_X = -0.26666666666666666  # = -(1/3) * 1.0 * 1.6 * 0.5
HS_ANCHOR_ORACLE_X = -0.7717468350101594
HS_ANCHOR_CLOSED_X = -0.7717468350100322
HS_ANCHOR_XI_LINEAR = 0.9515328619481445


def _ctx(dim, kernel, u_p=0.3, u_q=-0.2, T=1.2, n_p=1.0, n_q=0.8, m_q=2.0):
    up = np.zeros(dim)
    uq = np.zeros(dim)
    up[0], uq[0] = u_p, u_q
    return ExchangeContext(
        species_p=SpeciesSpec("a", 1.0),
        species_q=SpeciesSpec("b", m_q),
        n_p=n_p,
        n_q=n_q,
        u_bar_p=up,
        u_bar_q=uq,
        T=T,
        kernel=kernel,
        dim=dim,
    )


def test_pm_closed_rate_matches_anchor():
    ctx = _ctx(2, KernelSpec.pseudo_maxwellian(dim=2))
    r = rate_pseudo_maxwellian(ctx)
    assert np.isclose(r[0], PM_ANCHOR_RATE_X, rtol=1e-15)
    assert r[1] == 0.0
    assert np.isclose(xi_pseudo_maxwellian(ctx), 1.0 / 3.0, rtol=1e-15)


def test_pm_oracle_agrees_with_closed_form():
    ctx = _ctx(2, KernelSpec.pseudo_maxwellian(dim=2))
    r = rate_pseudo_maxwellian(ctx)
    o = rate_quadrature_oracle(ctx)
    assert abs(r[0] - o[0]) <= 1e-8 * abs(o[0])


def test_hs_closed_rate_matches_anchor():
    ctx = _ctx(3, KernelSpec.hard_sphere(dim=3))
    r = rate_hard_sphere_closed(ctx)
    assert np.isclose(r[0], HS_ANCHOR_CLOSED_X, rtol=1e-13)
    assert abs(r[1]) == 0.0


def test_hs_oracle_matches_frozen_anchor():
    ctx = _ctx(3, KernelSpec.hard_sphere(dim=3))
    o = rate_quadrature_oracle(ctx)
    assert np.isclose(o[0], HS_ANCHOR_ORACLE_X, rtol=1e-10)
    # closed vs oracle: the reduction is exact, only quadrature error remains
    assert abs(rate_hard_sphere_closed(ctx)[0] - o[0]) <= 1e-10 * abs(o[0])


def test_hs_linear_coefficient_value():
    ctx = _ctx(3, KernelSpec.hard_sphere(dim=3))
    assert np.isclose(xi_hard_sphere_linear(ctx), HS_ANCHOR_XI_LINEAR, rtol=1e-14)
    # formula restated independently
    A = 1.0
    M = 3.0
    g = 2.0 * M * 1.2 / 2.0
    assert np.isclose(xi_hard_sphere_linear(ctx), 8.0 * A / (3.0 * M) * math.sqrt(g / math.pi))


def test_hs_rate_linearizes_to_xi_at_small_drift():
    k = KernelSpec.hard_sphere(dim=3)
    ctx = _ctx(3, k, u_p=5e-5, u_q=-5e-5)
    r = rate_hard_sphere_closed(ctx)
    lin = -xi_hard_sphere_linear(ctx) * ctx.rho_p * ctx.rho_q * ctx.nu
    assert np.isclose(r[0], lin[0], rtol=1e-6)


def test_antisymmetry_under_species_swap():
    for dim, k, rate in (
        (2, KernelSpec.pseudo_maxwellian(dim=2), rate_pseudo_maxwellian),
        (3, KernelSpec.hard_sphere(dim=3), rate_hard_sphere_closed),
    ):
        ctx = _ctx(dim, k)
        r = rate(ctx)
        r_sw = rate(ctx.swapped())
        assert np.abs(r + r_sw).max() < 1e-14


def test_galilean_invariance_of_oracle():
    k = KernelSpec.pseudo_maxwellian(dim=2)
    ctx = _ctx(2, k)
    shifted = _ctx(2, k, u_p=0.3 + 0.9, u_q=-0.2 + 0.9)
    r0 = rate_quadrature_oracle(ctx)
    r1 = rate_quadrature_oracle(shifted)
    assert np.abs(r0 - r1).max() <= 1e-10 * max(np.abs(r0).max(), 1.0)


def test_i_pq_branches_agree_at_the_switch():
    g = 3.6
    for x in (3.9e-4, 4.1e-4):
        nu = math.sqrt(x * g)
        closed = i_pq(nu, g)
        quad = i_pq_radial_quadrature(nu, g)
        assert abs(closed - quad) <= 1e-10 * abs(quad)


def test_i_pq_rejects_bad_arguments():
    with pytest.raises(ValueError):
        i_pq(-0.1, 1.0)
    with pytest.raises(ValueError):
        i_pq(0.1, 0.0)


def test_closed_forms_reject_wrong_kernel():
    ctx_hs2 = _ctx(2, KernelSpec.hard_sphere(dim=2))
    with pytest.raises(ValueError):
        xi_pseudo_maxwellian(ctx_hs2)
    with pytest.raises(ValueError):
        rate_hard_sphere_closed(ctx_hs2)
    ctx_pm3 = _ctx(3, KernelSpec.pseudo_maxwellian(dim=3))
    with pytest.raises(ValueError):
        xi_hard_sphere_linear(ctx_pm3)


def test_zero_drift_rate_vanishes():
    ctx = _ctx(3, KernelSpec.hard_sphere(dim=3), u_p=0.0, u_q=0.0)
    assert np.abs(rate_hard_sphere_closed(ctx)).max() == 0.0


def test_friction_zeta_is_density_sum_scaled():
    assert friction_zeta(0.25, 1.0, 3.0) == 1.0
    assert friction_zeta(0.0, 1.0, 1.0) == 0.0
