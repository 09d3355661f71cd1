"""Five-equation system, its seven-variable parent, and the mixture limit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinmix import SpeciesSpec
from kinmix.twophase_macro import (
    BNConserved,
    EosSpec,
    EulerMixConserved,
    MacroDiagnostics,
    RelaxationSpec,
    TwoPhasePrimitive,
    bn_primitive,
    bn_step,
    conserved_from_primitive,
    enthalpy,
    eos_pressure,
    euler_mix_step,
    primitive_from_conserved,
    rdt_step,
    rdt_wave_speed,
    relaxation_tau,
)

EOS = EosSpec(c=1.0, gamma_exp=2.0)


def _sine_primitive(nx=32):
    x = (np.arange(nx) + 0.5) / nx
    return TwoPhasePrimitive(
        alpha1=0.5 + 0.2 * np.sin(2 * np.pi * x),
        rho1=1.0 + 0.1 * np.cos(2 * np.pi * x),
        rho2=0.7 + 0.05 * np.sin(4 * np.pi * x),
        u1=0.1 * np.sin(2 * np.pi * x),
        u2=-0.1 * np.cos(2 * np.pi * x),
    )


def test_pressure_enthalpy_derivative_identity():
    # dP/drho = rho dh/drho for the isentropic law, via central differences
    for rho in (0.5, 1.0, 1.7, 3.2):
        d = 1e-6 * rho
        dP = (eos_pressure(rho + d, EOS) - eos_pressure(rho - d, EOS)) / (2 * d)
        dh = (enthalpy(rho + d, EOS) - enthalpy(rho - d, EOS)) / (2 * d)
        assert abs(dP - rho * dh) < 1e-8


def test_relaxation_tau_formula():
    assert np.isclose(relaxation_tau(0.04, 2.0, 0.5, 0.3, 0.3), np.sqrt(0.04) * 2.0 / 0.5 * 4.0)
    # asymmetric widths: (eta1+eta2)^2/(eta1 eta2)
    assert np.isclose(relaxation_tau(1.0, 1.0, 1.0, 1.0, 4.0), 25.0 / 4.0)
    with pytest.raises(ValueError):
        relaxation_tau(0.0, 1.0, 1.0, 1.0, 1.0)


@given(
    a=st.floats(0.05, 0.95),
    r1=st.floats(0.3, 3.0),
    r2=st.floats(0.3, 3.0),
    v1=st.floats(-1.0, 1.0),
    v2=st.floats(-1.0, 1.0),
)
@settings(max_examples=40, deadline=None)
def test_conserved_primitive_roundtrip(a, r1, r2, v1, v2):
    W = TwoPhasePrimitive(
        alpha1=np.array([a]), rho1=np.array([r1]), rho2=np.array([r2]),
        u1=np.array([v1]), u2=np.array([v2]))
    back = primitive_from_conserved(conserved_from_primitive(W), EOS)
    for name in ("alpha1", "rho1", "rho2", "u1", "u2"):
        assert np.allclose(getattr(back, name), getattr(W, name), rtol=1e-12, atol=1e-12)


def test_mixture_weights_and_w():
    W = _sine_primitive()
    assert np.allclose(W.kappa1 + W.kappa2, 1.0)
    assert np.allclose(W.u_bar, W.kappa1 * W.u1 + W.kappa2 * W.u2)
    assert np.allclose(W.w, W.u1 - W.u2)
    assert np.allclose(W.u1, W.u_bar + W.kappa2 * W.w)
    assert np.allclose(W.u2, W.u_bar - W.kappa1 * W.w)


def test_rdt_conserves_mass_and_momentum():
    nx = 32
    dx = 1.0 / nx
    U = conserved_from_primitive(_sine_primitive(nx))
    relax = RelaxationSpec(tau=0.2, zeta=0.5, xi=0.25)
    rho0 = U.rho.sum()
    mom0 = U.momentum.sum()
    W = primitive_from_conserved(U, EOS)
    dt = 0.45 * dx / float(np.max(rdt_wave_speed(W, EOS)))
    for _ in range(50):
        U = rdt_step(U, dt, dx, EOS, relax)
    assert abs(U.rho.sum() - rho0) < 1e-13 * rho0
    assert abs(U.momentum.sum() - mom0) < 1e-13 * max(abs(mom0), 1.0)


def test_rdt_0d_friction_is_exact_exponential():
    W = TwoPhasePrimitive(
        alpha1=np.array([0.5]), rho1=np.array([1.0]), rho2=np.array([1.0]),
        u1=np.array([0.2]), u2=np.array([-0.2]))
    zeta = 2.0
    relax = RelaxationSpec(tau=1e9, zeta=zeta, xi=0.0)  # pressure already equal
    U = conserved_from_primitive(W)
    dt = 1e-3 / zeta
    n = 1000
    for _ in range(n):
        U = rdt_step(U, dt, 1.0, EOS, relax)
    Wn = primitive_from_conserved(U, EOS)
    expected = 0.4 * np.exp(-zeta * n * dt)
    assert abs(float(Wn.w[0]) - expected) < 1e-6


def test_rdt_0d_pressure_relaxes_toward_high_pressure_phase():
    # phase 1 at higher pressure: alpha1 must grow, gap must shrink monotonically
    W = TwoPhasePrimitive(
        alpha1=np.array([0.4]), rho1=np.array([1.5]), rho2=np.array([0.8]),
        u1=np.array([0.0]), u2=np.array([0.0]))
    relax = RelaxationSpec(tau=0.05, zeta=0.0, xi=0.0)
    U = conserved_from_primitive(W)
    diag = MacroDiagnostics()
    gaps, alphas = [], []
    for _ in range(200):
        U = rdt_step(U, 0.01, 1.0, EOS, relax, diag=diag)
        Wn = primitive_from_conserved(U, EOS)
        gaps.append(float(eos_pressure(Wn.rho1, EOS) - eos_pressure(Wn.rho2, EOS)))
        alphas.append(float(Wn.alpha1[0]))
    assert all(abs(b) <= abs(a) + 1e-14 for a, b in zip(gaps, gaps[1:]))
    assert all(b >= a - 1e-14 for a, b in zip(alphas, alphas[1:]))
    assert abs(gaps[-1]) < 1e-6
    assert diag.newton_iterations > 0


def test_rdt_equilibrium_is_a_fixed_point():
    # equal pressures, equal velocities: sources must not move the state
    W = TwoPhasePrimitive(
        alpha1=np.array([0.37]), rho1=np.array([1.1]), rho2=np.array([1.1]),
        u1=np.array([0.25]), u2=np.array([0.25]))
    relax = RelaxationSpec(tau=1e-6, zeta=5.0, xi=0.0)
    U = conserved_from_primitive(W)
    for _ in range(10):
        U = rdt_step(U, 0.01, 1.0, EOS, relax)
    Wn = primitive_from_conserved(U, EOS)
    assert np.allclose(Wn.alpha1, 0.37, atol=1e-12)
    assert np.allclose(Wn.u1, 0.25, atol=1e-12)


def test_wave_speed_bounds_velocity():
    W = _sine_primitive()
    s = rdt_wave_speed(W, EOS)
    assert np.all(s >= np.abs(W.u_bar))


def test_bn_matches_rdt_on_uniform_alpha():
    nx = 24
    dx = 1.0 / nx
    x = (np.arange(nx) + 0.5) * dx
    W = TwoPhasePrimitive(
        alpha1=np.full(nx, 0.6),
        rho1=1.0 + 0.05 * np.sin(2 * np.pi * x),
        rho2=0.9 + 0.05 * np.cos(2 * np.pi * x),
        u1=0.05 * np.sin(2 * np.pi * x),
        u2=-0.05 * np.sin(2 * np.pi * x),
    )
    relax = RelaxationSpec(tau=0.3, zeta=0.7, xi=0.35)
    U5 = conserved_from_primitive(W)
    U7 = BNConserved(
        alpha1=W.alpha1.copy(),
        m1=W.alpha1 * W.rho1,
        mom1=W.alpha1 * W.rho1 * W.u1,
        m2=W.alpha2 * W.rho2,
        mom2=W.alpha2 * W.rho2 * W.u2,
    )
    s0 = float(np.max(rdt_wave_speed(W, EOS)))
    dt = 0.4 * dx / s0
    for _ in range(60):
        U5 = rdt_step(U5, dt, dx, EOS, relax)
        U7 = bn_step(U7, dt, dx, EOS, relax)
    W5 = primitive_from_conserved(U5, EOS)
    W7 = bn_primitive(U7)
    for name in ("alpha1", "rho1", "rho2", "u1", "u2"):
        assert np.abs(getattr(W7, name) - getattr(W5, name)).max() < 1e-10, name


def test_bn_rejects_boundary_alpha():
    with pytest.raises(ValueError):
        BNConserved(alpha1=np.array([1.0]), m1=np.array([1.0]),
                    mom1=np.array([0.0]), m2=np.array([1.0]), mom2=np.array([0.0]))


def test_euler_mix_two_identical_halves_reduce_to_single():
    nx = 24
    dx = 1.0 / nx
    x = (np.arange(nx) + 0.5) * dx
    rho = 1.0 + 0.1 * np.sin(2 * np.pi * x)
    u = 0.05 * np.cos(2 * np.pi * x)
    T = 1.0 + 0.05 * np.sin(4 * np.pi * x)
    dim = 2
    sp = [SpeciesSpec("a", 1.0)]
    sp2 = [SpeciesSpec("a", 1.0), SpeciesSpec("b", 1.0)]
    n = rho / sp[0].mass
    E = 0.5 * rho * u**2 + 0.5 * dim * n * T
    U1 = EulerMixConserved(rho_p=rho[None], momentum=rho * u, energy=E)
    U2 = EulerMixConserved(rho_p=np.stack([0.5 * rho, 0.5 * rho]), momentum=rho * u, energy=E)
    s_max = float(np.max(np.abs(u) + np.sqrt((dim + 2) / dim * n * T / rho)))
    dt = 0.4 * dx / s_max
    for _ in range(40):
        U1 = euler_mix_step(U1, dt, dx, sp, dim)
        U2 = euler_mix_step(U2, dt, dx, sp2, dim)
    assert np.abs(U2.rho_p.sum(axis=0) - U1.rho_p[0]).max() < 1e-12
    assert np.abs(U2.momentum - U1.momentum).max() < 1e-12
    assert np.abs(U2.energy - U1.energy).max() < 1e-12


def test_step_rejects_unstable_dt():
    nx = 16
    dx = 1.0 / nx
    U = conserved_from_primitive(_sine_primitive(nx))
    relax = RelaxationSpec(tau=0.2, zeta=0.0, xi=0.0)
    with pytest.raises(ValueError):
        rdt_step(U, 10.0 * dx, dx, EOS, relax)
