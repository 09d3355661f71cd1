"""Grid construction, Maxwellian sampling, and moment extraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinmix import SpeciesSpec, VelocityGrid, local_equilibrium_distance, maxwellian, moments
from kinmix.velocity_space import VACUUM_FLOOR, mixture_moments


def test_grid_nodes_symmetric_and_cell_centered():
    g = VelocityGrid(dim=2, nodes_per_axis=16, v_max=6.0)
    assert g.shape == (16, 16)
    assert g.node_count == 256
    # cell-centered: no node sits on the boundary or at the origin
    assert np.allclose(g.axis, -g.axis[::-1])
    assert np.abs(g.axis).min() > 0.0
    assert np.isclose(g.axis.max(), 6.0 - 0.5 * g.dv)
    assert np.isclose(g.weight, g.dv**2)


def test_grid_rejects_bad_shapes():
    with pytest.raises(ValueError):
        VelocityGrid(dim=4, nodes_per_axis=8)
    with pytest.raises(ValueError):
        VelocityGrid(dim=2, nodes_per_axis=3)


def test_reflect_reverses_first_axis():
    g = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    s = SpeciesSpec("a", 1.0)
    f = maxwellian(g, 1.0, np.array([0.7, 0.2]), 1.0, s)
    m = moments(f, s, g)
    mr = moments(g.reflect(f), s, g)
    assert np.isclose(mr.u[0], -m.u[0])
    assert np.isclose(mr.u[1], m.u[1])
    assert np.isclose(mr.n, m.n)


@pytest.mark.parametrize("mass,T,u0", [(1.0, 1.0, 0.0), (2.0, 0.8, 0.5), (0.5, 1.6, -0.9)])
def test_maxwellian_moments_recovered(mass, T, u0):
    g = VelocityGrid(dim=2, nodes_per_axis=32, v_max=7.0)
    s = SpeciesSpec("a", mass)
    u = np.array([u0, 0.25])
    f = maxwellian(g, 1.3, u, T, s)
    m = moments(f, s, g)
    assert abs(m.n - 1.3) < 2e-6
    assert np.allclose(m.u, u, atol=2e-6)
    assert abs(m.T - T) < 2e-5
    assert abs(m.P - m.n * m.T) < 1e-12


def test_maxwellian_positive_everywhere():
    g = VelocityGrid(dim=3, nodes_per_axis=12, v_max=5.0)
    f = maxwellian(g, 1.0, np.zeros(3), 1.0, SpeciesSpec("a", 1.0))
    assert (f > 0.0).all()


def test_vacuum_moments_are_zeroed():
    g = VelocityGrid(dim=2, nodes_per_axis=8, v_max=4.0)
    m = moments(np.zeros(g.shape), SpeciesSpec("a", 1.0), g)
    assert m.n < VACUUM_FLOOR
    assert m.T == 0.0
    assert np.all(m.u == 0.0)


@given(
    scale=st.floats(0.1, 10.0),
    n=st.floats(0.2, 3.0),
    T=st.floats(0.5, 2.0),
)
@settings(max_examples=25, deadline=None)
def test_moments_scale_linearly(scale, n, T):
    g = VelocityGrid(dim=2, nodes_per_axis=16, v_max=6.0)
    s = SpeciesSpec("a", 1.0)
    f = maxwellian(g, n, np.array([0.3, -0.1]), T, s)
    m1 = moments(f, s, g)
    m2 = moments(scale * f, s, g)
    assert np.isclose(m2.n, scale * m1.n, rtol=1e-12)
    assert np.allclose(m2.u, m1.u, rtol=1e-10, atol=1e-12)
    assert np.isclose(m2.T, m1.T, rtol=1e-10)


def test_mixture_moments_mass_weighted():
    g = VelocityGrid(dim=2, nodes_per_axis=24, v_max=6.0)
    sp = [SpeciesSpec("a", 1.0), SpeciesSpec("b", 2.0)]
    f = [
        maxwellian(g, 1.0, np.array([0.4, 0.0]), 1.0, sp[0]),
        maxwellian(g, 0.5, np.array([-0.4, 0.0]), 1.2, sp[1]),
    ]
    per = [moments(f[p], sp[p], g) for p in range(2)]
    mix = mixture_moments(per, f, g)
    rho = sum(m.rho for m in per)
    mom = sum(m.rho * m.u for m in per)
    assert np.isclose(mix.rho, rho, rtol=1e-13)
    assert np.allclose(mix.u, mom / rho, rtol=1e-12)


def test_equilibrium_distance_orders_states():
    g = VelocityGrid(dim=2, nodes_per_axis=24, v_max=6.0)
    s = SpeciesSpec("a", 1.0)
    M = maxwellian(g, 1.0, np.zeros(2), 1.0, s)
    shifted = 0.5 * (
        maxwellian(g, 1.0, np.array([0.8, 0.0]), 1.0, s)
        + maxwellian(g, 1.0, np.array([-0.8, 0.0]), 1.0, s)
    )
    d_eq = local_equilibrium_distance(M, s, g)
    d_bi = local_equilibrium_distance(shifted, s, g)
    assert d_eq < 5e-3
    assert d_bi > 10 * d_eq


def test_equilibrium_distance_fixed_order_matches_numpy():
    g = VelocityGrid(dim=2, nodes_per_axis=16, v_max=5.0)
    s = SpeciesSpec("a", 1.0)
    f = maxwellian(g, 1.0, np.array([0.3, 0.1]), 0.9, s) + 0.01
    a = local_equilibrium_distance(f, s, g, fixed_order=True)
    b = local_equilibrium_distance(f, s, g, fixed_order=False)
    assert np.isclose(a, b, rtol=1e-12)
