"""Velocity-space grids, Maxwellians, and moment reductions.

Distribution functions are plain float64 arrays on a uniform, cell-centered
Cartesian velocity grid (2 or 3 dimensions). Quadrature is the midpoint rule
with the uniform weight dv**dim, so every reduction here is a plain weighted
sum over nodes. Boltzmann's constant is 1 throughout: temperatures carry
energy units.

Moment reductions default to a fixed-order serial accumulation so results are
bit-reproducible for a given grid no matter how runs are scheduled across
worker processes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

# number densities below this are treated as vacuum: u and T are reported as 0
VACUUM_FLOOR = 1e-14


@dataclass(frozen=True)
class SpeciesSpec:
    """Identity and molecular mass of one species."""

    name: str
    mass: float

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError(f"species {self.name!r}: mass must be positive")


class VelocityGrid:
    """Uniform cell-centered velocity grid on [-v_max, v_max]^dim.

    Nodes sit at cell centers, v_k = -v_max + (k + 1/2) dv, which keeps the
    grid symmetric under v -> -v with the exact node mapping k -> n-1-k.
    nodes_per_axis must be even so no node sits at the origin.
    """

    def __init__(self, dim: int = 2, nodes_per_axis: int = 32, v_max: float = 6.0):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if nodes_per_axis < 4 or nodes_per_axis % 2 != 0:
            raise ValueError("nodes_per_axis must be even and at least 4")
        if v_max <= 0.0:
            raise ValueError("v_max must be positive")
        self.dim = dim
        self.nodes_per_axis = int(nodes_per_axis)
        self.v_max = float(v_max)
        self.dv = 2.0 * self.v_max / self.nodes_per_axis
        self.axis = -self.v_max + (np.arange(self.nodes_per_axis) + 0.5) * self.dv
        self.weight = self.dv**self.dim
        self.shape = (self.nodes_per_axis,) * self.dim
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        self.coords = tuple(c.copy() for c in mesh)
        self.sq_speed = sum(c * c for c in self.coords)
        # flattened coordinate table used by the serial reduction kernels
        self._flat_coords = np.stack([c.ravel() for c in self.coords], axis=1)
        self._flat_sq = self.sq_speed.ravel().copy()

    @property
    def node_count(self) -> int:
        return self.nodes_per_axis**self.dim

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def reflect(self, f: np.ndarray) -> np.ndarray:
        """Return f(-v); exact on this grid by index reversal."""
        return f[(slice(None, None, -1),) * self.dim].copy()


@dataclass(frozen=True)
class Moments:
    """Per-species macroscopic state. P = n T (ideal gas, k_B = 1)."""

    n: float
    rho: float
    u: np.ndarray
    T: float
    P: float


@dataclass(frozen=True)
class MixtureMoments:
    n: float
    rho: float
    u: np.ndarray
    T: float
    P: float


def maxwellian(grid: VelocityGrid, n: float, u, T: float, species: SpeciesSpec) -> np.ndarray:
    """Node-sampled Maxwellian n (m / 2 pi T)^{d/2} exp(-m|v-u|^2 / 2T)."""
    if n < 0.0:
        raise ValueError("density must be nonnegative")
    if n == 0.0:
        return grid.zeros()
    if T <= 0.0:
        raise ValueError("temperature must be positive for a nonzero Maxwellian")
    m = species.mass
    u = np.broadcast_to(np.asarray(u, dtype=float), (grid.dim,))
    sq = grid.zeros()
    for c, uc in zip(grid.coords, u):
        sq += (c - uc) ** 2
    return n * (m / (2.0 * np.pi * T)) ** (grid.dim / 2.0) * np.exp(-m * sq / (2.0 * T))


@njit(cache=True)
def _reduce_serial(flat_f, flat_coords, flat_sq, dim):
    # single fixed-order pass: returns (sum f, sum v_i f, sum |v|^2 f)
    s0 = 0.0
    s1 = np.zeros(dim)
    s2 = 0.0
    for k in range(flat_f.shape[0]):
        fk = flat_f[k]
        s0 += fk
        for i in range(dim):
            s1[i] += flat_coords[k, i] * fk
        s2 += flat_sq[k] * fk
    return s0, s1, s2


def _raw_sums(f: np.ndarray, grid: VelocityGrid, fixed_order: bool):
    if fixed_order:
        flat = np.ascontiguousarray(f).ravel()
        return _reduce_serial(flat, grid._flat_coords, grid._flat_sq, grid.dim)
    s0 = float(f.sum())
    s1 = np.array([float((c * f).sum()) for c in grid.coords])
    s2 = float((grid.sq_speed * f).sum())
    return s0, s1, s2


def moments(
    f: np.ndarray,
    species: SpeciesSpec,
    grid: VelocityGrid,
    fixed_order: bool = True,
) -> Moments:
    """Number density, mass density, bulk velocity, temperature, pressure.

    n = sum w f, rho u = sum w m v f, T = (m / (dim n)) sum w |v-u|^2 f.
    Below the vacuum floor on n the convention (u, T) = (0, 0) applies.
    """
    if f.shape != grid.shape:
        raise ValueError("distribution shape does not match grid")
    w = grid.weight
    s0, s1, s2 = _raw_sums(f, grid, fixed_order)
    n = w * s0
    if n < VACUUM_FLOOR:
        z = np.zeros(grid.dim)
        return Moments(n=n, rho=species.mass * n, u=z, T=0.0, P=0.0)
    u = w * s1 / n
    # sum |v-u|^2 f = sum |v|^2 f - 2 u . sum v f + |u|^2 sum f
    centered = w * s2 - 2.0 * float(u @ (w * s1)) + float(u @ u) * n
    T = species.mass * centered / (grid.dim * n)
    if T < 0.0:
        T = 0.0
    return Moments(n=n, rho=species.mass * n, u=u, T=T, P=n * T)


def mixture_moments(per_species, f_list, grid: VelocityGrid, fixed_order: bool = True) -> MixtureMoments:
    """Total moments for the mixture.

    n, rho, rho u, and P are straight sums over species. The mixture
    temperature is the sum over species of (m_p / (dim n_p)) int |v - u|^2 f_p
    evaluated with the mixture bulk velocity u; species below the vacuum
    floor are skipped in that sum.
    """
    if not per_species:
        raise ValueError("mixture of zero species")
    n_tot = sum(m.n for m, _ in per_species)
    rho_tot = sum(m.rho for m, _ in per_species)
    mom_tot = sum(m.rho * m.u for m, _ in per_species)
    P_tot = sum(m.P for m, _ in per_species)
    if rho_tot < VACUUM_FLOOR:
        z = np.zeros(grid.dim)
        return MixtureMoments(n=n_tot, rho=rho_tot, u=z, T=0.0, P=P_tot)
    u_bar = mom_tot / rho_tot
    w = grid.weight
    T_mix = 0.0
    for (mom, spec), f in zip(per_species, f_list):
        if mom.n < VACUUM_FLOOR:
            continue
        s0, s1, s2 = _raw_sums(f, grid, fixed_order)
        centered = w * s2 - 2.0 * float(u_bar @ (w * s1)) + float(u_bar @ u_bar) * (w * s0)
        T_mix += spec.mass * centered / (grid.dim * mom.n)
    return MixtureMoments(n=n_tot, rho=rho_tot, u=u_bar, T=T_mix, P=P_tot)


def local_equilibrium_distance(
    f: np.ndarray, species: SpeciesSpec, grid: VelocityGrid, fixed_order: bool = True
) -> float:
    """L1 gap between f and the Maxwellian sharing f's moments.

    Zero exactly when f coincides with the node-sampled Maxwellian of its own
    (n, u, T); strictly positive otherwise. Vacuum states return 0.
    """
    mom = moments(f, species, grid, fixed_order=fixed_order)
    if mom.n < VACUUM_FLOOR or mom.T <= 0.0:
        return 0.0
    M = maxwellian(grid, mom.n, mom.u, mom.T, species)
    if fixed_order:
        return grid.weight * float(_abs_sum_serial(np.ascontiguousarray(f - M).ravel()))
    return grid.weight * float(np.abs(f - M).sum())


@njit(cache=True)
def _abs_sum_serial(a):
    s = 0.0
    for k in range(a.shape[0]):
        s += abs(a[k])
    return s
