"""Time integration of the two-Knudsen multi-species kinetic system.

The evolved system is

    d_t f_p + v . grad_x f_p = (1/eps) Q^{pp} + (1/kappa) sum_{q != p} Q^{pq}

with eps the intra-species Knudsen number and kappa the inter-species one;
the simulated regime fixes kappa = 1. Space is homogeneous or 1D in x.

Homogeneous steps are SSP-RK2 over the collision right-hand side. The 1D
stepper is Strang split: half-step first-order upwind transport, full
collision step, half-step transport. Transport is in flux form, so it is
conservative by construction, including at specular-reflective walls.

Control-volume averaging turns a 1D kinetic state into per-volume phase
quantities (alpha_p, rho_p, u_p, P_p): a per-cell indicator chi_p selects the
cells a species occupies and alpha_p is the occupied fraction.

The intra-species operator supports an optional equilibrium correction,
Q^{pp}(f, f) - Q^{pp}(M[f], M[f]) with M[f] the node-sampled Maxwellian
sharing f's moments. The subtracted term is zero in the continuous equation,
but the interpolation-based quadrature has its discrete fixed point a grid
artifact away from M[f]; subtracting pins the sampled Maxwellian as the exact
equilibrium so the distance to equilibrium scales with the physics rather
than with the grid. The correction lies in the span removed by the
conservative fixup plus log M, so entropy dissipation is unaffected. Cross
pairs are never corrected this way: their quadrature values carry the
momentum and energy exchange physics. Off by default.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from .collision_ops import KernelSpec, PairSpec, conservative_fixup, q_pair
from .velocity_space import (
    SpeciesSpec,
    VelocityGrid,
    local_equilibrium_distance,
    maxwellian,
    moments,
)

_NEG_FLOOR = -1e-14


@dataclass(frozen=True)
class CollisionModel:
    """Kernel table and evaluation options for the collision right-hand side.

    kernels maps unordered species-index pairs (i, j), i <= j, to a
    KernelSpec. n_angular sets the sigma rule resolution. apply_fixup runs
    the conservative moment correction after every pair evaluation.
    """

    kernels: tuple
    n_angular: int = 8
    apply_fixup: bool = True
    equilibrium_correction: bool = False
    fixed_order: bool = True

    def kernel(self, i: int, j: int) -> KernelSpec:
        key = (min(i, j), max(i, j))
        for pair_key, spec in self.kernels:
            if pair_key == key:
                return spec
        raise KeyError(f"no kernel registered for species pair {key}")

    @staticmethod
    def uniform(
        n_species: int,
        kernel: KernelSpec,
        cross_kernel: KernelSpec | None = None,
        n_angular: int = 8,
        apply_fixup: bool = True,
        equilibrium_correction: bool = False,
    ) -> "CollisionModel":
        """Same kernel on every pair, optionally a different one across species."""
        ck = kernel if cross_kernel is None else cross_kernel
        table = []
        for i in range(n_species):
            for j in range(i, n_species):
                table.append(((i, j), kernel if i == j else ck))
        return CollisionModel(
            kernels=tuple(table),
            n_angular=n_angular,
            apply_fixup=apply_fixup,
            equilibrium_correction=equilibrium_correction,
        )


@dataclass(frozen=True)
class KineticState:
    """Distributions for every species on a shared velocity grid.

    f arrays have shape (x_cells,) + grid.shape; homogeneous states use a
    single spatial cell. dx is the cell spacing of the periodic or walled
    x-domain (unused when x_cells == 1).
    """

    grid: VelocityGrid
    species: tuple
    f: tuple
    t: float = 0.0
    eps: float = 1.0
    kappa: float = 1.0
    dx: float = 1.0

    def __post_init__(self):
        if self.eps <= 0.0 or self.kappa <= 0.0:
            raise ValueError("eps and kappa must be positive")
        if self.dx <= 0.0:
            raise ValueError("dx must be positive")
        if len(self.f) != len(self.species):
            raise ValueError("one distribution per species required")
        shape = (self.x_cells,) + self.grid.shape
        for arr in self.f:
            if arr.shape != shape:
                raise ValueError("distribution shapes must agree across species")
            if float(arr.min()) < _NEG_FLOOR:
                raise ValueError("distribution below the negativity floor")

    @property
    def x_cells(self) -> int:
        return self.f[0].shape[0]

    @property
    def n_species(self) -> int:
        return len(self.species)

    def cell(self, i: int):
        return [arr[i] for arr in self.f]


def homogeneous_state(grid, species, f_list, eps, kappa=1.0, t=0.0) -> KineticState:
    """Wrap per-species velocity arrays as a single-cell state."""
    f = tuple(np.asarray(a)[None, ...].copy() for a in f_list)
    return KineticState(grid=grid, species=tuple(species), f=f, t=t, eps=eps, kappa=kappa)


@dataclass
class StepDiagnostics:
    """Accumulated per-run bookkeeping. clipped_mass is the total mass added
    by negativity clipping; the acceptance ceiling is 1e-8 of total mass per
    run. fixup_l1 is the summed L1 magnitude of conservative corrections."""

    clipped_mass: float = 0.0
    fixup_l1: float = 0.0
    clamp_events: int = 0
    rhs_evals: int = 0

    def merge(self, other: "StepDiagnostics") -> None:
        self.clipped_mass += other.clipped_mass
        self.fixup_l1 += other.fixup_l1
        self.clamp_events += other.clamp_events
        self.rhs_evals += other.rhs_evals


def collision_frequency_bound(state: KineticState, model: CollisionModel) -> float:
    """Upper bound on the discrete loss-term coefficient, sup over nodes.

    For the VHS kernel the sigma-integrated loss rate against species q is
    A_pq |v - v_*|^gamma <= A_pq (2 sqrt(d) v_max)^gamma, so the frequency is
    bounded by sum_q n_q A_pq (2 sqrt(d) v_max)^gamma with n_q the largest
    per-cell number density.
    """
    grid = state.grid
    diam = 2.0 * np.sqrt(grid.dim) * grid.v_max
    n_max = []
    for p in range(state.n_species):
        per_cell = [
            moments(state.f[p][i], state.species[p], grid, model.fixed_order).n
            for i in range(state.x_cells)
        ]
        n_max.append(max(per_cell))
    worst = 0.0
    for p in range(state.n_species):
        nu_p = 0.0
        for q in range(state.n_species):
            kern = model.kernel(p, q)
            rate = kern.total_angular_mass(grid.dim) * diam**kern.gamma
            nu_p += n_max[q] * rate
        worst = max(worst, nu_p)
    return worst


def cfl_dt(state: KineticState, model: CollisionModel) -> float:
    """Stable step 0.9 min(dx / v_max, eps / nu_max).

    nu_max is the collision_frequency_bound; vacuum states are
    transport-limited. Homogeneous states (one cell) have no transport
    constraint.
    """
    nu_max = collision_frequency_bound(state, model)
    collision_part = np.inf if nu_max == 0.0 else state.eps / nu_max
    if state.x_cells == 1:
        transport_part = np.inf
    else:
        transport_part = state.dx / state.grid.v_max
    bound = 0.9 * min(transport_part, collision_part)
    if not np.isfinite(bound):
        # vacuum homogeneous state: any step is stable
        return 0.9 * state.dx / state.grid.v_max
    return bound


def _cell_rhs(model, grid, species, f_cell, inv_eps, inv_kappa, diag):
    ns = len(species)
    rhs = [grid.zeros() for _ in range(ns)]
    for i in range(ns):
        for j in range(i, ns):
            spec_pair = PairSpec(species[i], species[j], model.kernel(i, j), model.n_angular)
            pair = q_pair(f_cell[i], f_cell[j], spec_pair, grid)
            if i == j and model.equilibrium_correction:
                mom = moments(f_cell[i], species[i], grid, model.fixed_order)
                if mom.n > 0.0 and mom.T > 0.0:
                    fM = maxwellian(grid, mom.n, mom.u, mom.T, species[i])
                    ref = q_pair(fM, fM, spec_pair, grid)
                    corrected = pair.Q_pq - ref.Q_pq
                    pair = replace(pair, Q_pq=corrected, Q_qp=corrected)
            if model.apply_fixup:
                pair = conservative_fixup(pair, grid)
                diag.fixup_l1 += pair.fixup_correction
            diag.rhs_evals += 1
            if i == j:
                rhs[i] += inv_eps * pair.Q_pq
            else:
                rhs[i] += inv_kappa * pair.Q_pq
                rhs[j] += inv_kappa * pair.Q_qp
    return rhs


def collision_rhs(state: KineticState, model: CollisionModel, diag: StepDiagnostics):
    """(1/eps) Q^{pp} + (1/kappa) sum_{q != p} Q^{pq} for every cell."""
    inv_eps, inv_kappa = 1.0 / state.eps, 1.0 / state.kappa
    out = [np.zeros_like(arr) for arr in state.f]
    for i in range(state.x_cells):
        cell = state.cell(i)
        rhs = _cell_rhs(model, state.grid, state.species, cell, inv_eps, inv_kappa, diag)
        for p in range(state.n_species):
            out[p][i] = rhs[p]
    return out


def _clip_negative(arrays, weight, diag):
    clipped = []
    for arr in arrays:
        neg = np.minimum(arr, 0.0)
        lost = -weight * float(neg.sum())
        if lost > 0.0:
            diag.clipped_mass += lost
            arr = np.maximum(arr, 0.0)
        clipped.append(arr)
    return clipped


def _dump_nan_state(state: KineticState) -> str:
    fd, path = tempfile.mkstemp(prefix="kinetic_nan_state_", suffix=".npz", dir=os.getcwd())
    os.close(fd)
    np.savez(
        path,
        t=state.t,
        eps=state.eps,
        kappa=state.kappa,
        dx=state.dx,
        **{f"f_{p}": state.f[p] for p in range(state.n_species)},
    )
    return path


def _check_finite(arrays, state):
    for arr in arrays:
        if not np.isfinite(arr).all():
            path = _dump_nan_state(state)
            raise FloatingPointError(f"non-finite values in step; state dumped to {path}")


def _collision_substep(state, model, dt, diag):
    # SSP-RK2 (Heun): convex combination of two forward-Euler stages
    k1 = collision_rhs(state, model, diag)
    stage = [f + dt * k for f, k in zip(state.f, k1)]
    stage = _clip_negative(stage, state.grid.weight, diag)
    mid = replace(state, f=tuple(stage))
    k2 = collision_rhs(mid, model, diag)
    out = [
        0.5 * f0 + 0.5 * (f1 + dt * k)
        for f0, f1, k in zip(state.f, stage, k2)
    ]
    out = _clip_negative(out, state.grid.weight, diag)
    _check_finite(out, state)
    return out


def step_homogeneous(
    state: KineticState, dt: float, model: CollisionModel, diag: StepDiagnostics | None = None
) -> KineticState:
    """One SSP-RK2 collision step; requires dt within the stability bound."""
    if diag is None:
        diag = StepDiagnostics()
    limit = cfl_dt(state, model)
    if dt > limit * (1.0 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds stability bound {limit:.3e}")
    out = _collision_substep(state, model, dt, diag)
    return replace(state, f=tuple(out), t=state.t + dt)


def _transport_half(f, v_x, dt, dx, bc, grid):
    # flux-form first-order upwind: F_{i+1/2} = v+ f_i + v- f_{i+1}
    vp = np.maximum(v_x, 0.0)
    vm = np.minimum(v_x, 0.0)
    if bc == "periodic":
        left = f[-1:]
        right = f[:1]
        left_ref = left
        right_ref = right
    elif bc == "reflective":
        # specular wall: ghost cell mirrors the boundary cell with v -> -v
        left_ref = grid.reflect(f[0])[None]
        right_ref = grid.reflect(f[-1])[None]
        left = left_ref
        right = right_ref
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    ext = np.concatenate([left, f, right], axis=0)
    flux = vp * ext[:-1] + vm * ext[1:]
    return f - (dt / dx) * (flux[1:] - flux[:-1])


def step_1d(
    state: KineticState,
    dt: float,
    model: CollisionModel,
    bc: str = "periodic",
    diag: StepDiagnostics | None = None,
) -> KineticState:
    """Strang-split step: half transport, full collision, half transport."""
    if diag is None:
        diag = StepDiagnostics()
    limit = cfl_dt(state, model)
    if dt > limit * (1.0 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds stability bound {limit:.3e}")
    grid = state.grid
    # x-advection speed of each velocity node is that node's first component
    v_x = grid.axis.reshape((-1,) + (1,) * (grid.dim - 1))
    half = 0.5 * dt
    moved = [_transport_half(f, v_x, half, state.dx, bc, grid) for f in state.f]
    moved = _clip_negative(moved, grid.weight, diag)
    mid = replace(state, f=tuple(moved))
    collided = _collision_substep(mid, model, dt, diag)
    mid = replace(mid, f=tuple(collided))
    final = [_transport_half(f, v_x, half, state.dx, bc, grid) for f in mid.f]
    final = _clip_negative(final, grid.weight, diag)
    _check_finite(final, state)
    return replace(state, f=tuple(final), t=state.t + dt)


@dataclass(frozen=True)
class ControlVolumePartition:
    """Disjoint cell-index volumes tiling the x-domain.

    edges are strictly increasing cell boundaries starting at 0 and ending at
    the cell count; volume k spans cells [edges[k], edges[k+1]). rule selects
    the per-cell indicator: 'threshold' assigns each cell wholly to the
    species with the largest number density (ties go to the lower index, so
    the fractions sum to one exactly); 'fraction' uses chi_p = n_p / n.
    """

    edges: tuple
    rule: str = "threshold"

    def __post_init__(self):
        if self.rule not in ("threshold", "fraction"):
            raise ValueError(f"unknown indicator rule {self.rule!r}")
        e = self.edges
        if len(e) < 2 or e[0] != 0 or any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError("edges must strictly increase from 0")

    @staticmethod
    def whole_domain(n_cells: int, rule: str = "threshold") -> "ControlVolumePartition":
        return ControlVolumePartition(edges=(0, n_cells), rule=rule)


@dataclass(frozen=True)
class VolumeAverages:
    """Phase quantities of one control volume: arrays indexed by species."""

    volume_id: int
    alpha: np.ndarray
    n: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    P: np.ndarray


def control_volume_average(
    state: KineticState, partition: ControlVolumePartition, model: CollisionModel | None = None
):
    """Volume fractions and chi-weighted phase moments per control volume.

    alpha_p = |V|^{-1} sum_cells chi_p dx; phase moments are chi_p-weighted
    cell averages over the occupied cells, so alpha_p rho_p recovers the
    volume average of chi_p m_p n_p.
    """
    if partition.edges[-1] != state.x_cells:
        raise ValueError("partition does not tile the domain")
    fixed = model.fixed_order if model is not None else True
    ns, dim = state.n_species, state.grid.dim
    per_cell = [
        [moments(state.f[p][i], state.species[p], state.grid, fixed) for i in range(state.x_cells)]
        for p in range(ns)
    ]
    out = []
    for k, (a, b) in enumerate(zip(partition.edges, partition.edges[1:])):
        cells = range(a, b)
        n_cells = b - a
        if n_cells == 0:
            raise ValueError(f"empty control volume {k}")
        chi = np.zeros((ns, n_cells))
        for idx, i in enumerate(cells):
            dens = np.array([per_cell[p][i].n for p in range(ns)])
            if partition.rule == "threshold":
                chi[int(np.argmax(dens)), idx] = 1.0
            else:
                tot = float(dens.sum())
                if tot > 0.0:
                    chi[:, idx] = dens / tot
        alpha = chi.sum(axis=1) / n_cells
        n_avg = np.zeros(ns)
        rho = np.zeros(ns)
        u = np.zeros((ns, dim))
        P = np.zeros(ns)
        for p in range(ns):
            occupancy = float(chi[p].sum())
            if occupancy == 0.0:
                continue
            ns_cells = [per_cell[p][i] for i in cells]
            n_avg[p] = sum(c * m.n for c, m in zip(chi[p], ns_cells)) / occupancy
            rho[p] = state.species[p].mass * n_avg[p]
            mom = sum(c * m.rho * m.u for c, m in zip(chi[p], ns_cells)) / occupancy
            if rho[p] > 0.0:
                u[p] = mom / rho[p]
            P[p] = sum(c * m.P for c, m in zip(chi[p], ns_cells)) / occupancy
        out.append(VolumeAverages(volume_id=k, alpha=alpha, n=n_avg, rho=rho, u=u, P=P))
    return out


@dataclass
class Snapshot:
    """One trajectory record: per-species moments plus scalar diagnostics."""

    t: float
    moments: list
    equilibrium_distance: list
    h_total: float
    volumes: list = field(default_factory=list)
    state: KineticState | None = None


def run_kinetic(
    state: KineticState,
    model: CollisionModel,
    dt: float,
    n_steps: int,
    bc: str = "periodic",
    snapshot_every: int = 1,
    partition: ControlVolumePartition | None = None,
    keep_states: bool = False,
):
    """Advance n_steps, recording snapshots every snapshot_every steps.

    Returns (snapshots, final_state, diagnostics). The initial state is
    always recorded; zero steps yields just that record.
    """
    from .collision_ops import h_functional

    diag = StepDiagnostics()

    def record(s):
        per = [
            moments(s.f[p].sum(axis=0) / s.x_cells, s.species[p], s.grid, model.fixed_order)
            for p in range(s.n_species)
        ]
        dist = [
            max(
                local_equilibrium_distance(s.f[p][i], s.species[p], s.grid, model.fixed_order)
                for i in range(s.x_cells)
            )
            for p in range(s.n_species)
        ]
        h = sum(
            h_functional([s.f[p][i] for p in range(s.n_species)], s.grid)
            for i in range(s.x_cells)
        ) * (s.dx if s.x_cells > 1 else 1.0)
        vols = control_volume_average(s, partition, model) if partition is not None else []
        snap = Snapshot(
            t=s.t,
            moments=per,
            equilibrium_distance=dist,
            h_total=h,
            volumes=vols,
            state=s if keep_states else None,
        )
        snapshots.append(snap)

    snapshots = []
    record(state)
    for k in range(n_steps):
        if state.x_cells == 1:
            state = step_homogeneous(state, dt, model, diag)
        else:
            state = step_1d(state, dt, model, bc, diag)
        if (k + 1) % snapshot_every == 0 or k == n_steps - 1:
            record(state)
    return snapshots, state, diag
