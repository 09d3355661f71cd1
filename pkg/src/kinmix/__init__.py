"""Deterministic discrete-velocity mixtures with two collision timescales,
their momentum-exchange closures, and the isentropic two-phase limits."""

from .collision_ops import (
    CollisionPair,
    KernelSpec,
    PairSpec,
    conservative_fixup,
    h_functional,
    q_pair,
    unit_angular_constant,
    weak_moment,
)
from .config import ConfigError, RunConfig, config_hash, load_config, parse_config
from .exchange_rates import (
    ExchangeContext,
    friction_zeta,
    i_pq,
    rate_hard_sphere_closed,
    rate_pseudo_maxwellian,
    rate_quadrature_oracle,
    xi_hard_sphere_linear,
    xi_pseudo_maxwellian,
)
from .harness import run_limit_study, run_mode, run_validation_suite
from .kinetic_solver import (
    CollisionModel,
    ControlVolumePartition,
    KineticState,
    Snapshot,
    StepDiagnostics,
    VolumeAverages,
    cfl_dt,
    collision_frequency_bound,
    collision_rhs,
    control_volume_average,
    homogeneous_state,
    run_kinetic,
    step_1d,
    step_homogeneous,
)
from .twophase_macro import (
    BNConserved,
    EosSpec,
    EulerMixConserved,
    MacroDiagnostics,
    RelaxationSpec,
    TwoPhaseConserved,
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
from .velocity_space import (
    Moments,
    SpeciesSpec,
    VelocityGrid,
    local_equilibrium_distance,
    maxwellian,
    mixture_moments,
    moments,
)

__version__ = "0.1.0"
