"""Finite-volume solvers for the isentropic two-phase macroscopic models.

Three 1D systems share the same Rusanov + SSP-RK2 machinery:

* the conservative five-equation relative-velocity system with conserved
  vector U = (rho, alpha1 rho, alpha1 rho1, rho u_bar, w), pressure
  relaxation -(P2 - P1)/tau acting on alpha1 rho and friction -zeta w on the
  relative velocity w = u1 - u2;
* the isentropic Baer-Nunziato comparator evolving (alpha1, alpha1 rho1,
  alpha1 rho1 u1, alpha2 rho2, alpha2 rho2 u2) with non-conservative
  interface products u_I d_x alpha1 and P_I d_x alpha_p and phase-momentum
  friction +/- zeta_tilde (u2 - u1), zeta_tilde = xi rho / (alpha1 alpha2);
* the multi-species Euler limit with a single velocity and temperature.

Both phases close with the isentropic law P = c rho^gamma and enthalpy
h = c gamma / (gamma - 1) rho^{gamma - 1}, which satisfies dP/drho =
rho dh/drho identically.

Stiff sources are integrated semi-implicitly after the hyperbolic SSP-RK2
update: the friction factor on w is exact (exponential), and pressure
relaxation solves its implicit-Euler equation with a safeguarded Newton
iteration per cell, so tau far below dt remains stable. Total mass and total
momentum never appear in any source, so the conservative fluxes keep them at
machine precision under periodic boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .velocity_space import SpeciesSpec

ALPHA_MIN = 1e-8
_NEWTON_TOL = 1e-10
_NEWTON_MAX = 60


@dataclass(frozen=True)
class EosSpec:
    """Isentropic closure P = c rho^gamma."""

    c: float = 1.0
    gamma_exp: float = 2.0

    def __post_init__(self):
        if self.c <= 0.0:
            raise ValueError("pressure constant c must be positive")
        if self.gamma_exp <= 1.0:
            raise ValueError("polytropic exponent must exceed 1")


def eos_pressure(rho_p, eos: EosSpec):
    """P = c rho^gamma; rejects non-positive densities."""
    rho_p = np.asarray(rho_p, dtype=float)
    if np.any(rho_p <= 0.0):
        raise ValueError("phase density must be positive")
    return eos.c * rho_p**eos.gamma_exp


def enthalpy(rho_p, eos: EosSpec):
    """h = c gamma/(gamma-1) rho^{gamma-1}, so that dP/drho = rho dh/drho."""
    rho_p = np.asarray(rho_p, dtype=float)
    if np.any(rho_p <= 0.0):
        raise ValueError("phase density must be positive")
    g = eos.gamma_exp
    return eos.c * g / (g - 1.0) * rho_p ** (g - 1.0)


def relaxation_tau(eps: float, lam: float, rho: float, eta_1: float, eta_2: float) -> float:
    """Pressure-relaxation time sqrt(eps) lambda / rho (eta1+eta2)^2 / (eta1 eta2)."""
    for name, val in (("eps", eps), ("lambda", lam), ("rho", rho), ("eta_1", eta_1), ("eta_2", eta_2)):
        if val <= 0.0:
            raise ValueError(f"{name} must be positive")
    return np.sqrt(eps) * lam / rho * (eta_1 + eta_2) ** 2 / (eta_1 * eta_2)


@dataclass(frozen=True)
class RelaxationSpec:
    """Source coefficients: tau for pressure relaxation, zeta for friction.

    xi is the microscopic exchange coefficient; the Baer-Nunziato comparator
    needs it to form zeta_tilde = xi rho / (alpha1 alpha2). zeta and xi are
    independent knobs because the two systems state their friction terms
    differently.
    """

    tau: float
    zeta: float = 0.0
    xi: float | None = None

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if self.zeta < 0.0:
            raise ValueError("zeta must be nonnegative")

    @staticmethod
    def from_interface(
        eps: float, lam: float, rho: float, eta_1: float, eta_2: float,
        zeta: float = 0.0, xi: float | None = None,
    ) -> "RelaxationSpec":
        return RelaxationSpec(relaxation_tau(eps, lam, rho, eta_1, eta_2), zeta, xi)


@dataclass
class MacroDiagnostics:
    clamp_events: int = 0
    newton_iterations: int = 0


@dataclass(frozen=True)
class TwoPhasePrimitive:
    """Pointwise (or per-cell array) primitive variables of the five-equation
    system. kappa_p = alpha_p rho_p / rho weight the mixture velocity."""

    alpha1: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    u1: np.ndarray
    u2: np.ndarray

    @property
    def alpha2(self):
        return 1.0 - self.alpha1

    @property
    def rho(self):
        return self.alpha1 * self.rho1 + self.alpha2 * self.rho2

    @property
    def kappa1(self):
        return self.alpha1 * self.rho1 / self.rho

    @property
    def kappa2(self):
        return self.alpha2 * self.rho2 / self.rho

    @property
    def u_bar(self):
        return self.kappa1 * self.u1 + self.kappa2 * self.u2

    @property
    def w(self):
        return self.u1 - self.u2


@dataclass(frozen=True)
class TwoPhaseConserved:
    """U = (rho, alpha1 rho, alpha1 rho1, rho u_bar, w), arrays over cells."""

    rho: np.ndarray
    alpha1_rho: np.ndarray
    alpha1_rho1: np.ndarray
    momentum: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name in ("rho", "alpha1_rho", "alpha1_rho1", "momentum", "w"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        if np.any(self.rho <= 0.0):
            raise ValueError("total density must be positive")
        if np.any(self.alpha1_rho <= 0.0) or np.any(self.alpha1_rho >= self.rho):
            raise ValueError("alpha1 rho must lie strictly between 0 and rho")
        if np.any(self.alpha1_rho1 > self.rho):
            raise ValueError("alpha1 rho1 cannot exceed rho")

    @property
    def n_cells(self) -> int:
        return self.rho.shape[0]

    def as_array(self) -> np.ndarray:
        return np.stack([self.rho, self.alpha1_rho, self.alpha1_rho1, self.momentum, self.w])

    @staticmethod
    def from_array(U: np.ndarray) -> "TwoPhaseConserved":
        return TwoPhaseConserved(U[0], U[1], U[2], U[3], U[4])


def conserved_from_primitive(W: TwoPhasePrimitive) -> TwoPhaseConserved:
    rho = W.rho
    return TwoPhaseConserved(
        rho=rho,
        alpha1_rho=W.alpha1 * rho,
        alpha1_rho1=W.alpha1 * W.rho1,
        momentum=rho * W.u_bar,
        w=W.w,
    )


def primitive_from_conserved(
    U: TwoPhaseConserved, eos: EosSpec, diag: MacroDiagnostics | None = None
) -> TwoPhasePrimitive:
    """Exact algebraic inversion; alpha1 is clamped into
    (ALPHA_MIN, 1 - ALPHA_MIN) with a diagnostic when a phase nears vacuum."""
    alpha1 = U.alpha1_rho / U.rho
    clamped = np.clip(alpha1, ALPHA_MIN, 1.0 - ALPHA_MIN)
    if diag is not None:
        diag.clamp_events += int(np.count_nonzero(clamped != alpha1))
    alpha1 = clamped
    rho1 = U.alpha1_rho1 / alpha1
    rho2 = (U.rho - U.alpha1_rho1) / (1.0 - alpha1)
    u_bar = U.momentum / U.rho
    kappa1 = U.alpha1_rho1 / U.rho
    kappa2 = 1.0 - kappa1
    return TwoPhasePrimitive(
        alpha1=alpha1,
        rho1=rho1,
        rho2=rho2,
        u1=u_bar + kappa2 * U.w,
        u2=u_bar - kappa1 * U.w,
    )


def _sound_speed(rho_p, eos: EosSpec):
    # dP/drho = c gamma rho^{gamma-1}
    return np.sqrt(eos.c * eos.gamma_exp * rho_p ** (eos.gamma_exp - 1.0))


def rdt_wave_speed(W: TwoPhasePrimitive, eos: EosSpec):
    """Per-cell bound max_p(|u_p| + c_p) + |u_bar| + |w|."""
    per_phase = np.maximum(
        np.abs(W.u1) + _sound_speed(W.rho1, eos),
        np.abs(W.u2) + _sound_speed(W.rho2, eos),
    )
    return per_phase + np.abs(W.u_bar) + np.abs(W.w)


def _extend(arr: np.ndarray, bc: str) -> np.ndarray:
    if bc == "periodic":
        return np.concatenate([arr[..., -1:], arr, arr[..., :1]], axis=-1)
    if bc == "transmissive":
        return np.concatenate([arr[..., :1], arr, arr[..., -1:]], axis=-1)
    raise ValueError(f"unknown boundary condition {bc!r}")


def _rusanov_divergence(U: np.ndarray, F: np.ndarray, s: np.ndarray, dx: float, bc: str):
    # F_{i+1/2} = (F_i + F_{i+1})/2 - s_{i+1/2} (U_{i+1} - U_i)/2
    Ue, Fe, se = _extend(U, bc), _extend(F, bc), _extend(s, bc)
    s_face = np.maximum(se[:-1], se[1:])
    flux = 0.5 * (Fe[..., :-1] + Fe[..., 1:]) - 0.5 * s_face * (Ue[..., 1:] - Ue[..., :-1])
    return (flux[..., 1:] - flux[..., :-1]) / dx


def _rdt_flux(W: TwoPhasePrimitive, eos: EosSpec) -> np.ndarray:
    P1 = eos_pressure(W.rho1, eos)
    P2 = eos_pressure(W.rho2, eos)
    rho = W.rho
    return np.stack(
        [
            rho * W.u_bar,
            W.alpha1 * rho * W.u_bar,
            W.alpha1 * W.rho1 * W.u1,
            W.alpha1 * W.rho1 * W.u1**2 + W.alpha1 * P1
            + W.alpha2 * W.rho2 * W.u2**2 + W.alpha2 * P2,
            0.5 * W.u1**2 + enthalpy(W.rho1, eos) - 0.5 * W.u2**2 - enthalpy(W.rho2, eos),
        ]
    )


def _check_state(U: np.ndarray, label: str):
    if not np.isfinite(U).all():
        raise FloatingPointError(f"non-finite values in {label} update")


def rdt_rhs(
    U: TwoPhaseConserved,
    dx: float,
    eos: EosSpec,
    relax: RelaxationSpec,
    bc: str = "periodic",
    diag: MacroDiagnostics | None = None,
) -> np.ndarray:
    """dU/dt: Rusanov flux divergence plus the relaxation sources."""
    W = primitive_from_conserved(U, eos, diag)
    F = _rdt_flux(W, eos)
    s = rdt_wave_speed(W, eos)
    rhs = -_rusanov_divergence(U.as_array(), F, s, dx, bc)
    P1 = eos_pressure(W.rho1, eos)
    P2 = eos_pressure(W.rho2, eos)
    rhs[1] -= (P2 - P1) / relax.tau
    rhs[4] -= relax.zeta * U.w
    _check_state(rhs, "five-equation rhs")
    return rhs


def _hyperbolic_rk2(U_arr, rhs_fn, dt):
    k1 = rhs_fn(U_arr)
    stage = U_arr + dt * k1
    k2 = rhs_fn(stage)
    return 0.5 * (U_arr + stage + dt * k2)


def _pressure_newton_rdt(U: TwoPhaseConserved, dt, eos, relax, diag):
    # implicit Euler on a = alpha1 rho with b = alpha1 rho1 and rho frozen:
    # g(a) = a - a0 + dt/tau (P2(a) - P1(a)) = 0, monotone increasing in a
    rho, b, a0 = U.rho, U.alpha1_rho1, U.alpha1_rho
    g_exp = eos.gamma_exp
    lo = rho * ALPHA_MIN
    hi = rho * (1.0 - ALPHA_MIN)
    a = np.clip(a0, lo, hi)
    coef = dt / relax.tau
    for _ in range(_NEWTON_MAX):
        rho1 = b * rho / a
        rho2 = (rho - b) * rho / (rho - a)
        P1 = eos_pressure(rho1, eos)
        P2 = eos_pressure(rho2, eos)
        g = a - a0 + coef * (P2 - P1)
        if float(np.max(np.abs(g))) < _NEWTON_TOL:
            return a
        dg = 1.0 + coef * g_exp * (P2 / (rho - a) + P1 / a)
        a = np.clip(a - g / dg, lo, hi)
        if diag is not None:
            diag.newton_iterations += 1
    raise RuntimeError(
        f"pressure relaxation Newton failed to reach {_NEWTON_TOL} "
        f"(max residual {float(np.max(np.abs(g))):.3e})"
    )


def rdt_step(
    U: TwoPhaseConserved,
    dt: float,
    dx: float,
    eos: EosSpec,
    relax: RelaxationSpec,
    bc: str = "periodic",
    diag: MacroDiagnostics | None = None,
) -> TwoPhaseConserved:
    """SSP-RK2 on the fluxes, then semi-implicit sources.

    Friction multiplies w by exp(-zeta dt) exactly; pressure relaxation is
    implicit Euler solved by Newton, stable for tau << dt. rho and rho u_bar
    see no source, so they are conserved to machine precision.
    """
    W = primitive_from_conserved(U, eos, diag)
    s_max = float(np.max(rdt_wave_speed(W, eos)))
    if U.n_cells > 1 and dt > 0.9 * dx / s_max * (1.0 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds 0.9 dx / s_max = {0.9 * dx / s_max:.3e}")

    def hyp_rhs(arr):
        Ui = TwoPhaseConserved.from_array(arr)
        Wi = primitive_from_conserved(Ui, eos, diag)
        return -_rusanov_divergence(arr, _rdt_flux(Wi, eos), rdt_wave_speed(Wi, eos), dx, bc)

    out = _hyperbolic_rk2(U.as_array(), hyp_rhs, dt)
    _check_state(out, "five-equation")
    mid = TwoPhaseConserved.from_array(out)
    w_new = mid.w * np.exp(-relax.zeta * dt)
    a_new = _pressure_newton_rdt(replace(mid, w=w_new), dt, eos, relax, diag)
    return replace(mid, w=w_new, alpha1_rho=a_new)


@dataclass(frozen=True)
class BNConserved:
    """Baer-Nunziato variables (alpha1, alpha1 rho1, alpha1 rho1 u1,
    alpha2 rho2, alpha2 rho2 u2), arrays over cells."""

    alpha1: np.ndarray
    m1: np.ndarray
    mom1: np.ndarray
    m2: np.ndarray
    mom2: np.ndarray

    def __post_init__(self):
        for name in ("alpha1", "m1", "mom1", "m2", "mom2"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        if np.any(self.alpha1 <= 0.0) or np.any(self.alpha1 >= 1.0):
            raise ValueError("alpha1 must lie strictly inside (0, 1)")
        if np.any(self.m1 <= 0.0) or np.any(self.m2 <= 0.0):
            raise ValueError("phase masses must be positive")

    @property
    def n_cells(self) -> int:
        return self.alpha1.shape[0]

    def as_array(self) -> np.ndarray:
        return np.stack([self.alpha1, self.m1, self.mom1, self.m2, self.mom2])

    @staticmethod
    def from_array(U: np.ndarray) -> "BNConserved":
        return BNConserved(U[0], U[1], U[2], U[3], U[4])


def bn_primitive(U: BNConserved, diag: MacroDiagnostics | None = None):
    alpha1 = np.clip(U.alpha1, ALPHA_MIN, 1.0 - ALPHA_MIN)
    if diag is not None:
        diag.clamp_events += int(np.count_nonzero(alpha1 != U.alpha1))
    return TwoPhasePrimitive(
        alpha1=alpha1,
        rho1=U.m1 / alpha1,
        rho2=U.m2 / (1.0 - alpha1),
        u1=U.mom1 / U.m1,
        u2=U.mom2 / U.m2,
    )


def _interface_pressure(W: TwoPhasePrimitive, eos: EosSpec, convention: str):
    P1 = eos_pressure(W.rho1, eos)
    P2 = eos_pressure(W.rho2, eos)
    if convention == "alpha_weighted":
        return W.alpha1 * P1 + W.alpha2 * P2
    if convention == "P1":
        return P1
    if convention == "P2":
        return P2
    raise ValueError(f"unknown interface pressure convention {convention!r}")


def _face_gradient_product(q_cell: np.ndarray, alpha: np.ndarray, dx: float, bc: str):
    # sum of face contributions: q_{i+1/2} (a_{i+1} - a_i)/2 + q_{i-1/2} (a_i - a_{i-1})/2
    qe, ae = _extend(q_cell, bc), _extend(alpha, bc)
    q_face = 0.5 * (qe[:-1] + qe[1:])
    jump = ae[1:] - ae[:-1]
    contrib = q_face * jump
    return 0.5 * (contrib[1:] + contrib[:-1]) / dx


def bn_rhs(
    U: BNConserved,
    dx: float,
    eos: EosSpec,
    relax: RelaxationSpec,
    bc: str = "periodic",
    p_interface: str = "alpha_weighted",
    diag: MacroDiagnostics | None = None,
) -> np.ndarray:
    """dU/dt for the Baer-Nunziato comparator.

    Conservative phase fluxes get the same Rusanov treatment and the same
    wave-speed bound as the five-equation system; the interface products are
    central differences of alpha against face-averaged u_I = u_bar and P_I.
    Friction needs relax.xi.
    """
    W = bn_primitive(U, diag)
    P1 = eos_pressure(W.rho1, eos)
    P2 = eos_pressure(W.rho2, eos)
    F = np.stack(
        [
            np.zeros_like(W.alpha1),
            U.m1 * W.u1,
            U.m1 * W.u1**2 + W.alpha1 * P1,
            U.m2 * W.u2,
            U.m2 * W.u2**2 + W.alpha2 * P2,
        ]
    )
    s = rdt_wave_speed(W, eos)
    rhs = -_rusanov_divergence(U.as_array(), F, s, dx, bc)
    u_bar = W.u_bar
    P_I = _interface_pressure(W, eos, p_interface)
    rhs[0] -= _face_gradient_product(u_bar, W.alpha1, dx, bc)
    rhs[2] += _face_gradient_product(P_I, W.alpha1, dx, bc)
    rhs[4] += _face_gradient_product(P_I, W.alpha2, dx, bc)
    rhs[0] -= (P2 - P1) / relax.tau
    if relax.xi is not None and relax.xi != 0.0:
        zeta_tilde = relax.xi * W.rho / (W.alpha1 * W.alpha2)
        drag = zeta_tilde * (W.u2 - W.u1)
        rhs[2] += drag
        rhs[4] -= drag
    _check_state(rhs, "phase-resolved rhs")
    return rhs


def _pressure_newton_bn(U: BNConserved, dt, eos, relax, diag):
    # implicit Euler on alpha1 with both phase masses frozen
    b1, b2, a0 = U.m1, U.m2, U.alpha1
    g_exp = eos.gamma_exp
    a = np.clip(a0, ALPHA_MIN, 1.0 - ALPHA_MIN)
    coef = dt / relax.tau
    for _ in range(_NEWTON_MAX):
        P1 = eos_pressure(b1 / a, eos)
        P2 = eos_pressure(b2 / (1.0 - a), eos)
        g = a - a0 + coef * (P2 - P1)
        if float(np.max(np.abs(g))) < _NEWTON_TOL:
            return a
        dg = 1.0 + coef * g_exp * (P2 / (1.0 - a) + P1 / a)
        a = np.clip(a - g / dg, ALPHA_MIN, 1.0 - ALPHA_MIN)
        if diag is not None:
            diag.newton_iterations += 1
    raise RuntimeError(
        f"pressure relaxation Newton failed to reach {_NEWTON_TOL} "
        f"(max residual {float(np.max(np.abs(g))):.3e})"
    )


def bn_step(
    U: BNConserved,
    dt: float,
    dx: float,
    eos: EosSpec,
    relax: RelaxationSpec,
    bc: str = "periodic",
    p_interface: str = "alpha_weighted",
    diag: MacroDiagnostics | None = None,
) -> BNConserved:
    """SSP-RK2 on fluxes and interface products, then semi-implicit sources.

    The friction pair (+/- zeta_tilde (u2 - u1)) conserves total momentum
    exactly; it is integrated as an exact exponential on w with the phase
    masses frozen. Pressure relaxation is implicit Euler on alpha1.
    """
    W = bn_primitive(U, diag)
    s_max = float(np.max(rdt_wave_speed(W, eos)))
    if U.n_cells > 1 and dt > 0.9 * dx / s_max * (1.0 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds 0.9 dx / s_max = {0.9 * dx / s_max:.3e}")

    def hyp_rhs(arr):
        Ui = BNConserved.from_array(arr)
        Wi = bn_primitive(Ui, diag)
        P1 = eos_pressure(Wi.rho1, eos)
        P2 = eos_pressure(Wi.rho2, eos)
        F = np.stack(
            [
                np.zeros_like(Wi.alpha1),
                arr[1] * Wi.u1,
                arr[1] * Wi.u1**2 + Wi.alpha1 * P1,
                arr[3] * Wi.u2,
                arr[3] * Wi.u2**2 + Wi.alpha2 * P2,
            ]
        )
        out = -_rusanov_divergence(arr, F, rdt_wave_speed(Wi, eos), dx, bc)
        P_I = _interface_pressure(Wi, eos, p_interface)
        out[0] -= _face_gradient_product(Wi.u_bar, Wi.alpha1, dx, bc)
        out[2] += _face_gradient_product(P_I, Wi.alpha1, dx, bc)
        out[4] += _face_gradient_product(P_I, Wi.alpha2, dx, bc)
        return out

    out = _hyperbolic_rk2(U.as_array(), hyp_rhs, dt)
    _check_state(out, "phase-resolved")
    mid = BNConserved.from_array(out)
    if relax.xi is not None and relax.xi != 0.0:
        Wm = bn_primitive(mid, diag)
        zeta_tilde = relax.xi * Wm.rho / (Wm.alpha1 * Wm.alpha2)
        # dw/dt = -zeta_tilde (1/m1 + 1/m2) w at frozen masses
        rate = zeta_tilde * (1.0 / mid.m1 + 1.0 / mid.m2)
        w_old = Wm.u1 - Wm.u2
        w_new = w_old * np.exp(-rate * dt)
        mom_tot = mid.mom1 + mid.mom2
        u_bar = mom_tot / (mid.m1 + mid.m2)
        kappa1 = mid.m1 / (mid.m1 + mid.m2)
        mom1 = mid.m1 * (u_bar + (1.0 - kappa1) * w_new)
        mid = replace(mid, mom1=mom1, mom2=mom_tot - mom1)
    a_new = _pressure_newton_bn(mid, dt, eos, relax, diag)
    return replace(mid, alpha1=a_new)


@dataclass(frozen=True)
class EulerMixConserved:
    """Single-velocity mixture: per-species densities, momentum, energy."""

    rho_p: np.ndarray
    momentum: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho_p", np.atleast_2d(np.asarray(self.rho_p, dtype=float)))
        object.__setattr__(self, "momentum", np.atleast_1d(np.asarray(self.momentum, dtype=float)))
        object.__setattr__(self, "energy", np.atleast_1d(np.asarray(self.energy, dtype=float)))
        if np.any(self.rho_p.sum(axis=0) <= 0.0):
            raise ValueError("total density must be positive")

    @property
    def n_cells(self) -> int:
        return self.momentum.shape[0]

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.rho_p, self.momentum[None], self.energy[None]])

    @staticmethod
    def from_array(U: np.ndarray) -> "EulerMixConserved":
        return EulerMixConserved(U[:-2], U[-2], U[-1])


def euler_mix_rhs(
    U: EulerMixConserved,
    dx: float,
    species,
    dim: int,
    bc: str = "periodic",
) -> np.ndarray:
    """dU/dt: Rusanov fluxes of the single-temperature mixture system.

    Pressure is sum_p n_p T_eq with T_eq recovered from the energy; the
    energy flux carries the (d+2)/2 factor.
    """
    rho = U.rho_p.sum(axis=0)
    u = U.momentum / rho
    n = sum(U.rho_p[p] / species[p].mass for p in range(len(species)))
    internal = U.energy - 0.5 * rho * u**2
    if np.any(internal <= 0.0):
        raise FloatingPointError("non-positive internal energy")
    T = internal / (0.5 * dim * n)
    P = n * T
    F = np.concatenate(
        [
            U.rho_p * u[None],
            (rho * u**2 + P)[None],
            ((0.5 * rho * u**2 + 0.5 * (dim + 2.0) * n * T) * u)[None],
        ]
    )
    s = np.abs(u) + np.sqrt((dim + 2.0) / dim * P / rho)
    rhs = -_rusanov_divergence(U.as_array(), F, s, dx, bc)
    _check_state(rhs, "mixture-limit rhs")
    return rhs


def euler_mix_step(
    U: EulerMixConserved,
    dt: float,
    dx: float,
    species,
    dim: int,
    bc: str = "periodic",
) -> EulerMixConserved:
    rho = U.rho_p.sum(axis=0)
    u = U.momentum / rho
    n = sum(U.rho_p[p] / species[p].mass for p in range(len(species)))
    T = (U.energy - 0.5 * rho * u**2) / (0.5 * dim * n)
    s_max = float(np.max(np.abs(u) + np.sqrt((dim + 2.0) / dim * np.maximum(n * T, 0.0) / rho)))
    if U.n_cells > 1 and dt > 0.9 * dx / s_max * (1.0 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds 0.9 dx / s_max = {0.9 * dx / s_max:.3e}")
    out = _hyperbolic_rk2(U.as_array(), lambda arr: euler_mix_rhs(
        EulerMixConserved.from_array(arr), dx, species, dim, bc), dt)
    _check_state(out, "mixture-limit")
    return EulerMixConserved.from_array(out)
