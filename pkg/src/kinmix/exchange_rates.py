"""Momentum exchange rates between two Maxwellian species.

Closed forms for the pseudo-Maxwellian and hard-sphere kernels, plus the
quadrature oracle that validates them. The oracle is the authority: it
integrates the defining triple integral

    R_pq = int int int m_p m_q / (m_p + m_q) (|u| sigma - u)
           B(|u|) M_p(v) M_q(v_*) dsigma dv_* dv,   u = v - v_*,

directly, and every closed form shipped here is normalized so it agrees with
the oracle. The net constants in the hard-sphere form were fixed once against
the oracle; the validate-exchange harness mode regenerates the comparison
table. Rates carry the friction sign: they oppose the relative bulk velocity
nu = u_bar_p - u_bar_q.

Both Maxwellians share one temperature T; unequal-T exchange is out of scope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .collision_ops import KernelSpec
from .velocity_space import SpeciesSpec


@dataclass(frozen=True)
class ExchangeContext:
    """Two drifting Maxwellians at common temperature plus the kernel.

    Derived constants follow the product-of-Maxwellians reduction:
    K_pq = n_p n_q (m_p m_q)^{d/2} / (2 pi T)^d, mu_pq = 2T/(m_p+m_q),
    gamma_pq = 2 (m_p+m_q) T / (m_p m_q).
    """

    species_p: SpeciesSpec
    species_q: SpeciesSpec
    n_p: float
    n_q: float
    u_bar_p: np.ndarray
    u_bar_q: np.ndarray
    T: float
    kernel: KernelSpec
    dim: int

    def __post_init__(self):
        if self.T <= 0.0:
            raise ValueError("common temperature must be positive")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        object.__setattr__(self, "u_bar_p", np.asarray(self.u_bar_p, dtype=float))
        object.__setattr__(self, "u_bar_q", np.asarray(self.u_bar_q, dtype=float))
        if self.u_bar_p.shape != (self.dim,) or self.u_bar_q.shape != (self.dim,):
            raise ValueError("bulk velocities must have length dim")

    @property
    def m_p(self) -> float:
        return self.species_p.mass

    @property
    def m_q(self) -> float:
        return self.species_q.mass

    @property
    def total_mass(self) -> float:
        return self.m_p + self.m_q

    @property
    def rho_p(self) -> float:
        return self.m_p * self.n_p

    @property
    def rho_q(self) -> float:
        return self.m_q * self.n_q

    @property
    def K_pq(self) -> float:
        return self.n_p * self.n_q * (self.m_p * self.m_q) ** (self.dim / 2.0) / (
            2.0 * np.pi * self.T
        ) ** self.dim

    @property
    def mu_pq(self) -> float:
        return 2.0 * self.T / self.total_mass

    @property
    def gamma_pq(self) -> float:
        return 2.0 * self.total_mass * self.T / (self.m_p * self.m_q)

    @property
    def nu(self) -> np.ndarray:
        return self.u_bar_p - self.u_bar_q

    def swapped(self) -> "ExchangeContext":
        return ExchangeContext(
            self.species_q,
            self.species_p,
            self.n_q,
            self.n_p,
            self.u_bar_q,
            self.u_bar_p,
            self.T,
            self.kernel,
            self.dim,
        )


def xi_pseudo_maxwellian(ctx: ExchangeContext) -> float:
    """Friction coefficient xi in R = -xi rho_p rho_q (u_p - u_q).

    For a velocity-independent kernel the sigma integral is elementary and
    the linear response is exact for any densities and drifts:
    xi = A / (m_p + m_q) with A the total angular mass of the kernel. This
    equals the oracle's Delta-u -> 0 slope, which the tests verify.
    """
    if ctx.kernel.gamma != 0.0:
        raise ValueError("pseudo-Maxwellian coefficient requires gamma = 0")
    return ctx.kernel.total_angular_mass(ctx.dim) / ctx.total_mass


def rate_pseudo_maxwellian(ctx: ExchangeContext) -> np.ndarray:
    """Exchange rate -xi rho_p rho_q (u_bar_p - u_bar_q), exact for gamma=0."""
    return -xi_pseudo_maxwellian(ctx) * ctx.rho_p * ctx.rho_q * ctx.nu


# series switch point for i_pq: below x = nu^2/gamma = 4e-4 the closed form
# loses digits to cancellation while the degree-4 series is still ~1e-13
_IPQ_SERIES_X = 4e-4


def i_pq(nu: float, gamma_pq: float) -> float:
    """Radial profile I(nu) of the hard-sphere exchange integral.

    I(nu) = int w_z |w| exp(-|w - nu e_z|^2 / gamma) dw over R^3, which
    reduces to erf/exponential terms. The closed form is 0/0 at nu = 0; a
    Taylor branch handles the small-drift regime, switching where both
    expressions carry full double precision.
    """
    if nu < 0.0:
        raise ValueError("nu must be nonnegative")
    if gamma_pq <= 0.0:
        raise ValueError("gamma_pq must be positive")
    g = gamma_pq
    x = nu * nu / g
    if x < _IPQ_SERIES_X:
        s = (27720.0 + x * (5544.0 + x * (-396.0 + x * (44.0 - 5.0 * x)))) / 10395.0
        return math.pi * g * g * nu * s
    sq = math.sqrt(g)
    return math.pi * (
        math.sqrt(math.pi)
        * sq
        * (g * nu**2 + g**2 - g**3 / (4.0 * nu**2))
        * math.erf(nu / sq)
        + (g**2 * nu + g**3 / (2.0 * nu)) * math.exp(-(nu**2) / g)
    )


def i_pq_radial_quadrature(nu: float, gamma_pq: float) -> float:
    """The same integral evaluated as a 1D radial quadrature.

    After the angular integration, I(nu) = 2 pi int_0^inf r^4
    exp(-(r^2+nu^2)/gamma) 2 (a cosh a - sinh a)/a^2 dr with a = 2 r nu /
    gamma. Used to validate the closed form independently.
    """
    g = gamma_pq
    if nu == 0.0:
        return 0.0

    def integrand(r):
        a = 2.0 * r * nu / g
        if a < 1e-4:
            ang = a / 3.0 + a**3 / 30.0
        else:
            ang = (a * math.cosh(a) - math.sinh(a)) / (a * a)
        return r**4 * math.exp(-((r * r + nu * nu) / g)) * 2.0 * ang

    hi = nu + 12.0 * math.sqrt(g)
    val, _ = quad(integrand, 0.0, hi, limit=200, epsabs=0.0, epsrel=1e-12)
    return 2.0 * math.pi * val


def rate_hard_sphere_closed(ctx: ExchangeContext) -> np.ndarray:
    """Closed-form hard-sphere exchange rate, d=3, friction sign.

    R = -rho_p rho_q Psi(|nu|) nu with
    Psi = A I(|nu|) / ((pi gamma)^{3/2} (m_p+m_q) |nu|), the net constant
    fixed against the quadrature oracle (the reduction's K, mu, gamma factors
    collapse so that only the angular mass A and (pi gamma)^{3/2} survive).
    At nu = 0 the linear-response limit Psi -> (8 A / 3 M) sqrt(gamma/pi) /
    gamma ... is taken through the i_pq series, so the rate is continuous.
    """
    if ctx.dim != 3:
        raise ValueError("hard-sphere closed form is stated for dim = 3")
    if ctx.kernel.gamma != 1.0:
        raise ValueError("hard-sphere closed form requires gamma = 1")
    nu_vec = ctx.nu
    nu = float(np.linalg.norm(nu_vec))
    if nu == 0.0:
        return np.zeros(3)
    g = ctx.gamma_pq
    A = ctx.kernel.total_angular_mass(3)
    psi = A * i_pq(nu, g) / ((np.pi * g) ** 1.5 * ctx.total_mass * nu)
    return -ctx.rho_p * ctx.rho_q * psi * nu_vec


def xi_hard_sphere_linear(ctx: ExchangeContext) -> float:
    """Small-drift friction coefficient for hard spheres, d=3.

    Psi(|nu| -> 0) = (8 A / 3 M) sqrt(gamma / pi); valid only near velocity
    equilibrium, where the rate linearizes to -xi rho_p rho_q nu.
    """
    if ctx.dim != 3:
        raise ValueError("hard-sphere coefficient is stated for dim = 3")
    if ctx.kernel.gamma != 1.0:
        raise ValueError("hard-sphere coefficient requires gamma = 1")
    A = ctx.kernel.total_angular_mass(3)
    return 8.0 * A / (3.0 * ctx.total_mass) * math.sqrt(ctx.gamma_pq / math.pi)


def friction_zeta(xi: float, rho_1: float, rho_2: float) -> float:
    """Relative-velocity decay rate zeta = xi (rho_1 + rho_2)."""
    return xi * (rho_1 + rho_2)


def _angular_rule(dim: int, n: int):
    if dim == 2:
        th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(n, 2.0 * np.pi / n)
    t, wt = np.polynomial.legendre.leggauss(n)
    n_az = 2 * n
    ph = 2.0 * np.pi * (np.arange(n_az) + 0.5) / n_az
    st = np.sqrt(1.0 - t * t)
    pts = np.empty((n * n_az, 3))
    wts = np.empty(n * n_az)
    k = 0
    for i in range(n):
        for j in range(n_az):
            pts[k] = (st[i] * np.cos(ph[j]), st[i] * np.sin(ph[j]), t[i])
            wts[k] = wt[i] * (2.0 * np.pi / n_az)
            k += 1
    return pts, wts


def _gh_center_factor(mu: float, dim: int, order: int = 12) -> float:
    # int exp(-|W|^2/mu) dW over R^dim, by Gauss-Hermite in each axis
    _, w = np.polynomial.hermite.hermgauss(order)
    return (float(w.sum()) * math.sqrt(mu)) ** dim


def _relative_integrals(ctx: ExchangeContext, n_rad: int, n_ang: int):
    # S_vec = int w |w|^gamma exp(-|w - nu|^2 / gamma_pq) dw and the matching
    # scalar S_abs with one extra |w| power (the sigma-sum partner term)
    nu_vec = ctx.nu
    nu = float(np.linalg.norm(nu_vec))
    g = ctx.gamma_pq
    gamma_exp = ctx.kernel.gamma
    d = ctx.dim
    pts, wts = _angular_rule(d, n_ang)
    xg, wg = np.polynomial.legendre.leggauss(n_rad)
    r_hi = nu + 10.0 * math.sqrt(g)
    r = 0.5 * r_hi * (xg + 1.0)
    wr = 0.5 * r_hi * wg
    W = r[:, None, None] * pts[None, :, :]
    diff = W - nu_vec[None, None, :]
    ex = np.exp(-np.sum(diff * diff, axis=2) / g)
    meas = (r ** (d - 1) * wr)[:, None] * wts[None, :]
    rg = r[:, None] ** gamma_exp if gamma_exp != 0.0 else np.ones((n_rad, 1))
    common = ex * rg * meas
    S_vec = np.einsum("ra,rad->d", common, W)
    S_abs = float(np.einsum("ra,ra->", common, np.broadcast_to(r[:, None], ex.shape)))
    return S_vec, S_abs


def _oracle_once(ctx: ExchangeContext, n_rad: int, n_ang: int, n_sigma: int) -> np.ndarray:
    d = ctx.dim
    if d == 2:
        sig_pts, sig_wts = _angular_rule(2, n_sigma)
    else:
        sig_pts, sig_wts = _angular_rule(3, max(4, n_sigma // 8))
    cg = ctx.kernel.angular_constant
    gh = _gh_center_factor(ctx.mu_pq, d)
    S_vec, S_abs = _relative_integrals(ctx, n_rad, n_ang)
    sig_sum = cg * (sig_wts[:, None] * sig_pts).sum(axis=0)
    A = cg * float(sig_wts.sum())
    pref = ctx.m_p * ctx.m_q / ctx.total_mass * ctx.K_pq * gh
    return pref * (S_abs * sig_sum - A * S_vec)


def rate_quadrature_oracle(ctx: ExchangeContext, rel_tol: float = 1e-8) -> np.ndarray:
    """Authoritative quadrature of the exchange rate.

    Reduces (v, v_*) to center and relative variables; the center integral is
    Gauss-Hermite, the relative integral a radial Gauss-Legendre rule crossed
    with an angular rule around the kink at w = 0. Resolution doubles until
    two successive evaluations agree to rel_tol; non-convergence raises.
    """
    nu = float(np.linalg.norm(ctx.nu))
    scale = ctx.rho_p * ctx.rho_q * (nu + math.sqrt(ctx.gamma_pq))
    n_rad, n_ang, n_sig = 48, 96, 128
    prev = _oracle_once(ctx, n_rad, n_ang, n_sig)
    for _ in range(4):
        n_rad *= 2
        n_ang = min(2 * n_ang, 512)
        cur = _oracle_once(ctx, n_rad, n_ang, n_sig)
        if float(np.linalg.norm(cur - prev)) <= rel_tol * scale:
            return cur
        prev = cur
    raise RuntimeError(
        "exchange oracle failed to converge: "
        f"last delta {float(np.linalg.norm(cur - prev)):.3e} at n_rad={n_rad}, "
        f"scale {scale:.3e}"
    )
