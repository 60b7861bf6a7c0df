"""Planar traveling-wave shock structure of the six-field model.

Works in dimensionless variables scaled by the upstream equilibrium
state: lengths by c0 * tau_Pi0, speeds by the upstream sound speed
c0 = sqrt((7+2a)/(5+2a) kT0/m), density and temperature by their
upstream values.  The three conservative balance equations integrate to
the constant fluxes (J, P, Q); the remaining balance law collapses to a
scalar ODE

    (5 P - 8 J u) du/dxi = S(u)

whose denominator vanishes at the sonic point u = 5P/(8J).  The sonic
point coincides with the upstream velocity exactly at the critical Mach
number, which separates continuous profiles from profiles with an
embedded sub-shock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .collisions import CrossSectionSpec
from .errors import NoSubshockError, ProfileError, SonicSingularityError

__all__ = [
    "ShockProblem",
    "ShockState",
    "ShockProfile",
    "ReducedSystem",
    "critical_mach",
    "rh_euler",
    "rh_full",
    "subshock_pi",
    "reduced_system",
    "solve_continuous",
    "solve_subshock",
    "normalize_profile",
    "thickness",
]

# Mach numbers within this distance of the critical value are rejected:
# the solution type is not defined on the threshold itself.
THRESHOLD_GUARD = 1e-6


@dataclass(frozen=True)
class ShockProblem:
    """Upstream Mach number, molecular model, and source-term exponents.

    ``s_star`` and ``alpha_star`` are the exponents of the dimensionless
    source; for the standard kernel they equal (s, alpha), for the
    generalized one (s + q, alpha - beta/2).
    """

    mach0: float
    alpha: float
    s_star: float = 1.0
    alpha_star: float | None = None
    ode_rtol: float = 1e-10
    eps_eq: float = 1e-6
    max_span: float = 1e5
    n_samples: int = 1200

    def __post_init__(self):
        if not self.mach0 > 1.0:
            raise ValueError(f"mach0 must exceed 1, got {self.mach0}")
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if self.alpha_star is None:
            object.__setattr__(self, "alpha_star", self.alpha)
        if not (0.0 < self.eps_eq < 1e-2):
            raise ValueError("eps_eq must lie in (0, 1e-2)")
        if self.n_samples < 16:
            raise ValueError("n_samples must be at least 16")

    @classmethod
    def from_cross_section(cls, mach0: float, alpha: float, xsec: CrossSectionSpec, **kwargs):
        return cls(
            mach0=mach0, alpha=alpha,
            s_star=xsec.s_star, alpha_star=xsec.alpha_star(alpha),
            **kwargs,
        )

    @property
    def c_coef(self) -> float:
        """Dimensionless pressure coefficient (5 + 2 alpha)/(7 + 2 alpha)."""
        return (5.0 + 2.0 * self.alpha) / (7.0 + 2.0 * self.alpha)


@dataclass(frozen=True)
class ShockState:
    """Dimensionless (rho, u, T, Pi) at one point."""

    rho: float
    u: float
    T: float
    Pi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.u, self.T, self.Pi])


def critical_mach(alpha: float) -> float:
    """Mach number above which the shock speed exceeds the highest upstream
    characteristic speed: sqrt((5/3)(5+2 alpha)/(7+2 alpha))."""
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    return math.sqrt(5.0 / 3.0 * (5.0 + 2.0 * alpha) / (7.0 + 2.0 * alpha))


def rh_euler(problem: ShockProblem) -> tuple[ShockState, ShockState]:
    """Upstream and downstream equilibrium states of the jump conditions
    for the equilibrium subsystem (both carry Pi = 0)."""
    m0 = problem.mach0
    a = problem.alpha
    m0sq = m0 * m0
    rho1 = 2.0 * (3.0 + a) * m0sq / (5.0 + 2.0 * a + m0sq)
    u1 = (5.0 + 2.0 * a + m0sq) / (2.0 * (3.0 + a) * m0)
    t1 = (
        (7.0 + 2.0 * a) * m0sq * m0sq
        + (34.0 + 24.0 * a + 4.0 * a * a) * m0sq
        - (5.0 + 2.0 * a)
    ) / (4.0 * (3.0 + a) ** 2 * m0sq)
    upstream = ShockState(rho=1.0, u=m0, T=1.0, Pi=0.0)
    return upstream, ShockState(rho=rho1, u=u1, T=t1, Pi=0.0)


def subshock_pi(mach0: float, alpha: float) -> float:
    """Dynamic pressure of the post-jump state; vanishes exactly at the
    critical Mach number."""
    m0sq = mach0 * mach0
    A7 = 7.0 + 2.0 * alpha
    A5 = 5.0 + 2.0 * alpha
    return (
        (1.0 + alpha)
        * (3.0 * m0sq * m0sq * A7 * A7 - 2.0 * m0sq * A5 * A7 - 5.0 * A5 * A5)
        / (2.0 * A5 * A5 * (m0sq * A7 + 5.0 * A5))
    )


def rh_full(problem: ShockProblem) -> ShockState:
    """Post-jump state of the complete jump conditions (the sub-shock state).

    Defined only above the critical Mach number; its dynamic pressure
    vanishes exactly on the threshold.
    """
    m0 = problem.mach0
    a = problem.alpha
    mc = critical_mach(a)
    if m0 <= mc + THRESHOLD_GUARD:
        raise NoSubshockError(
            f"M0={m0} does not exceed the critical Mach number {mc:.12f}; no sub-shock exists"
        )
    m0sq = m0 * m0
    A7 = 7.0 + 2.0 * a
    A5 = 5.0 + 2.0 * a
    rho_s = 4.0 * m0sq * A7 / (m0sq * A7 + 5.0 * A5)
    u_s = 5.0 * A5 / (4.0 * m0 * A7) + m0 / 4.0
    t_s = (
        9.0 * m0sq * m0sq * A7 * A7
        + 2.0 * m0sq * A5 * A7 * (37.0 + 16.0 * a)
        - 15.0 * A5 * A5
    ) / (16.0 * m0sq * A5 * A5 * A7)
    return ShockState(rho=rho_s, u=u_s, T=t_s, Pi=subshock_pi(m0, a))


@dataclass(frozen=True)
class ReducedSystem:
    """Scalar reduction of the profile equations at fixed fluxes (J, P, Q)."""

    J: float
    P: float
    Q: float
    c: float
    alpha: float
    s_star: float
    alpha_star: float

    def recover(self, u):
        """Algebraic slaving of (rho, T, Pi) to the velocity.

        rho = J/u; with A = (P - J u)/c and B = Q/u - J u/2,
        rho T = (B - c A)/((alpha + 5/2) - c) and Pi = A - rho T.
        """
        u = np.asarray(u, dtype=float)
        rho = self.J / u
        A = (self.P - self.J * u) / self.c
        B = self.Q / u - 0.5 * self.J * u
        rho_t = (B - self.c * A) / ((self.alpha + 2.5) - self.c)
        Pi = A - rho_t
        T = rho_t * u / self.J
        return rho, T, Pi

    def denominator(self, u):
        """Sonic factor 5 P - 8 J u of the scalar profile equation."""
        return 5.0 * self.P - 8.0 * self.J * np.asarray(u, dtype=float)

    @property
    def sonic_u(self) -> float:
        return 5.0 * self.P / (8.0 * self.J)

    def flux(self, u):
        """Flux whose xi-derivative the source balances: 5 P u - 4 J u^2."""
        u = np.asarray(u, dtype=float)
        return 5.0 * self.P * u - 4.0 * self.J * u * u

    def source(self, u):
        """Dimensionless production term of the trace balance:

            -3 c rho Pi (T + Pi/rho)^s* (T + 3 Pi/(2 (alpha+1) rho))^(-2 alpha*).
        """
        rho, T, Pi = self.recover(u)
        base1 = T + Pi / rho
        base2 = T + 1.5 / (self.alpha + 1.0) * Pi / rho
        return -3.0 * self.c * rho * Pi * base1 ** self.s_star * base2 ** (-2.0 * self.alpha_star)

    def slope(self, u):
        """du/dxi along the profile."""
        return self.source(u) / self.denominator(u)

    def rho_slope(self, u):
        """d rho/dxi along the profile (rho = J/u)."""
        u = np.asarray(u, dtype=float)
        return -self.J / (u * u) * self.slope(u)


def reduced_system(problem: ShockProblem) -> ReducedSystem:
    """Fix (J, P, Q) from the upstream state and build the scalar reduction."""
    m0 = problem.mach0
    c = problem.c_coef
    J = m0
    P = m0 * m0 + c
    Q = 0.5 * m0 ** 3 + (problem.alpha + 2.5) * m0
    return ReducedSystem(
        J=J, P=P, Q=Q, c=c,
        alpha=problem.alpha, s_star=problem.s_star, alpha_star=problem.alpha_star,
    )


@dataclass(frozen=True)
class ShockProfile:
    """Sampled shock profile with its conserved fluxes.

    For sub-shock profiles the jump sits at xi = 0 and appears as two
    consecutive samples with equal xi.  ``normalized`` fields are filled
    by :func:`normalize_profile`.
    """

    xi: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    T: np.ndarray
    Pi: np.ndarray
    fluxes: tuple[float, float, float]
    problem: ShockProblem
    subshock: ShockState | None = None
    rho_norm: np.ndarray | None = None
    u_norm: np.ndarray | None = None
    T_norm: np.ndarray | None = None

    @property
    def subshock_xi(self) -> float | None:
        return 0.0 if self.subshock is not None else None

    def flux_residuals(self) -> np.ndarray:
        """Max relative drift of (J, P, Q) along the samples."""
        J = self.rho * self.u
        P = self.rho * self.u ** 2 + self.problem.c_coef * (self.rho * self.T + self.Pi)
        Q = (
            0.5 * self.rho * self.u ** 3
            + (self.problem.alpha + 2.5) * self.rho * self.T * self.u
            + self.problem.c_coef * self.Pi * self.u
        )
        out = np.empty(3)
        for i, (series, ref) in enumerate(zip((J, P, Q), self.fluxes)):
            out[i] = np.max(np.abs(series - ref)) / abs(ref)
        return out


def _integrate_branch(
    problem: ShockProblem, system: ReducedSystem, u_start: float, u_end: float
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the scalar ODE from u_start until u is within eps_eq of u_end.

    Returns (xi, u) samples starting at xi = 0.  The stop threshold leaves
    slack below eps_eq so the algebraically slaved fields (whose deviation
    is an O(1) multiple of the velocity deviation) also land within eps_eq
    of downstream.
    """
    target = u_end + 0.05 * problem.eps_eq

    def rhs(_, y):
        return [system.slope(y[0])]

    def reached(_, y):
        return y[0] - target

    reached.terminal = True
    reached.direction = -1

    sol = solve_ivp(
        rhs,
        (0.0, problem.max_span),
        [u_start],
        method="RK45",
        rtol=problem.ode_rtol,
        atol=1e-14,
        events=reached,
        dense_output=True,
    )
    if not sol.success:
        raise ProfileError(f"profile integration failed: {sol.message}")
    if sol.t_events[0].size == 0:
        raise ProfileError(
            f"downstream equilibrium not reached within xi-span {problem.max_span}: "
            f"final u={sol.y[0, -1]}, target {target}"
        )
    xi_end = sol.t_events[0][0]
    xi = np.linspace(0.0, xi_end, problem.n_samples)
    u = sol.sol(xi)[0]
    u[0] = u_start
    u[-1] = sol.y_events[0][0, 0]
    return xi, u


def _profile_from_branch(
    problem: ShockProblem,
    system: ReducedSystem,
    xi: np.ndarray,
    u: np.ndarray,
    subshock: ShockState | None,
) -> ShockProfile:
    rho, T, Pi = system.recover(u)
    if subshock is not None:
        # frozen upstream pad, then the duplicated jump point at xi = 0
        pad_span = max(0.25 * xi[-1], 1.0)
        n_pad = max(problem.n_samples // 8, 8)
        xi_pad = np.linspace(-pad_span, 0.0, n_pad)
        ones = np.ones_like(xi_pad)
        xi_all = np.concatenate([xi_pad, xi])
        rho_all = np.concatenate([ones * 1.0, rho])
        u_all = np.concatenate([ones * problem.mach0, u])
        t_all = np.concatenate([ones * 1.0, T])
        pi_all = np.concatenate([ones * 0.0, Pi])
    else:
        xi_all, rho_all, u_all, t_all, pi_all = xi, rho, u, T, Pi
    return ShockProfile(
        xi=xi_all, rho=rho_all, u=u_all, T=t_all, Pi=pi_all,
        fluxes=(system.J, system.P, system.Q),
        problem=problem,
        subshock=subshock,
    )


def solve_continuous(problem: ShockProblem) -> ShockProfile:
    """Heteroclinic profile connecting the two equilibrium states.

    Exists below the critical Mach number only; the launch point is
    displaced from upstream along the unstable direction by
    1e-6 (M0 - u1), which translation invariance makes immaterial.
    """
    mc = critical_mach(problem.alpha)
    if problem.mach0 >= mc - THRESHOLD_GUARD:
        raise SonicSingularityError(
            f"M0={problem.mach0} at or above the critical Mach number {mc:.12f}: "
            "the sonic point blocks a continuous profile"
        )
    upstream, downstream = rh_euler(problem)
    system = reduced_system(problem)
    delta = 1e-6 * (problem.mach0 - downstream.u)
    xi, u = _integrate_branch(problem, system, problem.mach0 - delta, downstream.u)
    return _profile_from_branch(problem, system, xi, u, subshock=None)


def solve_subshock(problem: ShockProblem) -> ShockProfile:
    """Profile with an embedded jump: frozen upstream for xi < 0, the
    complete-system jump at xi = 0, then relaxation to downstream."""
    state_s = rh_full(problem)  # raises below the critical Mach number
    _, downstream = rh_euler(problem)
    system = reduced_system(problem)
    xi, u = _integrate_branch(problem, system, state_s.u, downstream.u)
    return _profile_from_branch(problem, system, xi, u, subshock=state_s)


def normalize_profile(profile: ShockProfile) -> ShockProfile:
    """Map rho, u, T onto (phi - phi0)/(phi1 - phi0) and re-origin xi.

    Pi is left untouched.  The origin moves to the half-rise point of the
    normalized density for continuous profiles; sub-shock profiles keep
    the jump at xi = 0.
    """
    fields = {}
    for name in ("rho", "u", "T"):
        series = getattr(profile, name)
        phi0, phi1 = series[0], series[-1]
        if phi1 == phi0:
            raise ProfileError(f"degenerate jump in {name}: endpoints coincide")
        fields[name + "_norm"] = (series - phi0) / (phi1 - phi0)
    if profile.subshock is None:
        shift = float(np.interp(0.5, fields["rho_norm"], profile.xi))
    else:
        shift = 0.0
    return replace(profile, xi=profile.xi - shift, **fields)


def thickness(profile: ShockProfile) -> float:
    """Inverse maximum slope of the normalized density.

    The slope is evaluated from the reduced ODE on a fine velocity grid
    over the continuous branch, so the metric does not depend on the
    xi-sampling density.
    """
    system = ReducedSystem(
        J=profile.fluxes[0], P=profile.fluxes[1], Q=profile.fluxes[2],
        c=profile.problem.c_coef, alpha=profile.problem.alpha,
        s_star=profile.problem.s_star, alpha_star=profile.problem.alpha_star,
    )
    if profile.subshock is not None:
        u_hi = profile.subshock.u
    else:
        u_hi = float(np.max(profile.u))
    u_lo = float(np.min(profile.u))
    grid = np.linspace(u_lo, u_hi, 20001)[1:-1]
    max_slope = float(np.max(np.abs(system.rho_slope(grid))))
    rho_jump = abs(float(profile.rho[-1] - profile.rho[0]))
    if max_slope == 0.0:
        raise ProfileError("flat profile has no thickness")
    return rho_jump / max_slope
