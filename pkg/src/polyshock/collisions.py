"""Binary collision kinematics with continuous internal energy.

The post/pre collision pair is parametrized by two energy-repartition
fractions (r, R) and a scattering direction omega: R splits the total
center-of-mass energy E between relative kinetic and internal energy,
r splits the internal pool between the two molecules.  The resulting
transformation is an involution whose Jacobian has the closed form
(1-R)/(1-R') * sqrt(R/R'); both facts are checked numerically by the
test suite rather than proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCollisionError,
    SingularCrossSectionError,
    SingularJacobianError,
)
from .gas import GasParameters

__all__ = [
    "CollisionState",
    "CrossSectionSpec",
    "collision_transform",
    "collision_jacobian",
    "cross_section",
    "microreversibility_residual",
    "collision_invariant_residuals",
    "total_energy",
]

_UNIT_TOL = 1e-12


def _vec3(x) -> tuple[float, float, float]:
    t = tuple(float(c) for c in x)
    if len(t) != 3:
        raise ValueError("expected a 3-vector")
    return t


@dataclass(frozen=True)
class CollisionState:
    """Microscopic pre/post collision tuple (v, v*, I, I*, r, R, omega)."""

    v: tuple[float, float, float]
    v_star: tuple[float, float, float]
    I: float
    I_star: float
    r: float
    R: float
    omega: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "v", _vec3(self.v))
        object.__setattr__(self, "v_star", _vec3(self.v_star))
        object.__setattr__(self, "omega", _vec3(self.omega))
        if self.I < 0.0 or self.I_star < 0.0:
            raise ValueError("internal energies must be nonnegative")
        if not (0.0 <= self.r <= 1.0 and 0.0 <= self.R <= 1.0):
            raise ValueError("repartition parameters must lie in [0, 1]")
        norm = math.sqrt(sum(c * c for c in self.omega))
        if abs(norm - 1.0) > _UNIT_TOL:
            raise ValueError(f"omega must be a unit vector, |omega|={norm}")

    def swapped(self) -> "CollisionState":
        """Exchange the two molecules (v <-> v*, I <-> I*, r -> 1-r)."""
        return CollisionState(
            v=self.v_star, v_star=self.v, I=self.I_star, I_star=self.I,
            r=1.0 - self.r, R=self.R, omega=self.omega,
        )


@dataclass(frozen=True)
class CrossSectionSpec:
    """Collision kernel selector.

    Standard:     K * R**s * |v - v*|**(2s)
    Generalized:  K * R**s * |v - v*|**(2s) * ((1-R)(I+I*))**beta * |Gbar|**(2q)

    where Gbar is the average peculiar velocity of the pair,
    ((v - u) + (v* - u)) / 2.  Parameter bounds: s, q > -3/2, beta > -2.
    """

    variant: str = "standard"
    K: float = 1.0
    s: float = 0.0
    beta: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if self.variant not in ("standard", "generalized"):
            raise ValueError(f"variant must be 'standard' or 'generalized', got {self.variant!r}")
        if not self.K > 0.0:
            raise ValueError(f"K must be positive, got {self.K}")
        if not self.s > -1.5:
            raise ValueError(f"s must exceed -3/2, got {self.s}")
        if self.variant == "generalized":
            if not self.beta > -2.0:
                raise ValueError(f"beta must exceed -2, got {self.beta}")
            if not self.q > -1.5:
                raise ValueError(f"q must exceed -3/2, got {self.q}")
        elif self.beta != 0.0 or self.q != 0.0:
            raise ValueError("beta and q apply to the generalized variant only")

    @property
    def s_star(self) -> float:
        """Exponent of the equilibrium-pressure-like factor in the production term."""
        return self.s + self.q if self.variant == "generalized" else self.s

    def alpha_star(self, alpha: float) -> float:
        """Exponent shift of the internal-energy factor in the production term."""
        return alpha - self.beta / 2.0 if self.variant == "generalized" else alpha


def total_energy(c: CollisionState, params: GasParameters) -> float:
    """Center-of-mass energy E = (m/4) |v - v*|^2 + I + I*."""
    g = np.subtract(c.v, c.v_star)
    return 0.25 * params.mass * float(g @ g) + c.I + c.I_star


def collision_transform(c: CollisionState, params: GasParameters) -> CollisionState:
    """Apply the energy-repartition collision map.

    Returns (v', v'*, I', I'*, r', R') with

        v'  = (v + v*)/2 + sqrt(R E / m) T_omega[ghat]
        v'* = (v + v*)/2 - sqrt(R E / m) T_omega[ghat]
        I'  = r (1-R) E,   I'* = (1-r)(1-R) E
        R'  = m |v - v*|^2 / (4 E),   r' = I / (I + I*)

    where ghat is the unit relative velocity and T_omega reflects across
    the plane orthogonal to omega.  Momentum and total (kinetic plus
    internal) energy are conserved exactly.
    """
    m = params.mass
    v = np.asarray(c.v)
    vs = np.asarray(c.v_star)
    g = v - vs
    gnorm = float(np.linalg.norm(g))
    E = 0.25 * m * gnorm * gnorm + c.I + c.I_star
    if E <= 0.0:
        raise DegenerateCollisionError("zero total collision energy")
    pool = c.I + c.I_star
    if pool <= 0.0:
        raise DegenerateCollisionError("zero internal-energy pool: r' undefined")
    if gnorm == 0.0:
        raise DegenerateCollisionError("zero relative velocity: scattering direction undefined")
    ghat = g / gnorm
    omega = np.asarray(c.omega)
    t_omega = ghat - 2.0 * float(omega @ ghat) * omega
    root = math.sqrt(c.R * E / m)
    center = 0.5 * (v + vs)
    v_p = center + root * t_omega
    v_ps = center - root * t_omega
    return CollisionState(
        v=tuple(v_p),
        v_star=tuple(v_ps),
        I=c.r * (1.0 - c.R) * E,
        I_star=(1.0 - c.r) * (1.0 - c.R) * E,
        r=c.I / pool,
        R=0.25 * m * gnorm * gnorm / E,
        omega=c.omega,
    )


def collision_jacobian(c: CollisionState, params: GasParameters) -> float:
    """Jacobian determinant (absolute value) of the collision map at ``c``:

        (1 - R) / (1 - R') * sqrt(R / R')  =  (1 - R) / (1 - R') * |g'| / |g|.
    """
    post = collision_transform(c, params)
    R, Rp = c.R, post.R
    if not (0.0 < R < 1.0) or not (0.0 < Rp < 1.0):
        raise SingularJacobianError(f"repartition parameters on the boundary: R={R}, R'={Rp}")
    return (1.0 - R) / (1.0 - Rp) * math.sqrt(R / Rp)


def _power_or_raise(base: float, exponent: float, what: str) -> float:
    if base > 0.0:
        return base ** exponent
    if exponent > 0.0:
        return 0.0
    if exponent == 0.0:
        return 1.0
    raise SingularCrossSectionError(f"{what} vanishes with negative exponent {exponent}")


def cross_section(
    spec: CrossSectionSpec,
    c: CollisionState,
    u: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> float:
    """Evaluate the collision kernel at a microscopic state.

    The standard variant is independent of the bulk velocity ``u``; the
    generalized one breaks Galilean invariance through the average peculiar
    velocity Gbar = ((v - u) + (v* - u)) / 2, so ``u`` must be supplied for it.
    """
    g = np.subtract(c.v, c.v_star)
    g_sq = float(g @ g)
    value = spec.K
    value *= _power_or_raise(c.R, spec.s, "repartition parameter R")
    value *= _power_or_raise(g_sq, spec.s, "relative speed")
    if spec.variant == "generalized":
        pool = c.I + c.I_star
        value *= _power_or_raise((1.0 - c.R) * pool, spec.beta, "internal-energy pool")
        gbar = 0.5 * (np.subtract(c.v, u) + np.subtract(c.v_star, u))
        value *= _power_or_raise(float(gbar @ gbar), spec.q, "average peculiar speed")
    return value


def microreversibility_residual(
    spec: CrossSectionSpec,
    c: CollisionState,
    u: tuple[float, float, float] = (0.0, 0.0, 0.0),
    params: GasParameters | None = None,
) -> float:
    """Worst violation of the kernel symmetries at a single state.

    Checks invariance under the collision map and under particle exchange:
    returns max(|B(c) - B(c')|, |B(c) - B(c_swapped)|).
    """
    if params is None:
        params = GasParameters(alpha=0.0)
    b0 = cross_section(spec, c, u)
    b_post = cross_section(spec, collision_transform(c, params), u)
    b_swap = cross_section(spec, c.swapped(), u)
    return max(abs(b0 - b_post), abs(b0 - b_swap))


def collision_invariant_residuals(
    c: CollisionState, params: GasParameters
) -> tuple[np.ndarray, float]:
    """Momentum and total-energy residuals across the collision map.

    Both vanish identically up to roundoff; exposed so conservation can be
    asserted numerically instead of trusted.
    """
    post = collision_transform(c, params)
    m = params.mass
    v, vs = np.asarray(c.v), np.asarray(c.v_star)
    vp, vps = np.asarray(post.v), np.asarray(post.v_star)
    momentum = m * (vp + vps) - m * (v + vs)
    energy = (
        0.5 * m * (float(vp @ vp) + float(vps @ vps)) + post.I + post.I_star
        - 0.5 * m * (float(v @ v) + float(vs @ vs)) - c.I - c.I_star
    )
    return momentum, energy
