"""Independent numerical integration of the kinetic expressions.

Every closed form in :mod:`polyshock.closure` has a counterpart here that
integrates the underlying kinetic integrand numerically: constraint and
flux moments of the maximizer, the entropy density, the collision
production term, and the entropy production rate.  The production-term
integrals work on the intermediate reduction stage of the collision
integral (bulk-velocity Gaussian still explicit for the generalized
kernel), so the only analytic steps shared with the closed forms are the
trivial scattering-direction and repartition integrals and a parity
argument.  Distribution values enter exclusively through
:func:`polyshock.closure.log_f6`, and grid scales are read off the
Lagrange multipliers, so a defect in any closed-form coefficient cannot
cancel between the two sides.

All quadratures are deterministic tensor-product Gauss rules with
order-doubling error control; the 1-D adaptive integrator subdivides
greedily with an embedded two-order error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_hermite, roots_jacobi, roots_legendre

from . import closure
from .collisions import CrossSectionSpec
from .errors import ConvergenceError
from .gas import MacroState6

__all__ = [
    "QuadSpec",
    "MomentTable",
    "FluxTable",
    "adaptive_integrate",
    "integrate_moments",
    "integrate_fluxes",
    "integrate_entropy",
    "integrate_production",
    "integrate_entropy_production",
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and truncation controls for the oracle quadratures."""

    rel_tol: float = 1e-8
    abs_floor: float = 1e-12
    max_subdivisions: int = 400
    radial_cutoff_sigmas: float = 12.0

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if not self.abs_floor > 0.0:
            raise ValueError("abs_floor must be positive")
        if self.max_subdivisions < 4:
            raise ValueError("max_subdivisions must be at least 4")
        # Gaussian tail mass beyond c sigmas is erfc(c/sqrt(2)) < exp(-c^2/2);
        # the default 12 leaves ~1e-32, far below any admissible rel_tol.
        if self.radial_cutoff_sigmas < 8.0:
            raise ValueError("radial_cutoff_sigmas below 8 cannot bound the tail by rel_tol/10")

    def tolerance(self, value: float) -> float:
        return max(self.rel_tol * abs(value), self.abs_floor)


@lru_cache(maxsize=64)
def _legendre(n: int):
    return roots_legendre(n)


def _panel_values(f, a: float, b: float) -> tuple[float, float]:
    """Gauss-Legendre estimates of one panel at orders 10 and 20."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x10, w10 = _legendre(10)
    x20, w20 = _legendre(20)
    coarse = half * float(w10 @ np.asarray(f(mid + half * x10), dtype=float))
    fine = half * float(w20 @ np.asarray(f(mid + half * x20), dtype=float))
    return fine, abs(fine - coarse)


def adaptive_integrate(f, domain, quad: QuadSpec) -> float:
    """Integrate a vectorized 1-D integrand over ``domain`` = (a, b).

    Subdivides the worst panel until the summed embedded error estimate
    meets ``quad``'s tolerance; raises :class:`ConvergenceError` carrying
    the best estimate once the subdivision budget is exhausted.  A ``b``
    of ``inf`` is mapped to a finite interval first.
    """
    a, b = domain
    if math.isinf(b):
        # x = a + t/(1-t) maps t in [0,1) onto [a, inf)
        def g(t):
            t = np.asarray(t, dtype=float)
            return f(a + t / (1.0 - t)) / (1.0 - t) ** 2

        return adaptive_integrate(g, (0.0, 1.0 - 1e-14), quad)

    panels = []
    val, err = _panel_values(f, a, b)
    panels.append([err, a, b, val])
    for _ in range(quad.max_subdivisions):
        total = sum(p[3] for p in panels)
        total_err = sum(p[0] for p in panels)
        if total_err <= quad.tolerance(total):
            return total
        worst = max(range(len(panels)), key=lambda i: panels[i][0])
        e, pa, pb, _ = panels.pop(worst)
        pm = 0.5 * (pa + pb)
        vl, el = _panel_values(f, pa, pm)
        vr, er = _panel_values(f, pm, pb)
        panels.append([el, pa, pm, vl])
        panels.append([er, pm, pb, vr])
    total = sum(p[3] for p in panels)
    total_err = sum(p[0] for p in panels)
    if total_err <= quad.tolerance(total):
        return total
    raise ConvergenceError(
        f"adaptive integration did not reach tolerance: estimate {total} +- {total_err}",
        value=total, error=total_err,
    )


def _rates_from_multipliers(state: MacroState6) -> tuple[float, float]:
    """Gaussian rates (a on |c|^2, b on I) read off the multiplier solution."""
    mult = closure.multipliers(state)
    m, k = state.params.mass, state.params.boltzmann
    a = (m / k) * (mult.lambda2 + 0.5 * mult.mu2)
    b = mult.mu2 / k
    return a, b


@lru_cache(maxsize=64)
def _genlaguerre(n: int, alpha: float):
    return roots_genlaguerre(n, alpha)


def _internal_rule(state: MacroState6, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals of H(I) I^alpha exp(-b I) dI."""
    t, w = _genlaguerre(n, state.params.alpha)
    return t / b, w * b ** -(state.params.alpha + 1.0)


@dataclass(frozen=True)
class MomentTable:
    """Constraint moments recovered by quadrature."""

    rho: float
    momentum: tuple[float, float, float]
    sum_p: float
    rho_e: float


def _converge(compute, quad: QuadSpec, n0: int, n_max: int, what: str):
    history = []
    n = n0
    while n <= n_max:
        history.append(compute(n))
        if len(history) >= 2:
            diff = float(np.max(np.abs(np.asarray(history[-1]) - np.asarray(history[-2]))))
            scale = float(np.max(np.abs(np.asarray(history[-1]))))
            if diff <= quad.tolerance(scale):
                return history[-1]
        n *= 2
    diff = (
        float(np.max(np.abs(np.asarray(history[-1]) - np.asarray(history[-2]))))
        if len(history) >= 2
        else None
    )
    raise ConvergenceError(
        f"{what} quadrature did not converge by order {n // 2}",
        value=history[-1] if history else None, error=diff,
    )


def _converge_cancelling(compute, quad: QuadSpec, n0: int, n_max: int, what: str) -> float:
    """Order doubling for integrands whose value can cancel to zero.

    ``compute`` returns (signed total, L1 mass); near perfect cancellation
    the signed total is pure summation noise, so the convergence floor is
    tied to the mass rather than to the (meaningless) relative error.
    """
    history = []
    n = n0
    while n <= n_max:
        value, mass = compute(n)
        history.append(value)
        if len(history) >= 2:
            tol = max(quad.rel_tol * abs(value), quad.rel_tol * mass, quad.abs_floor)
            if abs(history[-1] - history[-2]) <= tol:
                return value
        n *= 2
    raise ConvergenceError(
        f"{what} quadrature did not converge by order {n // 2}",
        value=history[-1] if history else None,
        error=abs(history[-1] - history[-2]) if len(history) >= 2 else None,
    )


def integrate_moments(state: MacroState6, quad: QuadSpec | None = None) -> MomentTable:
    """Quadrature of the maximizer against (m, m c, m |c|^2, m |c|^2/2 + I) I^alpha.

    The isotropic moments reduce to a 1-D radial integral with 4 pi c^2
    weight (adaptive, truncated at ``radial_cutoff_sigmas``); the momentum
    components come from a symmetric 3-D tensor grid so their cancellation
    is numerical, not structural.
    """
    quad = quad or QuadSpec()
    m = state.params.mass
    a, b = _rates_from_multipliers(state)
    sigma = 1.0 / math.sqrt(2.0 * a)
    cutoff = quad.radial_cutoff_sigmas * sigma
    # inner radial tolerance tightened so the outer order-doubling check
    # is not dominated by adaptive-integration noise
    inner = QuadSpec(
        rel_tol=0.1 * quad.rel_tol, abs_floor=0.1 * quad.abs_floor,
        max_subdivisions=quad.max_subdivisions,
        radial_cutoff_sigmas=quad.radial_cutoff_sigmas,
    )

    def isotropic(n_int: int) -> np.ndarray:
        nodes, weights = _internal_rule(state, b, n_int)

        def radial(c):
            c = np.asarray(c, dtype=float)
            lf = closure.log_f6(state, (c * c)[:, None], nodes[None, :])
            vals = np.exp(lf + (b * nodes)[None, :])
            s0 = vals @ weights              # integral of f I^alpha dI
            s1 = vals @ (weights * nodes)    # integral of I f I^alpha dI
            shell = 4.0 * math.pi * c * c
            return shell[:, None] * np.stack(
                [m * s0, m * c * c * s0, 0.5 * m * c * c * s0 + s1], axis=1
            )

        out = np.empty(3)
        for i in range(3):
            out[i] = adaptive_integrate(lambda c, i=i: radial(c)[:, i], (0.0, cutoff), inner)
        return out

    rho_hat, sum_p_hat, rho_e_hat = _converge(
        lambda n: isotropic(n), quad, 16, 256, "moment"
    )
    fluxes = integrate_fluxes(state, quad)
    return MomentTable(
        rho=float(rho_hat),
        momentum=fluxes.momentum,
        sum_p=float(sum_p_hat),
        rho_e=float(rho_e_hat),
    )


@dataclass(frozen=True)
class FluxTable:
    """Moments needing directional resolution, from a 3-D velocity grid."""

    rho: float
    momentum: tuple[float, float, float]
    p_offdiag: tuple[float, float, float]   # (p_12, p_13, p_23)
    sum_p: float
    sum_piik: tuple[float, float, float]    # contracted third moment per axis
    heat_flux: tuple[float, float, float]
    rho_e: float


@lru_cache(maxsize=64)
def _hermite(n: int):
    return roots_hermite(n)


def integrate_fluxes(state: MacroState6, quad: QuadSpec | None = None) -> FluxTable:
    """Tensor-grid quadrature of all first/second/third velocity moments."""
    quad = quad or QuadSpec()
    m = state.params.mass
    a, b = _rates_from_multipliers(state)

    def compute(n: int) -> np.ndarray:
        x, w = _hermite(n)
        c_axis = x / math.sqrt(a)
        nodes, weights = _internal_rule(state, b, max(16, n // 2))
        cx = c_axis[:, None, None]
        cy = c_axis[None, :, None]
        cz = c_axis[None, None, :]
        c_sq = cx * cx + cy * cy + cz * cz
        w3 = (w[:, None, None] * w[None, :, None] * w[None, None, :]) * a ** -1.5
        s0 = np.zeros_like(c_sq)
        s1 = np.zeros_like(c_sq)
        for node, weight in zip(nodes, weights):
            # e^{a c^2} de-weights the Hermite rule; kept inside the exponent
            val = np.exp(closure.log_f6(state, c_sq, node) + b * node + a * c_sq)
            s0 += weight * val
            s1 += weight * node * val
        base0 = w3 * s0
        base1 = w3 * s1
        kin = 0.5 * m * c_sq

        def mom(factor):
            return float(np.sum(base0 * factor))

        rho = m * mom(1.0)
        momentum = tuple(m * mom(c) for c in (cx, cy, cz))
        p12, p13, p23 = (m * mom(cx * cy), m * mom(cx * cz), m * mom(cy * cz))
        sum_p = m * mom(c_sq)
        sum_piik = tuple(m * mom(c_sq * c) for c in (cx, cy, cz))
        heat = tuple(
            float(np.sum((base0 * kin + base1) * c)) for c in (cx, cy, cz)
        )
        rho_e = float(np.sum(base0 * kin + base1))
        return np.array([rho, *momentum, p12, p13, p23, sum_p, *sum_piik, *heat, rho_e])

    vec = _converge(compute, quad, 24, 192, "flux")
    return FluxTable(
        rho=vec[0],
        momentum=tuple(vec[1:4]),
        p_offdiag=tuple(vec[4:7]),
        sum_p=vec[7],
        sum_piik=tuple(vec[8:11]),
        heat_flux=tuple(vec[11:14]),
        rho_e=vec[14],
    )


def integrate_entropy(state: MacroState6, quad: QuadSpec | None = None) -> float:
    """Quadrature of -k f log f I^alpha over velocity and internal energy."""
    quad = quad or QuadSpec()
    k = state.params.boltzmann
    a, b = _rates_from_multipliers(state)
    sigma = 1.0 / math.sqrt(2.0 * a)
    cutoff = quad.radial_cutoff_sigmas * sigma
    inner = QuadSpec(
        rel_tol=0.1 * quad.rel_tol, abs_floor=0.1 * quad.abs_floor,
        max_subdivisions=quad.max_subdivisions,
        radial_cutoff_sigmas=quad.radial_cutoff_sigmas,
    )

    def compute(n_int: int) -> float:
        nodes, weights = _internal_rule(state, b, n_int)

        def radial(c):
            c = np.asarray(c, dtype=float)
            lf = closure.log_f6(state, (c * c)[:, None], nodes[None, :])
            flogf = np.exp(lf + (b * nodes)[None, :]) * lf
            return 4.0 * math.pi * c * c * (flogf @ weights)

        return -k * adaptive_integrate(radial, (0.0, cutoff), inner)

    return _converge(compute, quad, 16, 256, "entropy")


def _production_grids(state: MacroState6, xsec: CrossSectionSpec, n: int):
    """Per-dimension Gauss rules for the collision-integral reduction.

    Dimensions: relative speed g (Gaussian rate a/2 after the bulk
    velocity is separated), repartition R on (0, 1) with its
    (1-R)^(beta+1) R^(s+1/2) measure, the internal-energy pair (I, I*)
    placed along total-energy/fraction lines so the (I+I*)^beta corner is
    resolved for fractional beta, and, for the generalized kernel, the
    bulk-pair speed G.
    """
    a, b = _rates_from_multipliers(state)
    a_g, a_G = 0.5 * a, 2.0 * a
    s = xsec.s
    beta = xsec.beta if xsec.variant == "generalized" else 0.0

    xg, wg = _genlaguerre(n, s + 0.5)                  # x = a_g g^2
    g_sq = xg / a_g
    wg = wg * (0.5 * a_g ** -(s + 1.5))                # radial g^(2s+2) e^(-a_g g^2) dg

    xj, wj = roots_jacobi(n, beta + 1.0, s + 0.5)
    R = 0.5 * (xj + 1.0)
    wR = wj * 0.5 ** (beta + s + 2.5)                  # (1-R)^(beta+1) R^(s+1/2) dR

    tJ, wJ = _genlaguerre(n, beta + 1.0)               # t = b (I + I*)
    J = tJ / b
    wJ = wJ * b ** -(beta + 2.0)                       # (I+I*)^beta e^(-b(I+I*)) dI dI*
    xw, ww = _legendre(max(8, n // 4))
    frac = 0.5 * (xw + 1.0)
    ww = 0.5 * ww

    if xsec.variant == "generalized":
        xG, wG = _genlaguerre(n, xsec.q + 0.5)         # x = a_G G^2
        G_weight = float(np.sum(wG)) * 0.5 * a_G ** -(xsec.q + 1.5)
    else:
        # bulk-pair Gaussian already integrated out at this reduction stage
        G_weight = 0.25 * (math.pi / a_G) ** 1.5 / math.pi
    return g_sq, wg, R, wR, J, wJ, frac, ww, G_weight, b


def integrate_production(
    state: MacroState6, xsec: CrossSectionSpec, quad: QuadSpec | None = None
) -> float:
    """Collision production term of the pressure-tensor trace by quadrature.

    Integrand bracket (R - 1) g^2 / 4 + R (I + I*) / m over
    (g, R, I, I*) and, for the generalized kernel, the bulk-pair speed G;
    the scattering-direction and repartition-fraction integrals are the
    trivial 4 pi and 1 factors, and the term linear in the bulk-pair
    velocity drops by parity.
    """
    quad = quad or QuadSpec()
    m = state.params.mass
    cnst = math.exp(float(closure.log_f6(state, 0.0, 0.0)))

    def compute(n: int) -> tuple[float, float]:
        g_sq, wg, R, wR, J, wJ, frac, ww, G_weight, _ = _production_grids(state, xsec, n)
        I_pair = J[:, None] * frac[None, :]            # I = J w, I* = J (1 - w)
        I_star = J[:, None] * (1.0 - frac[None, :])
        pair_w = wJ[:, None] * ww[None, :]
        pool = (I_pair + I_star)[None, :, :]
        total = 0.0
        mass = 0.0
        for g2, w_g in zip(g_sq, wg):                  # chunk over g to bound memory
            bracket = 0.25 * (R[:, None, None] - 1.0) * g2 + (R[:, None, None] / m) * pool
            weighted = bracket * wR[:, None, None] * pair_w[None, :, :]
            total += w_g * float(np.sum(weighted))
            mass += w_g * float(np.sum(np.abs(weighted)))
        scale = m * cnst ** 2 * xsec.K * (4.0 * math.pi) ** 3 * G_weight
        return scale * total, abs(scale) * mass

    return _converge_cancelling(compute, quad, 16, 128, "production")


def integrate_entropy_production(
    state: MacroState6, xsec: CrossSectionSpec, quad: QuadSpec | None = None
) -> float:
    """Entropy production rate by quadrature.

    Uses the involution form of the rate: the integrand weighs the pair
    density with the change of log f across the collision,

        -a (|c'|^2 - |c|^2) - b (I' - I),

    with the bulk-pair cross term dropped by parity and the repartition
    fraction integrated analytically (the integrand is linear in it).
    """
    quad = quad or QuadSpec()
    m = state.params.mass
    a, b = _rates_from_multipliers(state)
    cnst = math.exp(float(closure.log_f6(state, 0.0, 0.0)))

    def compute(n: int) -> tuple[float, float]:
        g_sq, wg, R, wR, J, wJ, frac, ww, G_weight, _ = _production_grids(state, xsec, n)
        I_pair = J[:, None] * frac[None, :]
        I_star = J[:, None] * (1.0 - frac[None, :])
        pair_w = wJ[:, None] * ww[None, :]
        pool = (I_pair + I_star)[None, :, :]
        I3 = I_pair[None, :, :]
        R3 = R[:, None, None]
        total = 0.0
        mass = 0.0
        for g2, w_g in zip(g_sq, wg):                  # chunk over g to bound memory
            E = 0.25 * m * g2 + pool
            # post-collision internal energy r (1-R) E, linear in r: mean value 1/2
            bracket = (
                -a * (0.25 * (R3 - 1.0) * g2 + (R3 / m) * pool)
                - b * (0.5 * (1.0 - R3) * E - I3)
            )
            weighted = bracket * wR[:, None, None] * pair_w[None, :, :]
            total += w_g * float(np.sum(weighted))
            mass += w_g * float(np.sum(np.abs(weighted)))
        scale = cnst ** 2 * xsec.K * (4.0 * math.pi) ** 3 * G_weight
        return scale * total, abs(scale) * mass

    return _converge_cancelling(compute, quad, 16, 128, "entropy production")
