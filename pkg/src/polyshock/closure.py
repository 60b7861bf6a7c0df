"""Entropy-maximizing distribution and its closed-form moments.

Everything here is a closed form in the macroscopic fields: the 5- and
6-field entropy maximizers, their Lagrange multipliers, the entropy
densities, the nonlinear production term of the pressure-tensor trace
for both collision kernels, the linearized (relaxation-time) form, the
phenomenological nonlinear source they generalize, and the entropy
production rate.  The companion :mod:`polyshock.oracle` re-derives the
same numbers by direct numerical integration; the two must agree before
any of these expressions is trusted.

Coefficients involving Gamma functions are assembled in log space so
large exponents do not overflow.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from math import lgamma

import numpy as np

from .collisions import CrossSectionSpec
from .errors import AdmissibilityError
from .gas import GasParameters, MacroState6

__all__ = [
    "ClosureMultipliers",
    "ClosureEval",
    "f5",
    "f6",
    "log_f5",
    "log_f6",
    "multipliers",
    "entropies",
    "kappa",
    "production",
    "production_linearized",
    "production_ET",
    "entropy_production",
    "alpha_bar",
    "et_compatible_spec",
    "coefficient_C",
    "coefficient_CG",
    "evaluate",
    "perturb_coefficients",
]

# Fractional powers of near-zero bases wreck the oracle comparisons, so
# evaluations within this relative distance of the admissibility boundary
# are rejected outright.
BOUNDARY_GUARD = 1e-10

# Test fixture: relative perturbations applied to closed-form coefficients,
# used by negative-control checks to prove the verification tolerances bite.
_PERTURB = {"production": 0.0, "normalization": 0.0, "entropy": 0.0}


@contextmanager
def perturb_coefficients(rel: float, target: str = "production"):
    """Scale one family of closed-form coefficients by (1 + rel).

    Targets: ``production`` (kernel-dependent production coefficients),
    ``normalization`` (distribution-function prefactor), ``entropy``
    (argument of the entropy-density logarithm).  Verification must fail
    under any nonzero perturbation; nothing else uses this.
    """
    if target not in _PERTURB:
        raise ValueError(f"unknown perturbation target {target!r}")
    old = _PERTURB[target]
    _PERTURB[target] = rel
    try:
        yield
    finally:
        _PERTURB[target] = old


def _guarded_state(state: MacroState6) -> None:
    p = state.pressure
    band = BOUNDARY_GUARD * p
    if state.Pi <= -p + band or state.Pi >= state.pi_upper_bound - band:
        raise AdmissibilityError(
            f"Pi={state.Pi} within the guard band of the admissibility boundary "
            f"({-p}, {state.pi_upper_bound})"
        )


def _rates(state: MacroState6) -> tuple[float, float]:
    """Exponential rates of the 6-field maximizer: (a on |c|^2, b on I)."""
    alpha = state.params.alpha
    m = state.params.mass
    sp = state.sum_p
    a = 3.0 * state.rho / (2.0 * sp)
    b = (alpha + 1.0) / (m * (state.e - sp / (2.0 * state.rho)))
    return a, b


def _log_norm6(state: MacroState6) -> float:
    """log of the 6-field maximizer prefactor."""
    alpha = state.params.alpha
    m = state.params.mass
    a, b = _rates(state)
    value = (
        math.log(state.rho / m)
        + 1.5 * math.log(a / math.pi)
        + (alpha + 1.0) * math.log(b)
        - lgamma(alpha + 1.0)
    )
    if _PERTURB["normalization"]:
        value += math.log1p(_PERTURB["normalization"])
    return value


def log_f6(state: MacroState6, c_sq, internal):
    """log of the 6-field maximizer at squared peculiar speed ``c_sq`` and
    internal energy ``internal``; vectorized over numpy inputs."""
    _guarded_state(state)
    a, b = _rates(state)
    return _log_norm6(state) - a * np.asarray(c_sq) - b * np.asarray(internal)


def f6(state: MacroState6, c, internal):
    """Entropy maximizer for (rho, 0, sum_p, rho e); ``c`` has last axis 3."""
    c = np.asarray(c, dtype=float)
    c_sq = np.sum(c * c, axis=-1)
    return np.exp(log_f6(state, c_sq, internal))


def log_f5(state: MacroState6, c_sq, internal):
    """log of the equilibrium (5-field) maximizer; requires Pi = 0."""
    if state.Pi != 0.0:
        raise AdmissibilityError("equilibrium distribution requires Pi = 0")
    alpha = state.params.alpha
    m = state.params.mass
    rate = (alpha + 2.5) / (m * state.e)
    log_norm = (
        math.log(state.rho / m)
        + 1.5 * math.log((alpha + 2.5) / (2.0 * math.pi * state.e))
        + (alpha + 1.0) * math.log(rate)
        - lgamma(alpha + 1.0)
    )
    if _PERTURB["normalization"]:
        log_norm += math.log1p(_PERTURB["normalization"])
    return log_norm - rate * (0.5 * m * np.asarray(c_sq) + np.asarray(internal))


def f5(state: MacroState6, c, internal):
    """Equilibrium maximizer (local Maxwellian in disguise); Pi must be 0."""
    c = np.asarray(c, dtype=float)
    c_sq = np.sum(c * c, axis=-1)
    return np.exp(log_f5(state, c_sq, internal))


@dataclass(frozen=True)
class ClosureMultipliers:
    """Lagrange multipliers of the constrained entropy maximization."""

    lambda0: float
    lambda1: tuple[float, float, float]
    lambda2: float
    mu2: float

    def reconstruct(self, params: GasParameters, c, internal):
        """Re-evaluate the maximizer exp(-1 - (m/k)(l0 + l1.c + l2 |c|^2)
        - (mu2/k)((m/2)|c|^2 + I)) from the multipliers alone."""
        m, k = params.mass, params.boltzmann
        c = np.asarray(c, dtype=float)
        c_sq = np.sum(c * c, axis=-1)
        lin = c @ np.asarray(self.lambda1)
        expo = (
            -1.0
            - (m / k) * (self.lambda0 + lin + self.lambda2 * c_sq)
            - (self.mu2 / k) * (0.5 * m * c_sq + np.asarray(internal))
        )
        return np.exp(expo)


def multipliers(state: MacroState6) -> ClosureMultipliers:
    """Solve the multiplier system for an admissible state.

    The momentum multipliers vanish identically; the other three follow in
    closed form from the constraint moments.
    """
    _guarded_state(state)
    p = state.params
    alpha, m, k = p.alpha, p.mass, p.boltzmann
    sp = state.sum_p
    internal_gap = state.e - sp / (2.0 * state.rho)
    lambda0 = -(k / m) * (1.0 + _log_norm6(state))
    lambda2 = (k / (2.0 * m)) * (3.0 * state.rho / sp - (alpha + 1.0) / internal_gap)
    mu2 = k * (alpha + 1.0) / (m * internal_gap)
    return ClosureMultipliers(lambda0=lambda0, lambda1=(0.0, 0.0, 0.0), lambda2=lambda2, mu2=mu2)


def _log_brace_5(state: MacroState6) -> float:
    alpha, m = state.params.alpha, state.params.mass
    return (
        math.log(state.rho / m)
        - lgamma(alpha + 1.0)
        + (alpha + 1.0) * math.log((alpha + 2.5) / (m * state.e))
        + 1.5 * math.log((alpha + 2.5) / (2.0 * math.pi * state.e))
    )


def _log_brace_6(state: MacroState6) -> float:
    alpha, m = state.params.alpha, state.params.mass
    sp = state.sum_p
    return (
        math.log(state.rho / m)
        - lgamma(alpha + 1.0)
        + (alpha + 1.0) * math.log((alpha + 1.0) / (m * (state.e - sp / (2.0 * state.rho))))
        + 1.5 * math.log(3.0 * state.rho / (2.0 * math.pi * sp))
    )


def entropies(state: MacroState6) -> tuple[float, float, float]:
    """Closed-form entropy densities (h5, h6) and their difference kappa.

    h = -k (rho/m) (log{brace} - (alpha + 5/2)) with the brace built from
    the respective maximizer; kappa = h6 - h5 <= 0 measures departure from
    equilibrium and is returned from its own dedicated closed form.
    """
    _guarded_state(state)
    k, m = state.params.boltzmann, state.params.mass
    alpha = state.params.alpha
    shift = math.log1p(_PERTURB["entropy"]) if _PERTURB["entropy"] else 0.0
    h5 = -k * state.rho / m * (_log_brace_5(state) + shift - (alpha + 2.5))
    h6 = -k * state.rho / m * (_log_brace_6(state) + shift - (alpha + 2.5))
    return h5, h6, kappa(state)


def kappa(state: MacroState6) -> float:
    """Non-equilibrium entropy in physical variables:

        kappa = k (rho/m) log{ (1 - c1 Pi)^(alpha+1) (1 + c2 Pi)^(3/2) },

    c1 = (3/2)(alpha+5/2)/((alpha+1) rho e), c2 = (alpha+5/2)/(rho e).
    Vanishes at Pi = 0 and is negative elsewhere on the admissible range.
    """
    _guarded_state(state)
    p = state.params
    alpha, m, k = p.alpha, p.mass, p.boltzmann
    rho_e = state.rho * state.e
    c1 = 1.5 * (alpha + 2.5) / ((alpha + 1.0) * rho_e)
    c2 = (alpha + 2.5) / rho_e
    return (
        k * state.rho / m
        * ((alpha + 1.0) * math.log1p(-c1 * state.Pi) + 1.5 * math.log1p(c2 * state.Pi))
    )


def coefficient_C(alpha: float, s: float) -> float:
    """Kernel coefficient of the standard production term:

        sqrt(pi) 2^(2s+4) / ((s+5/2)(s+7/2)) * Gamma(s+3/2)/Gamma(alpha+1)^2
        * (alpha+5/2)/(alpha+1).
    """
    log_c = (
        0.5 * math.log(math.pi)
        + (2.0 * s + 4.0) * math.log(2.0)
        - math.log(s + 2.5)
        - math.log(s + 3.5)
        + lgamma(s + 1.5)
        - 2.0 * lgamma(alpha + 1.0)
        + math.log((alpha + 2.5) / (alpha + 1.0))
    )
    return math.exp(log_c) * (1.0 + _PERTURB["production"])


def coefficient_CG(alpha: float, s: float, beta: float, q: float) -> float:
    """Kernel coefficient of the generalized production term:

        2^(2s+4) Gamma(q+3/2) Gamma(s+5/2) Gamma(s+3/2) Gamma(beta+2)
        Gamma(beta+3) / (Gamma(s+beta+9/2) Gamma(alpha+1)^2)
        * (alpha+5/2)/(alpha+1).
    """
    log_c = (
        (2.0 * s + 4.0) * math.log(2.0)
        + lgamma(q + 1.5)
        + lgamma(s + 2.5)
        + lgamma(s + 1.5)
        + lgamma(beta + 2.0)
        + lgamma(beta + 3.0)
        - lgamma(s + beta + 4.5)
        - 2.0 * lgamma(alpha + 1.0)
        + math.log((alpha + 2.5) / (alpha + 1.0))
    )
    return math.exp(log_c) * (1.0 + _PERTURB["production"])


def _production_bases(state: MacroState6) -> tuple[float, float]:
    alpha = state.params.alpha
    pi_over_rho = state.Pi / state.rho
    base1 = state.e / (alpha + 2.5) + pi_over_rho
    base2 = state.e / (alpha + 2.5) - 1.5 / (alpha + 1.0) * pi_over_rho
    return base1, base2


def production(state: MacroState6, xsec: CrossSectionSpec) -> float:
    """Nonlinear production term of the pressure-tensor trace.

    Standard kernel:

        -K rho^2 / m^(2 alpha + 1) C(alpha, s) (Pi/rho)
          * (e/(alpha+5/2) + Pi/rho)^s
          * (e/(alpha+5/2) - 3 Pi / (2 (alpha+1) rho))^(-2 alpha)

    and the generalized kernel replaces (C, s, 2 alpha) by
    (C_G, s+q, 2 alpha - beta) with m^(2 alpha - beta + 1).  The sign is
    always opposite to Pi: the trace relaxes toward equilibrium.
    """
    _guarded_state(state)
    alpha = state.params.alpha
    m = state.params.mass
    base1, base2 = _production_bases(state)
    if xsec.variant == "generalized":
        coeff = coefficient_CG(alpha, xsec.s, xsec.beta, xsec.q)
        exp1 = xsec.s + xsec.q
        exp2 = 2.0 * alpha - xsec.beta
        m_pow = 2.0 * alpha - xsec.beta + 1.0
    else:
        coeff = coefficient_C(alpha, xsec.s)
        exp1 = xsec.s
        exp2 = 2.0 * alpha
        m_pow = 2.0 * alpha + 1.0
    return (
        -xsec.K
        * state.rho ** 2
        / m ** m_pow
        * coeff
        * (state.Pi / state.rho)
        * base1 ** exp1
        * base2 ** -exp2
    )


def production_linearized(state: MacroState6, xsec: CrossSectionSpec) -> tuple[float, float]:
    """Production linearized in Pi, returned as (value, tau_Pi) with
    value = -3 Pi / tau_Pi.

    tau_Pi = 3 [K (rho / m^(2 alpha + 1)) C (e/(alpha+5/2))^(s - 2 alpha)]^(-1)
    for the standard kernel; the generalized exponent is s - 2 alpha + q + beta
    with coefficient C_G and m^(2 alpha - beta + 1).
    """
    _guarded_state(state)
    alpha = state.params.alpha
    m = state.params.mass
    e_ref = state.e / (alpha + 2.5)
    if xsec.variant == "generalized":
        coeff = coefficient_CG(alpha, xsec.s, xsec.beta, xsec.q)
        expo = xsec.s - 2.0 * alpha + xsec.q + xsec.beta
        m_pow = 2.0 * alpha - xsec.beta + 1.0
    else:
        coeff = coefficient_C(alpha, xsec.s)
        expo = xsec.s - 2.0 * alpha
        m_pow = 2.0 * alpha + 1.0
    rate = xsec.K * state.rho / m ** m_pow * coeff * e_ref ** expo
    tau = 3.0 / rate
    return -3.0 * state.Pi / tau, tau


def production_ET(state: MacroState6, tau_pi: float) -> float:
    """Phenomenological nonlinear source with relaxation time ``tau_pi``:

        -(3/tau) Pi / [(1 + (alpha+5/2) Pi/(rho e))
                       (1 - 3 (alpha+5/2) Pi / (2 (alpha+1) rho e))].

    Its two poles are the admissibility boundaries; the guard band keeps
    evaluations away from them.
    """
    _guarded_state(state)
    if not tau_pi > 0.0:
        raise ValueError(f"tau_pi must be positive, got {tau_pi}")
    alpha = state.params.alpha
    x = (alpha + 2.5) * state.Pi / (state.rho * state.e)
    denom = (1.0 + x) * (1.0 - 1.5 / (alpha + 1.0) * x)
    return -3.0 / tau_pi * state.Pi / denom


def et_compatible_spec(alpha: float, s: float, K: float = 1.0) -> CrossSectionSpec:
    """Generalized kernel whose production term coincides with the
    phenomenological nonlinear source: beta = 2 alpha - 1, q = -(s + 1)."""
    return CrossSectionSpec(variant="generalized", K=K, s=s, beta=2.0 * alpha - 1.0, q=-(s + 1.0))


def alpha_bar(state: MacroState6, s: float, K: float = 1.0) -> float:
    """Proportionality function between the compatible production term and
    the Pi-derivative of kappa:

        (1/3)(K/k)(rho^2/m) 2^(2s+5) Gamma(s+5/2) Gamma(s+3/2) Gamma(1/2-s)
        Gamma(2 alpha+1) Gamma(2 alpha+2)
        / (Gamma(s+2 alpha+7/2) Gamma(alpha+1)^2),

    defined for s < 1/2 (the compatible kernel requires q = -(s+1) > -3/2).
    """
    if not s < 0.5:
        raise ValueError(f"compatible kernel requires s < 1/2, got s={s}")
    p = state.params
    alpha, m, k = p.alpha, p.mass, p.boltzmann
    log_c = (
        (2.0 * s + 5.0) * math.log(2.0)
        + lgamma(s + 2.5)
        + lgamma(s + 1.5)
        + lgamma(0.5 - s)
        + lgamma(2.0 * alpha + 1.0)
        + lgamma(2.0 * alpha + 2.0)
        - lgamma(s + 2.0 * alpha + 3.5)
        - 2.0 * lgamma(alpha + 1.0)
    )
    return (K / k) * state.rho ** 2 / (3.0 * m) * math.exp(log_c) * (1.0 + _PERTURB["production"])


def entropy_production(state: MacroState6, xsec: CrossSectionSpec) -> float:
    """Entropy production rate of the 6-field maximizer:

        -K rho^2/m^3 2^(2s+3) Gamma(q+3/2) Gamma(s+5/2) Gamma(s+3/2)
        Gamma(beta+2) Gamma(beta+3) / (Gamma(s+beta+9/2) Gamma(alpha+1)^2)
        * ((alpha+1)/(m (e - sum_p/(2 rho))))^(2 alpha - 1 - beta)
        * (3 rho / sum_p)^(-s-1-q)
        * (-3 rho/sum_p + (alpha+1)/(e - sum_p/(2 rho)))^2.

    Nonpositive for every admissible state, zero exactly at Pi = 0.  The
    standard kernel is handled as the beta = q = 0 member.
    """
    _guarded_state(state)
    p = state.params
    alpha, m = p.alpha, p.mass
    s = xsec.s
    beta = xsec.beta if xsec.variant == "generalized" else 0.0
    q = xsec.q if xsec.variant == "generalized" else 0.0
    sp = state.sum_p
    internal_gap = state.e - sp / (2.0 * state.rho)
    log_c = (
        (2.0 * s + 3.0) * math.log(2.0)
        + lgamma(q + 1.5)
        + lgamma(s + 2.5)
        + lgamma(s + 1.5)
        + lgamma(beta + 2.0)
        + lgamma(beta + 3.0)
        - lgamma(s + beta + 4.5)
        - 2.0 * lgamma(alpha + 1.0)
    )
    bracket = -3.0 * state.rho / sp + (alpha + 1.0) / internal_gap
    return (
        -xsec.K
        * state.rho ** 2
        / m ** 3
        * math.exp(log_c)
        * (1.0 + _PERTURB["production"])
        * ((alpha + 1.0) / (m * internal_gap)) ** (2.0 * alpha - 1.0 - beta)
        * (3.0 * state.rho / sp) ** (-s - 1.0 - q)
        * bracket ** 2
    )


@dataclass(frozen=True)
class ClosureEval:
    """Bundle of closure quantities at one state and kernel."""

    h5: float
    h6: float
    kappa: float
    source: float
    source_linearized: float
    tau_pi: float
    entropy_prod: float


def evaluate(state: MacroState6, xsec: CrossSectionSpec) -> ClosureEval:
    """Evaluate all closed forms at one state; convenience for reporting."""
    h5, h6, kap = entropies(state)
    src = production(state, xsec)
    src_lin, tau = production_linearized(state, xsec)
    d = entropy_production(state, xsec)
    return ClosureEval(
        h5=h5, h6=h6, kappa=kap,
        source=src, source_linearized=src_lin, tau_pi=tau,
        entropy_prod=d,
    )
