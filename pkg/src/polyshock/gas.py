"""Molecular model and six-field macroscopic state.

Internal degrees of freedom are carried by a single continuous energy
variable weighted by I**alpha; ``alpha`` fixes the caloric equation of
state e = (alpha + 5/2) k T / m and hence the heat-capacity ratio.
The non-equilibrium state adds the dynamic pressure ``Pi`` (excess of a
third of the pressure-tensor trace over the thermodynamic pressure) to
the classical (rho, u, e) fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AdmissibilityError

__all__ = ["GasParameters", "MacroState6", "trace_split", "state_from_trace"]


@dataclass(frozen=True)
class GasParameters:
    """Molecular model: internal-DOF exponent and dimensional constants.

    Defaults m = k = 1 ("kinetic units"); SI values may be supplied.
    """

    alpha: float
    mass: float = 1.0
    boltzmann: float = 1.0

    def __post_init__(self):
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.boltzmann > 0.0:
            raise ValueError(f"boltzmann must be positive, got {self.boltzmann}")

    @property
    def dof(self) -> float:
        """Effective number of degrees of freedom D = 2(alpha+1) + 3."""
        return 2.0 * (self.alpha + 1.0) + 3.0

    @property
    def gamma(self) -> float:
        """Heat-capacity ratio (D+2)/D."""
        return (self.dof + 2.0) / self.dof

    @classmethod
    def from_gamma(cls, gamma: float, mass: float = 1.0, boltzmann: float = 1.0) -> "GasParameters":
        """Inverse of :attr:`gamma`: alpha = (7 - 5*gamma) / (2*(gamma - 1))."""
        if not gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {gamma}")
        alpha = (-5.0 * gamma + 7.0) / (2.0 * (gamma - 1.0))
        return cls(alpha=alpha, mass=mass, boltzmann=boltzmann)

    def internal_partition(self, T: float) -> float:
        """Normalization of the internal-energy weight at temperature T:
        integral of I**alpha * exp(-I/(kT)) over I, i.e. Gamma(alpha+1) (kT)**(alpha+1)."""
        return math.gamma(self.alpha + 1.0) * (self.boltzmann * T) ** (self.alpha + 1.0)


@dataclass(frozen=True)
class MacroState6:
    """Six-field state (rho, u, e, Pi) for a given molecular model.

    The trace of the pressure tensor is derived, never stored.  Construction
    enforces the open admissibility region

        -p < Pi < (2 (alpha+1) / 3) p,    p = rho e / (alpha + 5/2),

    equivalent to positivity of both the kinetic and internal exponential
    rates of the entropy-maximizing distribution.
    """

    rho: float
    e: float
    params: GasParameters
    Pi: float = 0.0
    u: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.rho > 0.0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.e > 0.0:
            raise ValueError(f"e must be positive, got {self.e}")
        u = tuple(float(c) for c in self.u)
        if len(u) != 3:
            raise ValueError("u must be a 3-vector")
        object.__setattr__(self, "u", u)
        p = self.pressure
        lo, hi = -p, self.pi_upper_bound
        if not (lo < self.Pi < hi):
            raise AdmissibilityError(
                f"Pi={self.Pi} outside the admissible open interval ({lo}, {hi}) "
                f"for rho={self.rho}, e={self.e}, alpha={self.params.alpha}"
            )

    @property
    def pressure(self) -> float:
        """Thermodynamic pressure p = rho e / (alpha + 5/2)."""
        return self.rho * self.e / (self.params.alpha + 2.5)

    @property
    def temperature(self) -> float:
        """Caloric equation of state: T = m e / (k (alpha + 5/2))."""
        return self.params.mass * self.e / (self.params.boltzmann * (self.params.alpha + 2.5))

    @property
    def sum_p(self) -> float:
        """Trace of the pressure tensor: 3 Pi + 3 p."""
        return 3.0 * self.Pi + 3.0 * self.pressure

    @property
    def pi_upper_bound(self) -> float:
        """Least upper bound of admissible Pi: (2 (alpha+1) / 3) p."""
        return 2.0 * (self.params.alpha + 1.0) / 3.0 * self.pressure

    def with_pi(self, Pi: float) -> "MacroState6":
        return MacroState6(rho=self.rho, e=self.e, params=self.params, Pi=Pi, u=self.u)


def trace_split(state: MacroState6) -> tuple[float, float]:
    """Split the pressure-tensor trace into its equilibrium and total parts.

    Returns (p, sum_p) with sum_p = 3 Pi + 3 rho e / (alpha + 5/2).
    """
    return state.pressure, state.sum_p


def state_from_trace(
    rho: float,
    e: float,
    sum_p: float,
    params: GasParameters,
    u: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> MacroState6:
    """Inverse of :func:`trace_split`: recover Pi = sum_p / 3 - p."""
    Pi = sum_p / 3.0 - rho * e / (params.alpha + 2.5)
    return MacroState6(rho=rho, e=e, params=params, Pi=Pi, u=u)
