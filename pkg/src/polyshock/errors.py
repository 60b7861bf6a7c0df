"""Exception types shared across the package."""


class PolyshockError(Exception):
    """Base class for all errors raised by this package."""


class AdmissibilityError(PolyshockError, ValueError):
    """State lies outside (or too close to) the admissible dynamic-pressure range."""


class DegenerateCollisionError(PolyshockError, ValueError):
    """Collision with zero total energy or zero internal-energy pool; the
    transformation is undefined on this measure-zero set."""


class SingularJacobianError(PolyshockError, ValueError):
    """Energy-repartition parameter at 0 or 1 makes the transformation Jacobian singular."""


class SingularCrossSectionError(PolyshockError, ValueError):
    """Negative exponent applied to a vanishing kinematic factor."""


class ConvergenceError(PolyshockError, RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class NoSubshockError(PolyshockError, ValueError):
    """Upstream Mach number at or below the critical value; no embedded jump exists."""


class SonicSingularityError(PolyshockError, ValueError):
    """The reduced profile equation hits its sonic denominator; continuous
    integration through the shock is impossible."""


class ProfileError(PolyshockError, RuntimeError):
    """Profile integration failed to reach the downstream equilibrium."""


class ConfigError(PolyshockError, ValueError):
    """Configuration file is malformed or violates a parameter bound."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
