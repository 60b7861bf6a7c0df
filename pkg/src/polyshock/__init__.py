"""Six-field moment model of polyatomic gases with dynamic pressure.

Collision kinematics with continuous internal energy, the entropy-
maximizing closure with its nonlinear production terms, an independent
quadrature oracle for every closed form, and a shock-structure solver
with sub-shock detection.
"""

from .collisions import CollisionState, CrossSectionSpec
from .gas import GasParameters, MacroState6

__all__ = ["GasParameters", "MacroState6", "CollisionState", "CrossSectionSpec"]

__version__ = "0.1.0"
