"""Riemann-Liouville fractional integrals and checks of Hermite-Hadamard type inequalities."""

from .expr import FunctionSpec, parse, differentiate, evaluate
from .fracint import FracParams, rl_left, rl_right, t_moment, kink_integral
from .quadrature import QuadSettings, AccuracyError
from .theorems import CheckReport, CheckSettings, THEOREMS

__version__ = "0.1.0"
