"""Time-frequency analysis and spectral solvers for the vibrating plate
equation ``u_tt + Delta^2 u = F(u)`` on periodic lattices."""

__version__ = "0.1.0"

from .gabor import StftMatrix, Window, stft
from .lattice import Field, Lattice, forward_transform, inverse_transform, read_field, write_field
from .mixed_norms import IndexPoint, MixedNormSpec, Order, mixed_norm, mu_exponents
from .multipliers import Symbol, apply_multiplier, dilate
from .plate_solver import (Nonlinearity, SolverConfig, Trajectory, check_t2_admissible, duhamel,
                           energy, picard_solve, propagate_linear, time_derivative_linear)

__all__ = [
    "Field", "IndexPoint", "Lattice", "MixedNormSpec", "Nonlinearity", "Order", "SolverConfig",
    "StftMatrix", "Symbol", "Trajectory", "Window", "apply_multiplier", "check_t2_admissible",
    "dilate", "duhamel", "energy", "forward_transform", "inverse_transform", "mixed_norm",
    "mu_exponents", "picard_solve", "propagate_linear", "read_field", "stft",
    "time_derivative_linear", "write_field",
]
