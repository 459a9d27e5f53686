"""Energy-conserving schemes for the conservative wave equation
u_tx = dG/du on a periodic domain.

Three spatial discretizations (central difference, Fourier spectral,
and a forward difference/average pair) share a discrete-gradient time
step that conserves the discrete energy H_d = sum_k G(u_k) dx exactly.
"""

from ._backend import USING_COMPILED, backend_name
from .analysis import (FourierData, PhaseSpeedTable, exact_linear_solution,
                       fourier_coefficients, l2_error, phase_speed,
                       phase_speed_table, step_exact_solution,
                       step_fourier_coefficients, step_initial, step_profile,
                       total_variation)
from .grid import GridFunction, PeriodicGrid, SpectralVector
from .operators import (OperatorKind, central_diff, dft, forward_average,
                        forward_diff, idft, operator_symbol, spectral_diff)
from .schemes import (MeanModePolicy, MeanModeViolation, NonConvergence,
                      SchemeInstance, SchemeKind, SolverConfig, Trajectory)
from .variational import (DiscreteEnergy, HamiltonianDensity, discrete_energy,
                          discrete_variational_derivative, parse_density)
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "DiscreteEnergy",
    "FourierData",
    "GridFunction",
    "HamiltonianDensity",
    "MeanModePolicy",
    "MeanModeViolation",
    "NonConvergence",
    "OperatorKind",
    "PeriodicGrid",
    "PhaseSpeedTable",
    "SchemeInstance",
    "SchemeKind",
    "SolverConfig",
    "SpectralVector",
    "Trajectory",
    "USING_COMPILED",
    "backend_name",
    "central_diff",
    "dft",
    "discrete_energy",
    "discrete_variational_derivative",
    "exact_linear_solution",
    "forward_average",
    "forward_diff",
    "fourier_coefficients",
    "idft",
    "l2_error",
    "operator_symbol",
    "parse_density",
    "phase_speed",
    "phase_speed_table",
    "run_verification",
    "spectral_diff",
    "step_exact_solution",
    "step_fourier_coefficients",
    "step_initial",
    "step_profile",
    "total_variation",
]
