"""Exact scaling solutions of reaction-diffusion equations and tools to check them.

Modules
-------
core          scaling exponents, similarity map, profiles
catalog       the closed-form systems and their parameter constraints
reduction     residual oracles for the reduced ODE, first integral and PDE
solver        theta-scheme finite-difference integrator
conservation  particle-number law and continuity identity
cli           the ``rdsim`` command
"""

from .catalog import (AnalyticRDSystem, DegenerateParameterError, ParamConstraintViolation,
                      build, get_info, list_systems)
from .conservation import (ConservationReport, DivergentTotalNumber, check_continuity_identity,
                           check_N_scaling, total_number)
from .core import (DomainError, Profile, ScalingExponents, SimilarityMap, SpatialDomain,
                   check_scale_invariance, reconstruct_W, similarity_variable)
from .reduction import (ContractError, ResidualReport, first_integral_residual, ode_residual,
                        pde_residual)
from .solver import (ComparisonReport, Grid1D, NumericField, SolverConfig, SolverError,
                     compare_to_analytic, convergence_study, solve)

__version__ = "0.1.0"

__all__ = [
    "AnalyticRDSystem", "ComparisonReport", "ConservationReport", "ContractError",
    "DegenerateParameterError", "DivergentTotalNumber", "DomainError", "Grid1D",
    "NumericField", "ParamConstraintViolation", "Profile", "ResidualReport",
    "ScalingExponents", "SimilarityMap", "SolverConfig", "SolverError", "SpatialDomain",
    "build", "check_N_scaling", "check_continuity_identity", "check_scale_invariance",
    "compare_to_analytic", "convergence_study", "first_integral_residual", "get_info",
    "list_systems", "ode_residual", "pde_residual", "reconstruct_W", "similarity_variable",
    "solve", "total_number",
]
