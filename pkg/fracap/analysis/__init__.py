"""Modulars, norms, capacities and trace analysis on grids."""

from .capacity import (
    CapacityResult,
    capacity_relative_open,
    capacity_set,
    capacity_upper_bound,
    equilibrium_potential,
    verify_capacity_axioms,
    verify_countable_subadditivity,
    verify_decreasing_chain,
    verify_domain_monotonicity,
    verify_increasing_chain,
)
from .modular import (
    ModularOperator,
    gagliardo_modular,
    lebesgue_modular,
    modular_gradient,
    modular_operator,
    sobolev_modular,
)
from .norms import gagliardo_seminorm, luxembourg_norm, modular_norm, sobolev_norm
from .optimize import OptimizationResult, projected_gradient
from .reduction import matrix_sum, tree_sum
from .trace import (
    boundary_polarity_check,
    boundary_trace_deficiency,
    limit_convergence_certificate,
    polarity_verdict,
    quasi_convergence_certificate,
    removable_set_check,
    zero_trace_membership,
)

__all__ = [
    # Modulars
    "ModularOperator",
    "gagliardo_modular",
    "lebesgue_modular",
    "modular_gradient",
    "modular_operator",
    "sobolev_modular",
    # Norms
    "gagliardo_seminorm",
    "luxembourg_norm",
    "modular_norm",
    "sobolev_norm",
    # Capacity
    "CapacityResult",
    "capacity_relative_open",
    "capacity_set",
    "capacity_upper_bound",
    "equilibrium_potential",
    "verify_capacity_axioms",
    "verify_countable_subadditivity",
    "verify_decreasing_chain",
    "verify_domain_monotonicity",
    "verify_increasing_chain",
    # Trace
    "boundary_polarity_check",
    "boundary_trace_deficiency",
    "limit_convergence_certificate",
    "polarity_verdict",
    "quasi_convergence_certificate",
    "removable_set_check",
    "zero_trace_membership",
    # Numerics
    "OptimizationResult",
    "matrix_sum",
    "projected_gradient",
    "tree_sum",
]
