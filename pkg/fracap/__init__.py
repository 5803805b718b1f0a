"""fracap: fractional variable-exponent Sobolev capacities on grids

Discretized modulars, Luxembourg-type norms and the relative capacity for
fractional Sobolev spaces with variable exponents q(x) and p(x, y), on intervals
and rectangles (optionally with rectangular holes).

Usage:
    from fracap import DomainSpec, ExponentField, GridFunction, SetMask, build_grid
    from fracap import capacity_set, sobolev_modular

    grid = build_grid(DomainSpec.interval(0.0, 1.0), 32)
    field = ExponentField(grid, q="2 + x", p=2.0)

    u = GridFunction.from_expression(grid, "x")
    sobolev_modular(u, field, s=0.5).total

    result = capacity_set(SetMask.from_indices(grid, cells=[15, 16]), field, s=0.5)
    result.value, result.equilibrium
"""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    CapacityResult,
    boundary_polarity_check,
    boundary_trace_deficiency,
    capacity_relative_open,
    capacity_set,
    capacity_upper_bound,
    equilibrium_potential,
    gagliardo_modular,
    gagliardo_seminorm,
    lebesgue_modular,
    limit_convergence_certificate,
    luxembourg_norm,
    modular_gradient,
    modular_norm,
    quasi_convergence_certificate,
    removable_set_check,
    sobolev_modular,
    sobolev_norm,
    verify_capacity_axioms,
    verify_countable_subadditivity,
    verify_decreasing_chain,
    verify_domain_monotonicity,
    verify_increasing_chain,
    zero_trace_membership,
)
from .config import Settings, get_settings  # noqa: E402
from .exceptions import (  # noqa: E402
    AdmissibilityError,
    CertificateInapplicableError,
    ConstructionError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExpressionError,
    FracapError,
    GridMismatchError,
    InvalidExponentError,
    ParameterError,
    ReportWriteError,
    UsageError,
    ValidationError,
)
from .models import (  # noqa: E402
    AxiomCheck,
    AxiomReport,
    ConvergenceCertificate,
    LimitCertificate,
    MembershipReport,
    ModularBreakdown,
    ModulusEstimate,
    NormReport,
    PolarityReport,
    RemovabilityReport,
    SolverOptions,
)
from .space import (  # noqa: E402
    DomainSpec,
    ExponentField,
    Grid,
    GridFunction,
    SetMask,
    boundary_mask,
    build_grid,
    check_bb_condition,
    check_log_holder,
    eval_p,
    eval_q,
    exponent_bounds,
    measure,
    open_neighborhood,
)

__all__ = [
    # Space
    "DomainSpec",
    "ExponentField",
    "Grid",
    "GridFunction",
    "SetMask",
    "boundary_mask",
    "build_grid",
    "check_bb_condition",
    "check_log_holder",
    "eval_p",
    "eval_q",
    "exponent_bounds",
    "measure",
    "open_neighborhood",
    # Modulars and norms
    "gagliardo_modular",
    "gagliardo_seminorm",
    "lebesgue_modular",
    "luxembourg_norm",
    "modular_gradient",
    "modular_norm",
    "sobolev_modular",
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
    "quasi_convergence_certificate",
    "removable_set_check",
    "zero_trace_membership",
    # Report models
    "AxiomCheck",
    "AxiomReport",
    "ConvergenceCertificate",
    "LimitCertificate",
    "MembershipReport",
    "ModularBreakdown",
    "ModulusEstimate",
    "NormReport",
    "PolarityReport",
    "RemovabilityReport",
    "SolverOptions",
    # Configuration
    "Settings",
    "get_settings",
    # Exceptions
    "FracapError",
    "AdmissibilityError",
    "CertificateInapplicableError",
    "ConstructionError",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "ExpressionError",
    "GridMismatchError",
    "InvalidExponentError",
    "ParameterError",
    "ReportWriteError",
    "UsageError",
    "ValidationError",
]
