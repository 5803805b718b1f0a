"""Relative Capacity.

The capacity of a relatively open set O of the closed domain is the minimum of the
Sobolev modular over grid functions with u = 1 on O (cells and boundary nodes).
Clamping to [0, 1] never increases the modular, so the solver works on the box
0 <= u <= 1 with O's cells fixed at 1. Arbitrary sets are measured through their
one-ring open hull.

Example:
```python
grid = build_grid(DomainSpec.interval(0.0, 1.0), 16)
field = ExponentField(grid, q=2.0, p=2.0)
result = capacity_set(SetMask.from_indices(grid, cells=[7, 8]), field, s=0.5)
result.value, result.iterations
```
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any

import numpy as np

from ..exceptions import AdmissibilityError, ConvergenceError, GridMismatchError, UsageError
from ..models import AxiomCheck, AxiomReport, SolverOptions
from ..space.exponents import ExponentField
from ..space.functions import GridFunction
from ..space.grid import Grid, SetMask, measure, open_neighborhood, transfer_mask
from .modular import check_smoothness, modular_operator, sobolev_modular
from .optimize import projected_gradient

logger = logging.getLogger(__name__)

# Slack when checking u >= 1 on the admissible set
ADMISSIBLE_SLACK = 1e-12
# Axiom tolerance relative to the largest capacity in the family
AXIOM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CapacityResult:
    """Capacity value, equilibrium potential and solver diagnostics.

    residual is the projected-gradient residual of the modular per unit cell measure.
    """

    value: float
    equilibrium: GridFunction
    iterations: int
    residual: float
    admissible_set: SetMask
    converged: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "admissible_set": self.admissible_set.to_dict(),
            "equilibrium": self.equilibrium.to_values(),
        }


def _result(
    mask: SetMask,
    field: ExponentField,
    s: float,
    cells: np.ndarray,
    iterations: int = 0,
    residual: float = 0.0,
    converged: bool = True,
) -> CapacityResult:
    equilibrium = GridFunction(mask.grid, cells, mask.boundary.astype(float))
    value = sobolev_modular(equilibrium, field, s).total
    return CapacityResult(value, equilibrium, iterations, residual, mask, converged)


def capacity_relative_open(
    admissible: SetMask,
    field: ExponentField,
    s: float,
    options: SolverOptions | None = None,
    initial: GridFunction | None = None,
) -> CapacityResult:
    """Capacity of a relatively open set by projected gradient.

    Args:
        admissible: The set O where u = 1 is imposed
        field: Exponents
        s: Fractional order in (0, 1)
        options: Solver options (defaults from settings)
        initial: Starting function (default: the indicator of O)

    Returns:
        CapacityResult whose value is the modular of the equilibrium potential

    Raises:
        ParameterError: If s is outside (0, 1)
        ConvergenceError: If the iteration cap is hit; carries the best iterate
    """
    s = check_smoothness(s)
    options = options or SolverOptions()
    grid = admissible.grid

    if admissible.is_empty():
        return _result(admissible, field, s, np.zeros(grid.n_cells))
    if admissible.cells.all():
        logger.debug("Every cell is fixed; capacity is the modular of 1")
        return _result(admissible, field, s, np.ones(grid.n_cells))

    operator = modular_operator(grid, field, s)
    scale = 1.0 / grid.cell_measure
    fixed = admissible.cells
    lower = np.where(fixed, 1.0, 0.0)
    upper = np.ones(grid.n_cells)
    if initial is not None:
        if initial.grid is not grid:
            raise GridMismatchError("capacity_relative_open")
        x0 = initial.cells
    else:
        x0 = fixed.astype(float)

    # The objective is scaled by 1/h^n so tolerances are per unit cell measure
    outcome = projected_gradient(
        lambda x: operator.total(x) * scale,
        lambda x: operator.gradient(x) * scale,
        x0,
        lower,
        upper,
        options,
    )
    result = _result(
        admissible, field, s, outcome.x, outcome.iterations, outcome.residual, outcome.converged
    )
    logger.debug(
        f"Capacity {result.value:.12g} after {outcome.iterations} iterations ({outcome.status})"
    )
    if not outcome.converged:
        raise ConvergenceError(outcome.iterations, outcome.residual, best=result)
    return result


def capacity_set(
    mask: SetMask, field: ExponentField, s: float, options: SolverOptions | None = None
) -> CapacityResult:
    """Capacity of an arbitrary set through its one-ring open hull."""
    return capacity_relative_open(open_neighborhood(mask.grid, mask), field, s, options)


def equilibrium_potential(
    admissible: SetMask,
    field: ExponentField,
    s: float,
    options: SolverOptions | None = None,
    initial: GridFunction | None = None,
) -> GridFunction:
    """Minimizer attaining the capacity of a relatively open set."""
    return capacity_relative_open(admissible, field, s, options, initial).equilibrium


def capacity_upper_bound(u: GridFunction, admissible: SetMask, field: ExponentField, s: float) -> float:
    """Modular of an admissible test function, an upper bound for the capacity.

    u is clamped to [0, 1] and set to 1 on the admissible set before evaluation.

    Raises:
        AdmissibilityError: If u < 1 somewhere on the admissible set
    """
    if u.grid is not admissible.grid:
        raise GridMismatchError("capacity_upper_bound")
    low_cells = u.cells[admissible.cells]
    low_nodes = u.boundary[admissible.boundary]
    smallest = min(
        float(low_cells.min()) if low_cells.size else np.inf,
        float(low_nodes.min()) if low_nodes.size else np.inf,
    )
    if smallest < 1.0 - ADMISSIBLE_SLACK:
        raise AdmissibilityError(f"test function drops to {smallest} on the set")
    cells = np.where(admissible.cells, 1.0, np.clip(u.cells, 0.0, 1.0))
    nodes = np.where(admissible.boundary, 1.0, np.clip(u.boundary, 0.0, 1.0))
    return sobolev_modular(GridFunction(u.grid, cells, nodes), field, s).total


class _CapacityCache:
    """Hull capacities keyed by mask contents."""

    def __init__(self, field: ExponentField, s: float, options: SolverOptions | None) -> None:
        self.field = field
        self.s = s
        self.options = options
        self.values: dict[tuple[bytes, bytes, int], float] = {}

    def __call__(self, mask: SetMask) -> float:
        key = (mask.cells.tobytes(), mask.boundary.tobytes(), id(mask.grid))
        if key not in self.values:
            try:
                self.values[key] = capacity_set(mask, self.field, self.s, self.options).value
            except ConvergenceError as e:
                logger.warning(f"Using best iterate for an unconverged capacity: {e}")
                self.values[key] = e.best.value
        return self.values[key]


def _check(name: str, margins: list[float], tolerance: float, detail: str = "") -> AxiomCheck:
    margin = min(margins) if margins else 0.0
    return AxiomCheck(
        name=name,
        passed=margin >= -tolerance,
        margin=margin,
        checks=len(margins),
        detail=detail,
    )


def _same_grid(sets: list[SetMask], operation: str) -> Grid:
    grid = sets[0].grid
    if any(mask.grid is not grid for mask in sets):
        raise GridMismatchError(operation)
    return grid


def verify_capacity_axioms(
    sets: list[SetMask], field: ExponentField, s: float, options: SolverOptions | None = None
) -> AxiomReport:
    """Check the capacity properties over a family of sets.

    Properties: empty set has capacity 0, monotonicity over nested pairs, finite
    subadditivity, strong subadditivity, and |E| <= C(E). Each passes when its
    smallest margin is at least -1e-6 * max(1, largest capacity).

    Raises:
        UsageError: If fewer than two sets are given
    """
    if len(sets) < 2:
        raise UsageError("at least two sets are needed")
    grid = _same_grid(sets, "verify_capacity_axioms")
    s = check_smoothness(s)
    capacity = _CapacityCache(field, s, options)

    values = [capacity(mask) for mask in sets]
    empty_value = capacity(SetMask.empty(grid))
    pairs = list(combinations(range(len(sets)), 2))
    unions = {(i, j): capacity(sets[i].union(sets[j])) for i, j in pairs}
    tolerance = AXIOM_TOLERANCE * max(1.0, max(values + list(unions.values())))

    nested = []
    for i in range(len(sets)):
        for j in range(len(sets)):
            if i != j and sets[i].issubset(sets[j]):
                nested.append(values[j] - values[i])

    subadditive = [values[i] + values[j] - unions[(i, j)] for i, j in pairs]
    strong = [
        values[i] + values[j] - unions[(i, j)] - capacity(sets[i].intersection(sets[j]))
        for i, j in pairs
    ]
    measure_bound = [value - measure(grid, mask) for mask, value in zip(sets, values)]

    checks = [
        AxiomCheck(
            name="empty_set",
            passed=empty_value == 0.0,
            margin=-empty_value,
            checks=1,
        ),
        _check("monotonicity", nested, tolerance, f"{len(nested)} nested pairs"),
        _check("finite_subadditivity", subadditive, tolerance),
        _check("strong_subadditivity", strong, tolerance),
        _check("measure_bound", measure_bound, tolerance),
    ]
    report = AxiomReport(checks=checks, capacities=values, tolerance=tolerance)
    logger.info(
        "Capacity axioms: " + ", ".join(f"{c.name}={'pass' if c.passed else 'FAIL'}" for c in checks)
    )
    return report


def _check_chain(chain: list[SetMask], decreasing: bool) -> None:
    if len(chain) < 2:
        raise UsageError("a chain needs at least two sets")
    for current, following in zip(chain, chain[1:]):
        nested = following.issubset(current) if decreasing else current.issubset(following)
        if not nested:
            direction = "decreasing" if decreasing else "increasing"
            raise UsageError(f"sets do not form an {direction} chain")


def verify_decreasing_chain(
    chain: list[SetMask], field: ExponentField, s: float, options: SolverOptions | None = None
) -> AxiomCheck:
    """Continuity along a decreasing chain at finite truncation.

    Capacities must be non-increasing and the capacity of the intersection must
    not fall below the last term.
    """
    _same_grid(chain, "verify_decreasing_chain")
    _check_chain(chain, decreasing=True)
    capacity = _CapacityCache(field, check_smoothness(s), options)
    values = [capacity(mask) for mask in chain]
    intersection = chain[0]
    for mask in chain[1:]:
        intersection = intersection.intersection(mask)
    tolerance = AXIOM_TOLERANCE * max(1.0, max(values))
    margins = [a - b for a, b in zip(values, values[1:])]
    margins.append(capacity(intersection) - values[-1])
    return _check("decreasing_chain", margins, tolerance)


def verify_increasing_chain(
    chain: list[SetMask], field: ExponentField, s: float, options: SolverOptions | None = None
) -> AxiomCheck:
    """C(union of an increasing chain) equals its last term."""
    _same_grid(chain, "verify_increasing_chain")
    _check_chain(chain, decreasing=False)
    capacity = _CapacityCache(field, check_smoothness(s), options)
    values = [capacity(mask) for mask in chain]
    union = chain[0]
    for mask in chain[1:]:
        union = union.union(mask)
    tolerance = AXIOM_TOLERANCE * max(1.0, max(values))
    gap = abs(capacity(union) - values[-1])
    margins = [b - a for a, b in zip(values, values[1:])]
    margins.append(-gap)
    return _check("increasing_chain", margins, tolerance)


def verify_countable_subadditivity(
    sets: list[SetMask], field: ExponentField, s: float, options: SolverOptions | None = None
) -> AxiomCheck:
    """C(union) <= sum of C(E_i) over a finite family."""
    if not sets:
        raise UsageError("at least one set is needed")
    _same_grid(sets, "verify_countable_subadditivity")
    capacity = _CapacityCache(field, check_smoothness(s), options)
    values = [capacity(mask) for mask in sets]
    union = sets[0]
    for mask in sets[1:]:
        union = union.union(mask)
    union_value = capacity(union)
    tolerance = AXIOM_TOLERANCE * max(1.0, union_value, max(values))
    return _check(
        "countable_subadditivity", [sum(values) - union_value], tolerance, f"{len(sets)} sets"
    )


def verify_domain_monotonicity(
    mask: SetMask,
    inner_grid: Grid,
    field: ExponentField,
    s: float,
    options: SolverOptions | None = None,
) -> AxiomCheck:
    """Compare capacities of a set on a domain and on a subdomain with shared cells.

    Passes when C(E on the subdomain) <= C(E on the full domain): restricting an
    admissible function to the subdomain keeps it admissible and drops terms. The
    detail field reports the opposite-direction margin.
    """
    s = check_smoothness(s)
    inner_mask = transfer_mask(mask, inner_grid)
    outer = _CapacityCache(field, s, options)(mask)
    inner = _CapacityCache(field, s, options)(inner_mask)
    tolerance = AXIOM_TOLERANCE * max(1.0, outer, inner)
    return _check(
        "domain_monotonicity",
        [outer - inner],
        tolerance,
        f"outer={outer:.12g}, inner={inner:.12g}, reverse margin={inner - outer:.3e}",
    )
