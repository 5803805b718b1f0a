"""Sobolev Modulars.

Midpoint-rule discretizations on a cell-centered grid:

    lebesgue  = sum_i |u_i|^q_i h^n
    gagliardo = sum_{i != j} |u_i - u_j|^p_ij / d_ij^(n + s p_ij) h^(2n)

with d_ij the distance between cell centers. Diagonal pairs contribute 0. Boundary
node values never enter either sum.
"""

from __future__ import annotations

import logging
from functools import cached_property, lru_cache

import numpy as np

from ..exceptions import EvaluationError, ParameterError
from ..models import ModularBreakdown
from ..space.exponents import ExponentField
from ..space.functions import GridFunction
from ..space.grid import Grid
from .reduction import matrix_sum, tree_sum

logger = logging.getLogger(__name__)

# Each cached operator holds dense cells x cells matrices
OPERATOR_CACHE_SIZE = 4


def check_smoothness(s: float) -> float:
    """Validate the fractional order s in (0, 1)."""
    if not 0.0 < s < 1.0:
        raise ParameterError("s", s, "fractional order must lie in (0, 1)")
    return float(s)


class ModularOperator:
    """Precomputed exponents and kernel weights for one (grid, field, s).

    Works on raw cell-value vectors. Overflow yields inf instead of raising so that
    norm bisection can try very small scales.
    """

    def __init__(self, grid: Grid, field: ExponentField, s: float) -> None:
        self.grid = grid
        self.field = field
        self.s = check_smoothness(s)
        self.cell_measure = grid.cell_measure
        self.q = field.q_at(grid.centers)

    @cached_property
    def p(self) -> np.ndarray:
        return self.field.p_matrix(self.grid.centers)

    @cached_property
    def weight(self) -> np.ndarray:
        """h^(2n) / d_ij^(n + s p_ij) with a zero diagonal."""
        n = self.grid.dimension
        centers = self.grid.centers
        dist = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
        with np.errstate(divide="ignore"):
            weight = self.cell_measure**2 / dist ** (n + self.s * self.p)
        np.fill_diagonal(weight, 0.0)
        return weight

    def lebesgue(self, values: np.ndarray) -> float:
        with np.errstate(over="ignore"):
            return tree_sum(np.abs(values) ** self.q) * self.cell_measure  # type: ignore[operator]

    def pair_terms(self, values: np.ndarray) -> np.ndarray:
        """Integrand of the double sum over ordered cell pairs."""
        diff = np.abs(values[:, None] - values[None, :])
        with np.errstate(over="ignore", invalid="ignore"):
            return diff**self.p * self.weight

    def gagliardo(self, values: np.ndarray) -> float:
        return matrix_sum(self.pair_terms(values))

    def total(self, values: np.ndarray) -> float:
        return self.lebesgue(values) + self.gagliardo(values)

    def gradient(self, values: np.ndarray) -> np.ndarray:
        """Derivative of total() with respect to each cell value."""
        q = self.q
        with np.errstate(over="ignore", invalid="ignore"):
            local = q * np.abs(values) ** (q - 1.0) * np.sign(values) * self.cell_measure
            diff = values[:, None] - values[None, :]
            pair = self.p * np.abs(diff) ** (self.p - 1.0) * np.sign(diff) * self.weight
        return local + 2.0 * tree_sum(pair, axis=1)  # type: ignore[operator]


@lru_cache(maxsize=OPERATOR_CACHE_SIZE)
def modular_operator(grid: Grid, field: ExponentField, s: float) -> ModularOperator:
    """Cached ModularOperator (grids and fields hash by identity)."""
    logger.debug(f"Building modular operator for {grid} with s={s}")
    return ModularOperator(grid, field, s)


def _finite(value: float, operation: str) -> float:
    if not np.isfinite(value):
        raise EvaluationError(operation, f"modular is not finite ({value})")
    return float(value)


def lebesgue_modular(u: GridFunction, field: ExponentField) -> float:
    """sum_i |u_i|^q(x_i) h^n over cells.

    Raises:
        EvaluationError: If the sum overflows
    """
    q = field.q_at(u.grid.centers)
    with np.errstate(over="ignore"):
        value = tree_sum(np.abs(u.cells) ** q) * u.grid.cell_measure  # type: ignore[operator]
    return _finite(value, "lebesgue_modular")


def gagliardo_modular(u: GridFunction, field: ExponentField, s: float) -> float:
    """Double sum over ordered pairs of distinct cells.

    Raises:
        ParameterError: If s is outside (0, 1)
        EvaluationError: If the sum overflows
    """
    operator = modular_operator(u.grid, field, check_smoothness(s))
    return _finite(operator.gagliardo(u.cells), "gagliardo_modular")


def sobolev_modular(u: GridFunction, field: ExponentField, s: float) -> ModularBreakdown:
    """Full modular with its Lebesgue and Gagliardo terms."""
    lebesgue = lebesgue_modular(u, field)
    gagliardo = gagliardo_modular(u, field, s)
    return ModularBreakdown(
        lebesgue_term=lebesgue, gagliardo_term=gagliardo, total=lebesgue + gagliardo
    )


def modular_gradient(u: GridFunction, field: ExponentField, s: float) -> GridFunction:
    """Gradient of the total modular with respect to cell values.

    Boundary entries are 0: boundary values do not enter the modular.
    """
    operator = modular_operator(u.grid, field, check_smoothness(s))
    gradient = operator.gradient(u.cells)
    if not np.all(np.isfinite(gradient)):
        raise EvaluationError("modular_gradient", "gradient is not finite")
    return GridFunction(u.grid, gradient, np.zeros(u.grid.n_boundary))
