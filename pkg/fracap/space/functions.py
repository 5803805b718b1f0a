"""Grid Functions.

Real values per cell plus real values per boundary node, and the lattice and
truncation operations used throughout the capacity arguments. Boundary values
never enter integrals; they only matter for admissibility and trace checks.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConstructionError, GridMismatchError, ParameterError
from .expression import parse_expression
from .grid import Grid, SetMask


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Immutable function on the cells and boundary nodes of a grid."""

    grid: Grid
    cells: np.ndarray = field(repr=False)
    boundary: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        cells = np.array(self.cells, dtype=float)
        boundary = np.array(self.boundary, dtype=float)
        if cells.shape != (self.grid.n_cells,):
            raise ConstructionError(
                f"cell values have shape {cells.shape}, expected ({self.grid.n_cells},)"
            )
        if boundary.shape != (self.grid.n_boundary,):
            raise ConstructionError(
                f"boundary values have shape {boundary.shape}, expected ({self.grid.n_boundary},)"
            )
        if not (np.all(np.isfinite(cells)) and np.all(np.isfinite(boundary))):
            raise ConstructionError("grid function values must be finite")
        cells.setflags(write=False)
        boundary.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def constant(cls, grid: Grid, value: float) -> GridFunction:
        return cls(grid, np.full(grid.n_cells, float(value)), np.full(grid.n_boundary, float(value)))

    @classmethod
    def zeros(cls, grid: Grid) -> GridFunction:
        return cls.constant(grid, 0.0)

    @classmethod
    def indicator(cls, mask: SetMask) -> GridFunction:
        """Characteristic function of a mask."""
        return cls(mask.grid, mask.cells.astype(float), mask.boundary.astype(float))

    @classmethod
    def from_expression(cls, grid: Grid, text: str) -> GridFunction:
        """Sample a one-point expression at cell centers and boundary nodes."""
        expression = parse_expression(text)
        expression.check(grid.dimension, two_point=False)
        return cls(
            grid,
            expression.evaluate(grid.centers),
            expression.evaluate(grid.boundary_nodes) if grid.n_boundary else np.zeros(0),
        )

    @classmethod
    def from_values(
        cls, grid: Grid, cells: Sequence[float], boundary: Sequence[float] | None = None
    ) -> GridFunction:
        """Build from value lists; missing boundary values default to 0."""
        node_values = np.zeros(grid.n_boundary) if boundary is None else np.asarray(boundary)
        return cls(grid, np.asarray(cells, dtype=float), node_values)

    def to_values(self) -> list[float]:
        """Flat values in grid node order: cells first, then boundary nodes."""
        return [float(v) for v in np.concatenate([self.cells, self.boundary])]

    def sup_norm(self) -> float:
        """max |u| over cells and boundary nodes."""
        values = np.concatenate([np.abs(self.cells), np.abs(self.boundary)])
        return float(values.max()) if values.size else 0.0

    def allclose(self, other: GridFunction, atol: float = 0.0) -> bool:
        _same_grid(self, other, "allclose")
        return bool(
            np.allclose(self.cells, other.cells, rtol=0.0, atol=atol)
            and np.allclose(self.boundary, other.boundary, rtol=0.0, atol=atol)
        )


def _same_grid(u: GridFunction, v: GridFunction, operation: str) -> None:
    if u.grid is not v.grid:
        raise GridMismatchError(operation)


def pointwise_max(u: GridFunction, v: GridFunction) -> GridFunction:
    _same_grid(u, v, "pointwise_max")
    return GridFunction(u.grid, np.maximum(u.cells, v.cells), np.maximum(u.boundary, v.boundary))


def pointwise_min(u: GridFunction, v: GridFunction) -> GridFunction:
    _same_grid(u, v, "pointwise_min")
    return GridFunction(u.grid, np.minimum(u.cells, v.cells), np.minimum(u.boundary, v.boundary))


def positive_part(u: GridFunction) -> GridFunction:
    """u+ = max(u, 0)."""
    return GridFunction(u.grid, np.maximum(u.cells, 0.0), np.maximum(u.boundary, 0.0))


def negative_part(u: GridFunction) -> GridFunction:
    """u- = max(-u, 0), so that u = u+ - u-."""
    return GridFunction(u.grid, np.maximum(-u.cells, 0.0), np.maximum(-u.boundary, 0.0))


def absolute_value(u: GridFunction) -> GridFunction:
    return GridFunction(u.grid, np.abs(u.cells), np.abs(u.boundary))


def truncate(u: GridFunction, level: float) -> GridFunction:
    """Clamp values to [-level, level].

    Raises:
        ParameterError: If level is not positive
    """
    if not level > 0:
        raise ParameterError("level", level, "truncation level must be positive")
    return GridFunction(
        u.grid, np.clip(u.cells, -level, level), np.clip(u.boundary, -level, level)
    )


def shifted_positive_part(u: GridFunction, level: float) -> GridFunction:
    """(u - level)+ for level >= 0."""
    if not level >= 0:
        raise ParameterError("level", level, "shift must be non-negative")
    return GridFunction(
        u.grid, np.maximum(u.cells - level, 0.0), np.maximum(u.boundary - level, 0.0)
    )


def scale_and_combine(alpha: float, u: GridFunction, beta: float, v: GridFunction) -> GridFunction:
    """alpha * u + beta * v nodewise."""
    _same_grid(u, v, "scale_and_combine")
    return GridFunction(
        u.grid, alpha * u.cells + beta * v.cells, alpha * u.boundary + beta * v.boundary
    )


def pointwise_product(u: GridFunction, v: GridFunction) -> GridFunction:
    _same_grid(u, v, "pointwise_product")
    return GridFunction(u.grid, u.cells * v.cells, u.boundary * v.boundary)
