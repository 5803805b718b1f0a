"""Uniform Cell-Centered Grids.

Discretizes a bounded open set of R^n (n in {1, 2}) into square cells of equal
measure, carries the boundary as explicit zero-measure nodes at boundary face
midpoints, and represents subsets of the closure as SetMask objects.

Supported domains are an interval, an axis-aligned rectangle, or either of those
minus a finite union of closed, grid-aligned boxes ("holes").

Example:
```python
domain = DomainSpec.rectangle((0.0, 1.0), (0.0, 1.0), holes=[((0.25, 0.25), (0.75, 0.75))])
grid = build_grid(domain, 8)
grid.n_cells            # 48
measure(grid, SetMask.full(grid))  # 0.75
```
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..exceptions import ConstructionError, DomainError, GridMismatchError, UsageError

logger = logging.getLogger(__name__)

# Relative slack for alignment and containment tests
ALIGN_TOL = 1e-9
# Decimals used when matching points across grids
MATCH_DECIMALS = 9

Box = tuple[tuple[float, ...], tuple[float, ...]]


@dataclass(frozen=True)
class DomainSpec:
    """Axis-aligned box minus a finite union of closed boxes."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    holes: tuple[Box, ...] = ()

    @classmethod
    def interval(
        cls, a: float, b: float, holes: Iterable[tuple[float, float]] = ()
    ) -> DomainSpec:
        """Open interval (a, b) minus closed sub-intervals."""
        return cls(
            lower=(float(a),),
            upper=(float(b),),
            holes=tuple(((float(lo),), (float(hi),)) for lo, hi in holes),
        )

    @classmethod
    def rectangle(
        cls,
        x_bounds: tuple[float, float],
        y_bounds: tuple[float, float],
        holes: Iterable[Box] = (),
    ) -> DomainSpec:
        """Open rectangle minus closed sub-rectangles given as (lower corner, upper corner)."""
        return cls(
            lower=(float(x_bounds[0]), float(y_bounds[0])),
            upper=(float(x_bounds[1]), float(y_bounds[1])),
            holes=tuple(
                (tuple(float(c) for c in lo), tuple(float(c) for c in hi)) for lo, hi in holes
            ),
        )

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def diameter(self) -> float:
        """Diameter of the bounding box."""
        return float(np.linalg.norm(np.subtract(self.upper, self.lower)))

    def contains(self, points: np.ndarray, closed: bool = True) -> np.ndarray:
        """Vectorized membership test for Omega (closed=False) or its closure.

        Args:
            points: Array of shape (m, n)
            closed: Test against the closure instead of the open set

        Returns:
            Boolean array of shape (m,)
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        slack = ALIGN_TOL * max(1.0, float(np.max(upper - lower)))
        if closed:
            inside = np.all((pts >= lower - slack) & (pts <= upper + slack), axis=1)
        else:
            inside = np.all((pts > lower) & (pts < upper), axis=1)
        for lo, hi in self.holes:
            lo_arr = np.asarray(lo)
            hi_arr = np.asarray(hi)
            if closed:
                # The closure keeps the hole's boundary
                in_hole = np.all((pts > lo_arr + slack) & (pts < hi_arr - slack), axis=1)
            else:
                in_hole = np.all((pts >= lo_arr) & (pts <= hi_arr), axis=1)
            inside &= ~in_hole
        return inside


class Grid:
    """Uniform cell-centered discretization of a bounded open set.

    Attributes:
        domain: Domain specification
        resolution: Cells per axis of the bounding box
        h: Cell side length (equal on every axis)
        centers: Cell centers, shape (n_cells, n), lexicographic by axis
        boundary_nodes: Points on the boundary, shape (n_boundary, n)
        node_cell: Index of the unique cell adjacent to each boundary node
        cell_edges: Face-adjacent cell pairs (a, b) with a < b
    """

    def __init__(
        self,
        domain: DomainSpec,
        resolution: tuple[int, ...],
        h: float,
        centers: np.ndarray,
        box_index: np.ndarray,
        boundary_nodes: np.ndarray,
        node_cell: np.ndarray,
        cell_edges: np.ndarray,
    ) -> None:
        self.domain = domain
        self.resolution = resolution
        self.h = h
        self.centers = _frozen(centers)
        self.box_index = _frozen(box_index)
        self.boundary_nodes = _frozen(boundary_nodes)
        self.node_cell = _frozen(node_cell)
        self.cell_edges = _frozen(cell_edges)

    def __repr__(self) -> str:
        return (
            f"Grid(dimension={self.dimension}, resolution={self.resolution}, "
            f"cells={self.n_cells}, boundary_nodes={self.n_boundary})"
        )

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    @property
    def n_cells(self) -> int:
        return int(self.centers.shape[0])

    @property
    def n_boundary(self) -> int:
        return int(self.boundary_nodes.shape[0])

    @property
    def cell_measure(self) -> float:
        """Uniform cell measure h^n."""
        return float(self.h**self.dimension)

    @property
    def volume(self) -> float:
        """Total cell measure |Omega|."""
        return self.n_cells * self.cell_measure

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Index of the closed cell containing each point of the closed domain.

        Ties on shared faces resolve to the lowest cell index.

        Raises:
            DomainError: If a point lies outside the closed domain
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.domain.contains(pts, closed=True)
        if not np.all(inside):
            bad = pts[np.argmin(inside)]
            raise DomainError(tuple(float(c) for c in bad))
        # Chebyshev distance to each center; nearest center owns the point
        dist = np.max(np.abs(pts[:, None, :] - self.centers[None, :, :]), axis=2)
        return np.argmin(dist, axis=1)

    def cell_neighbors(self) -> list[np.ndarray]:
        """Face-adjacent neighbors of each cell."""
        neighbors: list[list[int]] = [[] for _ in range(self.n_cells)]
        for a, b in self.cell_edges:
            neighbors[int(a)].append(int(b))
            neighbors[int(b)].append(int(a))
        return [np.asarray(sorted(nb), dtype=int) for nb in neighbors]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array)
    array.setflags(write=False)
    return array


def _validate_domain(domain: DomainSpec, resolution: tuple[int, ...]) -> float:
    """Check domain and resolution, return the uniform spacing h."""
    n = domain.dimension
    if n not in (1, 2):
        raise ConstructionError(f"dimension must be 1 or 2, got {n}")
    if len(domain.upper) != n or len(resolution) != n:
        raise ConstructionError("domain bounds and resolution must match the dimension")
    if any(r < 2 for r in resolution):
        raise ConstructionError(f"resolution must be at least 2 per axis, got {resolution}")
    widths = [hi - lo for lo, hi in zip(domain.lower, domain.upper)]
    if any(w <= 0 for w in widths):
        raise ConstructionError(f"empty bounding box {domain.lower} .. {domain.upper}")

    spacings = [w / r for w, r in zip(widths, resolution)]
    h = spacings[0]
    if any(abs(sp - h) > ALIGN_TOL * h for sp in spacings):
        raise ConstructionError(f"cells must be square; axis spacings are {spacings}")

    for lo, hi in domain.holes:
        if len(lo) != n or len(hi) != n:
            raise ConstructionError(f"hole {lo}..{hi} has the wrong dimension")
        for axis in range(n):
            if hi[axis] <= lo[axis]:
                raise ConstructionError(f"hole {lo}..{hi} is empty along axis {axis}")
            for coord in (lo[axis], hi[axis]):
                steps = (coord - domain.lower[axis]) / h
                if abs(steps - round(steps)) > ALIGN_TOL * max(1.0, abs(steps)):
                    raise ConstructionError(
                        f"hole edge {coord} on axis {axis} is not aligned with the grid spacing {h}"
                    )
                if coord < domain.lower[axis] - ALIGN_TOL or coord > domain.upper[axis] + ALIGN_TOL:
                    raise ConstructionError(f"hole {lo}..{hi} leaves the bounding box")
    return h


def build_grid(domain: DomainSpec, resolution: int | Sequence[int]) -> Grid:
    """Discretize a domain into a uniform cell-centered grid.

    Args:
        domain: Domain specification
        resolution: Cells per axis of the bounding box (an int applies to all axes)

    Returns:
        Grid with lexicographically ordered cells and boundary nodes

    Raises:
        ConstructionError: Invalid resolution, misaligned holes, or an empty domain
    """
    n = domain.dimension
    res = (int(resolution),) * n if isinstance(resolution, (int, np.integer)) else tuple(
        int(r) for r in resolution
    )
    h = _validate_domain(domain, res)
    lower = np.asarray(domain.lower)

    # Present cells: centers outside every closed hole
    lookup = -np.ones(res, dtype=int)
    centers: list[np.ndarray] = []
    box_index: list[tuple[int, ...]] = []
    for idx in product(*(range(r) for r in res)):
        center = lower + (np.asarray(idx) + 0.5) * h
        if domain.contains(center[None, :], closed=False)[0]:
            lookup[idx] = len(centers)
            centers.append(center)
            box_index.append(idx)

    if not centers:
        raise ConstructionError("domain is empty after subtracting holes")

    # Faces: interior faces become edges, boundary faces become nodes
    edges: list[tuple[int, int]] = []
    nodes: list[np.ndarray] = []
    node_cell: list[int] = []
    for cell, idx in enumerate(box_index):
        for axis in range(n):
            for direction in (-1, 1):
                nb = list(idx)
                nb[axis] += direction
                in_box = 0 <= nb[axis] < res[axis]
                nb_cell = int(lookup[tuple(nb)]) if in_box else -1
                if nb_cell >= 0:
                    if cell < nb_cell:
                        edges.append((cell, nb_cell))
                else:
                    offset = np.zeros(n)
                    offset[axis] = 0.5 * h * direction
                    nodes.append(centers[cell] + offset)
                    node_cell.append(cell)

    node_arr = np.asarray(nodes, dtype=float).reshape(-1, n)
    node_cell_arr = np.asarray(node_cell, dtype=int)
    # Boundary nodes sorted lexicographically by axis
    order = np.lexsort(tuple(node_arr[:, axis] for axis in reversed(range(n))))
    node_arr = node_arr[order]
    node_cell_arr = node_cell_arr[order]

    grid = Grid(
        domain=domain,
        resolution=res,
        h=h,
        centers=np.asarray(centers, dtype=float).reshape(-1, n),
        box_index=np.asarray(box_index, dtype=int).reshape(-1, n),
        boundary_nodes=node_arr,
        node_cell=node_cell_arr,
        cell_edges=np.asarray(edges, dtype=int).reshape(-1, 2),
    )
    logger.debug(f"Built {grid}")
    return grid


@dataclass(frozen=True, eq=False)
class SetMask:
    """Subset of the closed domain: flagged cells and flagged boundary nodes."""

    grid: Grid
    cells: np.ndarray = field(repr=False)
    boundary: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=bool)
        boundary = np.asarray(self.boundary, dtype=bool)
        if cells.shape != (self.grid.n_cells,):
            raise ConstructionError(
                f"cell flags have shape {cells.shape}, expected ({self.grid.n_cells},)"
            )
        if boundary.shape != (self.grid.n_boundary,):
            raise ConstructionError(
                f"boundary flags have shape {boundary.shape}, expected ({self.grid.n_boundary},)"
            )
        object.__setattr__(self, "cells", _frozen(cells))
        object.__setattr__(self, "boundary", _frozen(boundary))

    @classmethod
    def from_indices(
        cls, grid: Grid, cells: Iterable[int] = (), boundary: Iterable[int] = ()
    ) -> SetMask:
        """Build a mask from index lists.

        Raises:
            ConstructionError: If an index is out of range
        """
        cell_flags = np.zeros(grid.n_cells, dtype=bool)
        node_flags = np.zeros(grid.n_boundary, dtype=bool)
        for i in cells:
            if not 0 <= int(i) < grid.n_cells:
                raise ConstructionError(f"cell index {i} out of range [0, {grid.n_cells})")
            cell_flags[int(i)] = True
        for j in boundary:
            if not 0 <= int(j) < grid.n_boundary:
                raise ConstructionError(f"boundary index {j} out of range [0, {grid.n_boundary})")
            node_flags[int(j)] = True
        return cls(grid, cell_flags, node_flags)

    @classmethod
    def empty(cls, grid: Grid) -> SetMask:
        return cls(grid, np.zeros(grid.n_cells, dtype=bool), np.zeros(grid.n_boundary, dtype=bool))

    @classmethod
    def full(cls, grid: Grid) -> SetMask:
        """The closure: every cell and every boundary node."""
        return cls(grid, np.ones(grid.n_cells, dtype=bool), np.ones(grid.n_boundary, dtype=bool))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetMask):
            return NotImplemented
        return (
            self.grid is other.grid
            and bool(np.array_equal(self.cells, other.cells))
            and bool(np.array_equal(self.boundary, other.boundary))
        )

    __hash__ = None  # type: ignore[assignment]

    def _check(self, other: SetMask, operation: str) -> None:
        if self.grid is not other.grid:
            raise GridMismatchError(operation)

    def union(self, other: SetMask) -> SetMask:
        self._check(other, "union")
        return SetMask(self.grid, self.cells | other.cells, self.boundary | other.boundary)

    def intersection(self, other: SetMask) -> SetMask:
        self._check(other, "intersection")
        return SetMask(self.grid, self.cells & other.cells, self.boundary & other.boundary)

    def difference(self, other: SetMask) -> SetMask:
        self._check(other, "difference")
        return SetMask(self.grid, self.cells & ~other.cells, self.boundary & ~other.boundary)

    def issubset(self, other: SetMask) -> bool:
        self._check(other, "issubset")
        return bool(np.all(other.cells[self.cells]) and np.all(other.boundary[self.boundary]))

    def is_empty(self) -> bool:
        return not (self.cells.any() or self.boundary.any())

    def cell_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.cells)]

    def boundary_indices(self) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.boundary)]

    def size(self) -> int:
        """Number of flagged cells and nodes."""
        return int(self.cells.sum() + self.boundary.sum())

    def to_dict(self) -> dict[str, list[int]]:
        """Serialize as sorted index lists."""
        return {"cells": self.cell_indices(), "boundary": self.boundary_indices()}


def boundary_mask(grid: Grid) -> SetMask:
    """Mask selecting every boundary node and no cells."""
    return SetMask(grid, np.zeros(grid.n_cells, dtype=bool), np.ones(grid.n_boundary, dtype=bool))


def open_neighborhood(grid: Grid, mask: SetMask) -> SetMask:
    """One-ring relatively open hull of a mask.

    Adds every cell adjacent to a flagged cell or a flagged boundary node, and every
    boundary node adjacent to a flagged cell.

    Raises:
        GridMismatchError: If the mask belongs to another grid
    """
    if mask.grid is not grid:
        raise GridMismatchError("open_neighborhood")
    cells = mask.cells.copy()
    boundary = mask.boundary.copy()

    if len(grid.cell_edges):
        a, b = grid.cell_edges[:, 0], grid.cell_edges[:, 1]
        cells[b[mask.cells[a]]] = True
        cells[a[mask.cells[b]]] = True
    if grid.n_boundary:
        cells[grid.node_cell[mask.boundary]] = True
        boundary |= mask.cells[grid.node_cell]
    return SetMask(grid, cells, boundary)


def measure(grid: Grid, mask: SetMask) -> float:
    """Lebesgue measure of a mask: flagged cells times h^n (boundary nodes weigh zero)."""
    if mask.grid is not grid:
        raise GridMismatchError("measure")
    return int(mask.cells.sum()) * grid.cell_measure


def remove_cells(grid: Grid, mask: SetMask) -> Grid:
    """Rebuild the grid on Omega minus the closed cells flagged in the mask.

    Raises:
        UsageError: If the mask flags boundary nodes
        ConstructionError: If nothing remains
    """
    if mask.grid is not grid:
        raise GridMismatchError("remove_cells")
    if mask.boundary.any():
        raise UsageError("only cells can be removed from a grid")
    if not mask.cells.any():
        return grid
    half = 0.5 * grid.h
    holes = list(grid.domain.holes)
    for center in grid.centers[mask.cells]:
        holes.append((tuple(float(c - half) for c in center), tuple(float(c + half) for c in center)))
    domain = DomainSpec(lower=grid.domain.lower, upper=grid.domain.upper, holes=tuple(holes))
    return build_grid(domain, grid.resolution)


def _point_keys(points: np.ndarray) -> list[tuple[float, ...]]:
    return [tuple(float(c) for c in row) for row in np.round(points, MATCH_DECIMALS)]


def transfer_mask(mask: SetMask, target: Grid) -> SetMask:
    """Map a mask onto another grid with the same spacing by coordinates.

    Cells match by center and boundary nodes by position; entries without a
    counterpart on the target grid are dropped.
    """
    if abs(mask.grid.h - target.h) > ALIGN_TOL * target.h:
        raise UsageError(f"grid spacings differ ({mask.grid.h} vs {target.h})")
    cell_lookup = {key: i for i, key in enumerate(_point_keys(target.centers))}
    node_lookup = {key: j for j, key in enumerate(_point_keys(target.boundary_nodes))}

    cells = np.zeros(target.n_cells, dtype=bool)
    for key in _point_keys(mask.grid.centers[mask.cells]):
        if key in cell_lookup:
            cells[cell_lookup[key]] = True
    boundary = np.zeros(target.n_boundary, dtype=bool)
    for key in _point_keys(mask.grid.boundary_nodes[mask.boundary]):
        if key in node_lookup:
            boundary[node_lookup[key]] = True
    return SetMask(target, cells, boundary)
