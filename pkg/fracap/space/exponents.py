"""Variable Exponents.

ExponentField holds q(x) on the closed domain and p(x, y) on pairs of points. Each
exponent is a constant, a closed-form expression (see `expression`) or a table
over the cells of a reference grid. Tables are looked up by the closed cell that
contains the point.

p is always symmetric: expressions are evaluated as (e(x, y) + e(y, x)) / 2, and
tables are completed from their transpose with conflicts rejected.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Any, NamedTuple, Union

import numpy as np

from ..config import get_settings
from ..exceptions import ConstructionError, DomainError, InvalidExponentError, ParameterError
from .expression import Expression, parse_expression
from .grid import DomainSpec, Grid

logger = logging.getLogger(__name__)

QSpec = Union[float, str, Sequence[float]]
PSpec = Union[float, str, Sequence[Sequence[Union[float, None]]]]

# Two-point lattice per axis used for p bounds on rectangles at construction
PAIR_SAMPLES_2D = 17
# Pairs evaluated per chunk
CHUNK_PAIRS = 1 << 20
# Tolerance for conflicting transposed table entries
SYMMETRY_TOL = 1e-12


class ExponentBounds(NamedTuple):
    q_minus: float
    q_plus: float
    p_minus: float
    p_plus: float


class _Exponent:
    """One exponent: constant, expression or table."""

    def __init__(self, name: str, kind: str, constant: float | None = None,
                 expression: Expression | None = None, table: np.ndarray | None = None):
        self.name = name
        self.kind = kind
        self.constant = constant
        self.expression = expression
        self.table = table

    def spec(self) -> Any:
        if self.kind == "constant":
            return self.constant
        if self.kind == "expression":
            return self.expression.text  # type: ignore[union-attr]
        return self.table.tolist()  # type: ignore[union-attr]


def _build_q(spec: QSpec, grid: Grid) -> _Exponent:
    if isinstance(spec, bool):
        raise ConstructionError("q must be a number, an expression or a table")
    if isinstance(spec, (int, float, np.floating, np.integer)):
        return _Exponent("q", "constant", constant=float(spec))
    if isinstance(spec, str):
        expression = parse_expression(spec)
        expression.check(grid.dimension, two_point=False)
        return _Exponent("q", "expression", expression=expression)
    table = np.array(spec, dtype=float)
    if table.shape != (grid.n_cells,):
        raise ConstructionError(f"q table has shape {table.shape}, expected ({grid.n_cells},)")
    return _Exponent("q", "table", table=table)


def _symmetrize_table(raw: Any, n_cells: int) -> np.ndarray:
    """Complete a p table from its transpose; None/NaN entries are missing."""
    try:
        given = np.array(
            [[np.nan if v is None else float(v) for v in row] for row in raw], dtype=float
        )
    except (TypeError, ValueError) as e:
        raise ConstructionError(f"p table is not a numeric matrix: {e}") from e
    if given.shape != (n_cells, n_cells):
        raise ConstructionError(f"p table has shape {given.shape}, expected ({n_cells}, {n_cells})")

    transposed = given.T
    both = ~np.isnan(given) & ~np.isnan(transposed)
    conflict = both & (np.abs(given - transposed) > SYMMETRY_TOL)
    if conflict.any():
        i, j = (int(k) for k in np.argwhere(conflict)[0])
        raise ConstructionError(
            f"p table is not symmetric: p[{i}][{j}]={given[i, j]} but p[{j}][{i}]={given[j, i]}"
        )
    table = np.where(np.isnan(given), transposed, given)
    if np.isnan(table).any():
        i, j = (int(k) for k in np.argwhere(np.isnan(table))[0])
        raise ConstructionError(f"p table entry ({i}, {j}) is missing in both orders")
    # Upper triangle wins so that table == table.T exactly
    upper = np.triu(table)
    return upper + np.triu(table, 1).T


def _build_p(spec: PSpec, grid: Grid) -> _Exponent:
    if isinstance(spec, bool):
        raise ConstructionError("p must be a number, an expression or a table")
    if isinstance(spec, (int, float, np.floating, np.integer)):
        return _Exponent("p", "constant", constant=float(spec))
    if isinstance(spec, str):
        expression = parse_expression(spec)
        expression.check(grid.dimension, two_point=True)
        return _Exponent("p", "expression", expression=expression)
    return _Exponent("p", "table", table=_symmetrize_table(spec, grid.n_cells))


def _lattice(domain: DomainSpec, samples: int) -> np.ndarray:
    """Uniform lattice with `samples` points per axis, restricted to the closed domain."""
    axes = []
    for lo, hi in zip(domain.lower, domain.upper):
        if samples == 1:
            axes.append(np.array([0.5 * (lo + hi)]))
        else:
            axes.append(np.linspace(lo, hi, samples))
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    return points[domain.contains(points, closed=True)]


def _check_range(name: str, values: np.ndarray) -> tuple[float, float]:
    if values.size == 0:
        raise ConstructionError(f"no sample points available to bound {name}")
    if not np.all(np.isfinite(values)):
        raise InvalidExponentError(name, float(values[~np.isfinite(values)][0]), "exponent must be finite")
    low = float(values.min())
    if low <= 1.0:
        raise InvalidExponentError(name, low)
    return low, float(values.max())


class ExponentField:
    """Variable exponents q(x) and p(x, y) with their essential bounds.

    Args:
        grid: Reference grid; fixes the domain and the cell order of tables
        q: Constant, expression text, or one value per cell
        p: Constant, expression text, or a cells x cells matrix (None marks an
            entry taken from the transpose)

    Raises:
        ConstructionError: Malformed table or conflicting symmetric entries
        ExpressionError: Malformed expression
        InvalidExponentError: A value <= 1 on the sampled points
    """

    def __init__(self, grid: Grid, q: QSpec, p: PSpec) -> None:
        self.grid = grid
        self.domain = grid.domain
        self._q = _build_q(q, grid)
        self._p = _build_p(p, grid)

        settings = get_settings()
        samples = settings.bound_samples
        pair_samples = samples if grid.dimension == 1 else min(samples, PAIR_SAMPLES_2D)
        nodes = np.concatenate([grid.centers, grid.boundary_nodes])

        q_points = np.concatenate([_lattice(self.domain, samples), nodes])
        self.q_minus, self.q_plus = _check_range("q", self._q_values(q_points))
        p_points = np.concatenate([_lattice(self.domain, pair_samples), nodes])
        self.p_minus, self.p_plus = _check_range("p", _pair_extrema(self, p_points))
        logger.debug(
            f"Exponent bounds q in [{self.q_minus}, {self.q_plus}], p in [{self.p_minus}, {self.p_plus}]"
        )

    def __repr__(self) -> str:
        return f"ExponentField(q={self._q.kind}, p={self._p.kind}, grid={self.grid!r})"

    @property
    def q_spec(self) -> Any:
        return self._q.spec()

    @property
    def p_spec(self) -> Any:
        return self._p.spec()

    @property
    def bounds(self) -> ExponentBounds:
        return ExponentBounds(self.q_minus, self.q_plus, self.p_minus, self.p_plus)

    def _check_points(self, points: np.ndarray) -> None:
        inside = self.domain.contains(points, closed=True)
        if not np.all(inside):
            bad = points[np.argmin(inside)]
            raise DomainError(tuple(float(c) for c in bad))

    def _as_points(self, points: Any) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if self.grid.dimension == 1 and pts.ndim <= 1:
            return pts.reshape(-1, 1)
        return np.atleast_2d(pts)

    def _q_values(self, points: np.ndarray) -> np.ndarray:
        if self._q.kind == "constant":
            return np.full(points.shape[0], self._q.constant)
        if self._q.kind == "expression":
            return self._q.expression.evaluate(points)  # type: ignore[union-attr]
        return self._q.table[self.grid.locate(points)]  # type: ignore[index]

    def _p_values(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        if self._p.kind == "constant":
            return np.full(xs.shape[0], self._p.constant)
        if self._p.kind == "expression":
            expr = self._p.expression
            return 0.5 * (expr.evaluate(xs, ys) + expr.evaluate(ys, xs))  # type: ignore[union-attr]
        return self._p.table[self.grid.locate(xs), self.grid.locate(ys)]  # type: ignore[index]

    def q_at(self, points: Any) -> np.ndarray:
        """Vectorized q at points of the closed domain.

        Raises:
            DomainError: If any point lies outside the closed domain
        """
        pts = self._as_points(points)
        self._check_points(pts)
        return self._q_values(pts)

    def p_at(self, xs: Any, ys: Any) -> np.ndarray:
        """Vectorized p at matching rows of xs and ys."""
        x_pts = self._as_points(xs)
        y_pts = self._as_points(ys)
        if x_pts.shape != y_pts.shape:
            raise ParameterError("ys", y_pts.shape, f"must match xs shape {x_pts.shape}")
        self._check_points(x_pts)
        self._check_points(y_pts)
        return self._p_values(x_pts, y_pts)

    def p_matrix(self, points: np.ndarray) -> np.ndarray:
        """p over all ordered pairs of points, shape (m, m)."""
        pts = self._as_points(points)
        self._check_points(pts)
        m = pts.shape[0]
        if self._p.kind == "constant":
            return np.full((m, m), self._p.constant)
        if self._p.kind == "table":
            idx = self.grid.locate(pts)
            return self._p.table[np.ix_(idx, idx)]  # type: ignore[index]
        rows = []
        for start, stop in _chunks(m, m):
            xs = np.repeat(pts[start:stop], m, axis=0)
            ys = np.tile(pts, (stop - start, 1))
            rows.append(self._p_values(xs, ys).reshape(stop - start, m))
        return np.concatenate(rows, axis=0)


def _chunks(rows: int, width: int) -> list[tuple[int, int]]:
    step = max(1, CHUNK_PAIRS // max(1, width))
    return [(start, min(rows, start + step)) for start in range(0, rows, step)]


def _pair_extrema(field: ExponentField, points: np.ndarray) -> np.ndarray:
    """min and max of p over all pairs of points."""
    if field._p.kind == "constant":
        return np.array([field._p.constant])
    if field._p.kind == "table":
        idx = np.unique(field.grid.locate(points))
        values = field._p.table[np.ix_(idx, idx)]  # type: ignore[index]
        return np.array([values.min(), values.max()])
    m = points.shape[0]
    low, high = np.inf, -np.inf
    for start, stop in _chunks(m, m):
        xs = np.repeat(points[start:stop], m, axis=0)
        ys = np.tile(points, (stop - start, 1))
        values = field._p_values(xs, ys)
        if not np.all(np.isfinite(values)):
            return values
        low = min(low, float(values.min()))
        high = max(high, float(values.max()))
    return np.array([low, high])


def eval_q(field: ExponentField, x: Any) -> float:
    """q(x) at a single point of the closed domain."""
    point = np.asarray(x, dtype=float).reshape(1, field.grid.dimension)
    return float(field.q_at(point)[0])


def eval_p(field: ExponentField, x: Any, y: Any) -> float:
    """p(x, y) at a single pair; symmetric in its arguments."""
    n = field.grid.dimension
    xs = np.asarray(x, dtype=float).reshape(1, n)
    ys = np.asarray(y, dtype=float).reshape(1, n)
    return float(field.p_at(xs, ys)[0])


def exponent_bounds(field: ExponentField, samples: int | None = None) -> ExponentBounds:
    """Essential bounds of q and p.

    Constant and tabulated exponents give exact bounds. Expressions are bounded
    by their extrema over a uniform lattice with `samples` points per axis (pairs
    of lattice points for p).

    Raises:
        ParameterError: If samples < 1
        InvalidExponentError: If a sampled value is <= 1
    """
    samples = get_settings().bound_samples if samples is None else samples
    if samples < 1:
        raise ParameterError("samples", samples, "must be at least 1")

    lattice = _lattice(field.domain, samples)
    if field._q.kind == "table":
        q_values = field._q.table  # type: ignore[assignment]
    else:
        q_values = field._q_values(lattice)
    q_minus, q_plus = _check_range("q", np.asarray(q_values))

    if field._p.kind == "table":
        p_values = field._p.table  # type: ignore[assignment]
    else:
        p_values = _pair_extrema(field, lattice)
    p_minus, p_plus = _check_range("p", np.asarray(p_values))
    return ExponentBounds(q_minus, q_plus, p_minus, p_plus)
