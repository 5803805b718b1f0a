"""Tests for fracap.analysis.norms"""

import math

import numpy as np
import pytest

from fracap.analysis.modular import modular_operator
from fracap.analysis.norms import (
    bisect_norm,
    gagliardo_seminorm,
    luxembourg_norm,
    modular_norm,
    sobolev_norm,
)
from fracap.exceptions import EvaluationError
from fracap.space.exponents import ExponentField
from fracap.space.functions import GridFunction, scale_and_combine
from fracap.space.grid import DomainSpec, build_grid


@pytest.fixture
def grid():
    return build_grid(DomainSpec.interval(0.0, 1.0), 8)


def _random(grid, rng):
    return GridFunction(grid, rng.standard_normal(grid.n_cells), np.zeros(grid.n_boundary))


class TestBisectNorm:
    """Tests for the bisection driver."""

    def test_quadratic(self):
        """Test rho(v) = sum v^2 gives the Euclidean norm."""
        values = np.array([3.0, 4.0])
        report = bisect_norm(lambda v: float(np.sum(v**2)), values, "test")
        assert report.value == pytest.approx(5.0, rel=1e-10)
        assert report.lo <= report.value <= report.hi
        assert len(report.history) == report.iterations

    def test_zero_modular(self):
        """Test a vanishing modular returns exactly 0."""
        report = bisect_norm(lambda v: 0.0, np.ones(3), "test")
        assert report.value == 0.0
        assert report.iterations == 0

    def test_infinite_modular(self):
        """Test a non-finite modular at u is rejected."""
        with pytest.raises(EvaluationError):
            bisect_norm(lambda v: math.inf, np.ones(3), "test")

    def test_width(self):
        """Test a coarse width stops early."""
        values = np.array([1.0])
        coarse = bisect_norm(lambda v: float(np.sum(v**2)), values, "test", relative_width=1e-3)
        fine = bisect_norm(lambda v: float(np.sum(v**2)), values, "test")
        assert coarse.iterations < fine.iterations
        assert coarse.hi - coarse.lo <= 1e-3 * coarse.hi


class TestLuxembourgNorm:
    """Tests for luxembourg_norm."""

    @pytest.mark.parametrize("c", [-2.5, 0.1, 1.0, 7.0])
    def test_constant_q2(self, grid, c):
        """Test u = c, q = 2 on (0, 1) gives |c|."""
        field = ExponentField(grid, q=2.0, p=2.0)
        report = luxembourg_norm(GridFunction.constant(grid, c), field)
        assert report.value == pytest.approx(abs(c), rel=1e-9)

    def test_constant_closed_form(self):
        """Test ||c|| = |c| |Omega|^(1/q0) on a domain of measure 0.75."""
        domain = DomainSpec.rectangle((0.0, 1.0), (0.0, 1.0), holes=[((0.25, 0.25), (0.75, 0.75))])
        grid = build_grid(domain, 8)
        field = ExponentField(grid, q=3.0, p=2.0)
        report = luxembourg_norm(GridFunction.constant(grid, 2.0), field)
        assert report.value == pytest.approx(2.0 * 0.75 ** (1 / 3), abs=1e-9)

    def test_variable_exponent_one(self, grid):
        """Test u = 1 with q(x) = 2 + x has norm exactly 1."""
        field = ExponentField(grid, q="2 + x", p=2.0)
        report = luxembourg_norm(GridFunction.constant(grid, 1.0), field)
        assert report.value == pytest.approx(1.0, abs=1e-10)
        assert report.residual <= 1e-8

    def test_zero(self, grid):
        """Test the zero function has norm 0."""
        field = ExponentField(grid, q="2 + x", p=2.0)
        assert luxembourg_norm(GridFunction.zeros(grid), field).value == 0.0


class TestGagliardoSeminorm:
    """Tests for gagliardo_seminorm."""

    def test_constant(self, grid):
        """Test constants have seminorm 0."""
        field = ExponentField(grid, q=2.0, p="2 + |x-y|")
        assert gagliardo_seminorm(GridFunction.constant(grid, 3.0), field, 0.5).value == 0.0

    def test_linear_closed_form(self):
        """Test u(x) = x, p = 2, s = 1/2, N = 64 gives sqrt(1 - 1/N)."""
        grid = build_grid(DomainSpec.interval(0.0, 1.0), 64)
        field = ExponentField(grid, q=2.0, p=2.0)
        u = GridFunction.from_expression(grid, "x")
        report = gagliardo_seminorm(u, field, 0.5)
        assert report.value == pytest.approx(math.sqrt(1 - 1 / 64), abs=1e-9)

    def test_homogeneity(self, grid):
        """Test seminorm(3u) = 3 seminorm(u) for a variable p."""
        field = ExponentField(grid, q=2.0, p="2 + |x-y|")
        rng = np.random.default_rng(0)
        for _ in range(20):
            u = _random(grid, rng)
            triple = scale_and_combine(3.0, u, 0.0, u)
            assert gagliardo_seminorm(triple, field, 0.5).value == pytest.approx(
                3 * gagliardo_seminorm(u, field, 0.5).value, rel=1e-9
            )


class TestSobolevAndModularNorm:
    """Tests for sobolev_norm and modular_norm."""

    def test_zero(self, grid):
        """Test both norms vanish at u = 0."""
        field = ExponentField(grid, q=2.0, p=2.0)
        assert sobolev_norm(GridFunction.zeros(grid), field, 0.5) == 0.0
        assert modular_norm(GridFunction.zeros(grid), field, 0.5).value == 0.0

    def test_one(self, grid):
        """Test u = 1, q = 2 gives 1 for any p and s."""
        field = ExponentField(grid, q=2.0, p="2 + |x-y|")
        one = GridFunction.constant(grid, 1.0)
        assert sobolev_norm(one, field, 0.3) == pytest.approx(1.0, rel=1e-9)
        assert modular_norm(one, field, 0.3).value == pytest.approx(1.0, rel=1e-9)

    def test_triangle_inequality(self, grid):
        """Test ||u + v|| <= ||u|| + ||v|| on random pairs."""
        field = ExponentField(grid, q="2 + x", p="2 + |x-y|")
        rng = np.random.default_rng(1)
        for _ in range(1000):
            u, v = _random(grid, rng), _random(grid, rng)
            left = sobolev_norm(scale_and_combine(1.0, u, 1.0, v), field, 0.5)
            right = sobolev_norm(u, field, 0.5) + sobolev_norm(v, field, 0.5)
            assert left <= right + 1e-9 * max(1.0, right)

    def test_equivalence(self, grid):
        """Test modular_norm <= sobolev_norm <= 2 modular_norm."""
        field = ExponentField(grid, q="2 + x", p="2 + |x-y|")
        rng = np.random.default_rng(2)
        for _ in range(200):
            u = _random(grid, rng)
            rho = modular_norm(u, field, 0.5).value
            total = sobolev_norm(u, field, 0.5)
            slack = 1e-9 * max(1.0, total)
            assert rho <= total + slack
            assert total <= 2 * rho + slack

    def test_unit_ball(self, grid):
        """Test rho(u / ||u||) = 1, with rho(u) <= ||u|| inside the ball and >= outside."""
        field = ExponentField(grid, q="2 + x", p="2 + |x-y|")
        operator = modular_operator(grid, field, 0.5)
        rng = np.random.default_rng(3)
        inside = outside = 0
        for _ in range(1000):
            values = rng.standard_normal(grid.n_cells) * 10.0 ** rng.uniform(-2.0, 2.0)
            u = GridFunction(grid, values, np.zeros(grid.n_boundary))
            norm = modular_norm(u, field, 0.5).value
            rho = operator.total(values)
            assert abs(operator.total(values / norm) - 1.0) <= 1e-8
            if norm <= 1.0:
                inside += 1
                assert rho <= norm + 1e-9
            else:
                outside += 1
                assert rho >= norm * (1.0 - 1e-9)
        assert inside > 0 and outside > 0
