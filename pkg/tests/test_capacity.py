"""Tests for fracap.analysis.capacity and fracap.analysis.optimize"""

from itertools import combinations, product

import numpy as np
import pytest

from fracap.analysis.capacity import (
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
from fracap.analysis.modular import sobolev_modular
from fracap.analysis.optimize import projected_gradient
from fracap.exceptions import AdmissibilityError, ConvergenceError, UsageError
from fracap.models import SolverOptions
from fracap.space.exponents import ExponentField
from fracap.space.functions import GridFunction
from fracap.space.grid import DomainSpec, SetMask, build_grid, open_neighborhood, remove_cells


@pytest.fixture
def grid():
    return build_grid(DomainSpec.interval(0.0, 1.0), 16)


@pytest.fixture
def field(grid):
    return ExponentField(grid, q=2.0, p=2.0)


def _random_mask(grid, rng, density=0.3, boundary=False):
    while True:
        cells = rng.random(grid.n_cells) < density
        nodes = rng.random(grid.n_boundary) < density if boundary else np.zeros(grid.n_boundary, bool)
        if cells.any() and not cells.all():
            return SetMask(grid, cells, nodes)


class TestProjectedGradient:
    """Tests for the box-constrained solver."""

    def test_unconstrained_quadratic(self):
        """Test an interior minimizer is found."""
        target = np.array([0.3, 0.6])
        result = projected_gradient(
            lambda x: float(np.sum((x - target) ** 2)),
            lambda x: 2 * (x - target),
            np.zeros(2),
            np.zeros(2),
            np.ones(2),
            SolverOptions(),
        )
        assert result.converged
        assert np.allclose(result.x, target, atol=1e-8)

    def test_active_bound(self):
        """Test a minimizer outside the box lands on the bound."""
        result = projected_gradient(
            lambda x: float(np.sum((x + 1.0) ** 2)),
            lambda x: 2 * (x + 1.0),
            np.full(3, 0.5),
            np.zeros(3),
            np.ones(3),
            SolverOptions(),
        )
        assert result.converged
        assert np.all(result.x == 0.0)

    def test_iteration_cap(self):
        """Test the cap is reported as not converged."""
        matrix = np.diag([1.0, 100.0])
        result = projected_gradient(
            lambda x: float(x @ matrix @ x),
            lambda x: 2 * matrix @ x,
            np.array([5.0, 5.0]),
            np.full(2, -10.0),
            np.full(2, 10.0),
            SolverOptions(max_iterations=1),
        )
        assert not result.converged
        assert result.status == "iterations"


class TestCapacityRelativeOpen:
    """Tests for capacity_relative_open."""

    def test_empty(self, grid, field):
        """Test the empty set has capacity exactly 0."""
        result = capacity_relative_open(SetMask.empty(grid), field, 0.5)
        assert result.value == 0.0
        assert np.all(result.equilibrium.cells == 0.0)

    def test_closure(self, grid, field):
        """Test the closure has capacity |Omega| and equilibrium 1."""
        result = capacity_relative_open(SetMask.full(grid), field, 0.5)
        assert result.value == pytest.approx(1.0, abs=1e-6)
        assert np.all(result.equilibrium.cells == 1.0)

    def test_closure_variable_exponent(self, grid):
        """Test C(closure) = |Omega| for q(x) = 2 + x."""
        field = ExponentField(grid, q="2 + x", p="2 + |x-y|")
        result = capacity_relative_open(SetMask.full(grid), field, 0.5)
        assert result.value == pytest.approx(1.0, abs=1e-6)

    def test_forced_non_convergence(self, grid, field):
        """Test an iteration cap of 1 raises with the best iterate."""
        mask = SetMask.from_indices(grid, cells=[7, 8])
        with pytest.raises(ConvergenceError) as excinfo:
            capacity_relative_open(mask, field, 0.5, SolverOptions(max_iterations=1))
        assert excinfo.value.best is not None
        assert excinfo.value.best.value > 0
        assert not excinfo.value.best.converged

    def test_to_dict(self, grid, field):
        """Test the serialized result."""
        result = capacity_relative_open(SetMask.from_indices(grid, cells=[3]), field, 0.5)
        data = result.to_dict()
        assert data["value"] == result.value
        assert data["admissible_set"] == {"cells": [3], "boundary": []}
        assert len(data["equilibrium"]) == grid.n_cells + grid.n_boundary

    @pytest.mark.slow
    def test_exhaustive_oracle(self):
        """Test all 15 cell subsets of a 4-cell grid against a quantized search."""
        grid = build_grid(DomainSpec.interval(0.0, 1.0), 4)
        field = ExponentField(grid, q=2.0, p=2.0)
        h = grid.h
        offsets = np.abs(np.subtract.outer(np.arange(4), np.arange(4))).astype(float)
        weight = np.zeros((4, 4))
        np.divide(1.0, offsets**2, out=weight, where=offsets > 0)
        levels = np.round(np.arange(21) * 0.05, 10)

        for size in range(1, 5):
            for fixed in combinations(range(4), size):
                free = [i for i in range(4) if i not in fixed]
                candidates = np.ones((21 ** len(free), 4))
                for row, values in enumerate(product(levels, repeat=len(free))):
                    candidates[row, free] = values
                diff = candidates[:, :, None] - candidates[:, None, :]
                brute = (h * np.sum(candidates**2, axis=1) + np.sum(diff**2 * weight, axis=(1, 2))).min()

                result = capacity_relative_open(SetMask.from_indices(grid, cells=fixed), field, 0.5)
                assert result.value <= brute + 1e-9
                assert brute - result.value <= 5e-3


class TestCapacitySet:
    """Tests for capacity_set and the equilibrium potential."""

    def test_empty(self, grid, field):
        """Test the empty set."""
        assert capacity_set(SetMask.empty(grid), field, 0.5).value == 0.0

    def test_boundary_node(self, grid, field):
        """Test a boundary node is measured through node plus adjacent cell."""
        node = SetMask.from_indices(grid, boundary=[0])
        hull = SetMask.from_indices(grid, cells=[0], boundary=[0])
        assert capacity_set(node, field, 0.5).value == pytest.approx(
            capacity_relative_open(hull, field, 0.5).value, rel=1e-12
        )

    def test_monotone_on_nested_pairs(self, grid, field):
        """Test E subset F implies C(E) <= C(F)."""
        rng = np.random.default_rng(0)
        for _ in range(50):
            outer = _random_mask(grid, rng, density=0.5, boundary=True)
            inner = outer.intersection(_random_mask(grid, rng, density=0.5, boundary=True))
            assert capacity_set(inner, field, 0.5).value <= capacity_set(outer, field, 0.5).value + 1e-6

    def test_equilibrium_contract(self, grid, field):
        """Test bounds, admissibility, value and two-start agreement."""
        rng = np.random.default_rng(1)
        for _ in range(20):
            mask = _random_mask(grid, rng, boundary=True)
            result = capacity_relative_open(mask, field, 0.5)
            potential = result.equilibrium
            assert np.all((potential.cells >= 0.0) & (potential.cells <= 1.0))
            assert np.all(potential.cells[mask.cells] == 1.0)
            assert np.all(potential.boundary[mask.boundary] == 1.0)
            modular = sobolev_modular(potential, field, 0.5).total
            assert abs(modular - result.value) <= 1e-8 * max(1.0, result.value)

            other = equilibrium_potential(mask, field, 0.5, initial=GridFunction.constant(grid, 1.0))
            assert other.allclose(potential, atol=1e-5)

    def test_whole_domain_potential(self, grid, field):
        """Test the potential of the closure is identically 1."""
        potential = equilibrium_potential(SetMask.full(grid), field, 0.5)
        assert potential.allclose(GridFunction.constant(grid, 1.0))


class TestCapacityUpperBound:
    """Tests for capacity_upper_bound."""

    def test_constant_one(self, grid, field):
        """Test u = 1 certifies C(O) <= |Omega|."""
        mask = SetMask.from_indices(grid, cells=[2, 5])
        bound = capacity_upper_bound(GridFunction.constant(grid, 1.0), mask, field, 0.5)
        assert bound == pytest.approx(1.0)

    def test_equilibrium_attains(self, grid, field):
        """Test the equilibrium potential gives the capacity itself."""
        mask = SetMask.from_indices(grid, cells=[6, 7])
        result = capacity_relative_open(mask, field, 0.5)
        bound = capacity_upper_bound(result.equilibrium, mask, field, 0.5)
        assert bound == pytest.approx(result.value, rel=1e-12)

    def test_random_admissible(self, grid, field):
        """Test random admissible functions never beat the solver."""
        rng = np.random.default_rng(2)
        mask = SetMask.from_indices(grid, cells=[4, 5, 6])
        value = capacity_relative_open(mask, field, 0.5).value
        for _ in range(100):
            cells = np.where(mask.cells, 1.0, rng.random(grid.n_cells))
            u = GridFunction.from_values(grid, cells)
            assert capacity_upper_bound(u, mask, field, 0.5) >= value - 1e-8

    def test_not_admissible(self, grid, field):
        """Test u < 1 on the set is rejected."""
        mask = SetMask.from_indices(grid, cells=[4])
        with pytest.raises(AdmissibilityError):
            capacity_upper_bound(GridFunction.constant(grid, 0.5), mask, field, 0.5)


class TestCapacityAxioms:
    """Tests for verify_capacity_axioms and the chain checks."""

    def test_empty_and_closure(self, grid, field):
        """Test the trivial family passes with exact endpoints."""
        report = verify_capacity_axioms([SetMask.empty(grid), SetMask.full(grid)], field, 0.5)
        assert report.passed
        assert report.capacities[0] == 0.0
        assert report.capacities[1] == pytest.approx(1.0, abs=1e-6)
        assert report.get("monotonicity").checks == 1

    def test_random_family(self, grid, field):
        """Test a seeded six-set family passes every property."""
        rng = np.random.default_rng(3)
        sets = [_random_mask(grid, rng, boundary=True) for _ in range(6)]
        report = verify_capacity_axioms(sets, field, 0.5)
        assert report.passed
        for check in report.checks:
            assert check.margin >= -1e-6 * max(1.0, max(report.capacities))

    def test_overlapping_pair(self, grid, field):
        """Test strong subadditivity on two overlapping intervals."""
        a = SetMask.from_indices(grid, cells=range(3, 9))
        b = SetMask.from_indices(grid, cells=range(6, 12))
        report = verify_capacity_axioms([a, b], field, 0.5)
        assert report.get("strong_subadditivity").margin >= -1e-6

    def test_too_few_sets(self, grid, field):
        """Test a single set is rejected."""
        with pytest.raises(UsageError):
            verify_capacity_axioms([SetMask.empty(grid)], field, 0.5)

    def test_decreasing_chain(self, grid, field):
        """Test capacities decrease along a shrinking chain."""
        chain = [SetMask.from_indices(grid, cells=range(5 - k, 11 + k)) for k in (3, 2, 1, 0)]
        check = verify_decreasing_chain(chain, field, 0.5)
        assert check.passed

    def test_increasing_chain(self, grid, field):
        """Test the union of a growing chain matches its last term."""
        chain = [SetMask.from_indices(grid, cells=range(7 - k, 9 + k)) for k in range(4)]
        check = verify_increasing_chain(chain, field, 0.5)
        assert check.passed

    def test_not_a_chain(self, grid, field):
        """Test unnested sets are rejected."""
        a = SetMask.from_indices(grid, cells=[1])
        b = SetMask.from_indices(grid, cells=[5])
        with pytest.raises(UsageError, match="chain"):
            verify_decreasing_chain([a, b], field, 0.5)

    def test_countable_subadditivity(self, grid, field):
        """Test C(union) <= sum of capacities over disjoint singletons."""
        sets = [SetMask.from_indices(grid, cells=[i]) for i in (2, 6, 10, 14)]
        assert verify_countable_subadditivity(sets, field, 0.5).passed

    def test_domain_monotonicity(self, grid, field):
        """Test the capacity on a subdomain does not exceed the full one."""
        inner_grid = remove_cells(grid, SetMask.from_indices(grid, cells=[12, 13]))
        mask = SetMask.from_indices(grid, cells=[5, 6])
        check = verify_domain_monotonicity(mask, inner_grid, field, 0.5)
        assert check.passed
        assert check.margin >= -1e-6

    def test_hull_is_measured(self, grid, field):
        """Test capacity_set agrees with the open hull."""
        mask = SetMask.from_indices(grid, cells=[9])
        hull = open_neighborhood(grid, mask)
        assert capacity_set(mask, field, 0.5).value == capacity_relative_open(hull, field, 0.5).value
