"""Tests for fracap.space.regularity"""

import numpy as np
import pytest

from fracap.exceptions import ParameterError
from fracap.space.exponents import ExponentField
from fracap.space.grid import DomainSpec, build_grid
from fracap.space.regularity import check_bb_condition, check_log_holder


@pytest.fixture
def grid():
    return build_grid(DomainSpec.interval(0.0, 1.0), 8)


def _dense_modulus(values, points):
    """Independent sup of |v_i - v_j| * (-log d_ij) over 0 < d <= 1/2."""
    best = 0.0
    for i in range(len(values)):
        for j in range(len(values)):
            d = float(np.sum(np.abs(points[i] - points[j])))
            if 0 < d <= 0.5:
                best = max(best, abs(values[i] - values[j]) * -np.log(d))
    return best


class TestLogHolder:
    """Tests for check_log_holder."""

    def test_constant(self, grid):
        """Test a constant q has modulus 0."""
        estimate = check_log_holder(ExponentField(grid, q=2.0, p=2.0), samples=17)
        assert estimate.modulus == 0.0
        assert estimate.witness is None
        assert not estimate.diverging

    def test_linear_matches_oracle(self, grid):
        """Test q(x) = 2 + x against a direct recomputation."""
        samples = 33
        estimate = check_log_holder(ExponentField(grid, q="2 + x", p=2.0), samples=samples)
        points = np.linspace(0.0, 1.0, samples).reshape(-1, 1)
        oracle = _dense_modulus(2.0 + points[:, 0], points)
        assert estimate.modulus == pytest.approx(oracle, abs=1e-6)
        assert estimate.modulus <= 1 / np.e + 1e-12
        assert [p.resolution for p in estimate.refinement] == [8, 16, 33]

    def test_jump_diverges(self, grid):
        """Test a jump at 1/2 is flagged as diverging."""
        field = ExponentField(grid, q=[2.0] * 4 + [3.0] * 4, p=2.0)
        estimate = check_log_holder(field, samples=64)
        values = [p.value for p in estimate.refinement]
        assert values == sorted(values)
        assert estimate.diverging

    def test_invalid_samples(self, grid):
        """Test samples below 2 are rejected."""
        with pytest.raises(ParameterError):
            check_log_holder(ExponentField(grid, q=2.0, p=2.0), samples=1)


class TestBBCondition:
    """Tests for check_bb_condition."""

    def test_constant(self, grid):
        """Test a constant p has modulus 0."""
        estimate = check_bb_condition(ExponentField(grid, q=2.0, p=3.0), samples=9)
        assert estimate.modulus == 0.0

    def test_distance_matches_oracle(self, grid):
        """Test p = 2 + |x-y| against a direct recomputation."""
        samples = 9
        estimate = check_bb_condition(ExponentField(grid, q=2.0, p="2 + |x-y|"), samples=samples)
        axis = np.linspace(0.0, 1.0, samples)
        xs, ys = np.meshgrid(axis, axis, indexing="ij")
        pairs = np.stack([xs.ravel(), ys.ravel()], axis=1)
        values = 2.0 + np.abs(pairs[:, 0] - pairs[:, 1])
        assert estimate.modulus == pytest.approx(_dense_modulus(values, pairs), abs=1e-6)
        assert len(estimate.witness) == 4

    def test_jump_diverges(self, grid):
        """Test a jump of p along x = 1/2 is flagged."""
        half = [0.0] * 4 + [1.0] * 4
        table = [[2.0 + 0.5 * (a + b) for b in half] for a in half]
        estimate = check_bb_condition(ExponentField(grid, q=2.0, p=table), samples=32)
        assert estimate.diverging
