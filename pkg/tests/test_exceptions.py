"""Tests for fracap.exceptions"""

from pathlib import Path

import pytest

from fracap.exceptions import (
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


class TestFracapError:
    """Tests for base FracapError."""

    def test_base_exception(self):
        """Test base exception can be raised."""
        with pytest.raises(FracapError):
            raise FracapError("Base error")

    def test_inheritance(self):
        """Test all exceptions inherit from FracapError."""
        for cls in (
            AdmissibilityError,
            CertificateInapplicableError,
            ConstructionError,
            ConvergenceError,
            DomainError,
            EvaluationError,
            ExpressionError,
            GridMismatchError,
            InvalidExponentError,
            ParameterError,
            ReportWriteError,
            UsageError,
            ValidationError,
        ):
            assert issubclass(cls, FracapError)


class TestStructuredErrors:
    """Tests for attributes and messages."""

    def test_invalid_exponent(self):
        """Test InvalidExponentError stores name and value."""
        error = InvalidExponentError("q", 0.5)
        assert error.name == "q"
        assert error.value == 0.5
        assert "q=0.5" in str(error)

    def test_expression_error(self):
        """Test ExpressionError names the expression."""
        error = ExpressionError("2 + ", "unexpected end")
        assert error.expression == "2 + "
        assert "'2 + '" in str(error)
        assert "unexpected end" in str(error)

    def test_parameter_error(self):
        """Test ParameterError formats name and value."""
        error = ParameterError("s", 1.0, "must lie in (0, 1)")
        assert error.name == "s"
        assert "s=1.0" in str(error)

    def test_convergence_error_carries_best(self):
        """Test ConvergenceError keeps the best iterate."""
        best = object()
        error = ConvergenceError(iterations=10, residual=1.5e-3, best=best)
        assert error.iterations == 10
        assert error.best is best
        assert "10 iterations" in str(error)

    def test_certificate_inapplicable(self):
        """Test CertificateInapplicableError reports the index."""
        error = CertificateInapplicableError(index=2, gap=0.5, limit=8.0**-2)
        assert error.index == 2
        assert error.limit == pytest.approx(1 / 64)
        assert "index 2" in str(error)

    def test_validation_error_lists_all(self):
        """Test ValidationError joins every message."""
        error = ValidationError(["s: too large", "q: must exceed 1"])
        assert error.errors == ["s: too large", "q: must exceed 1"]
        assert "s: too large; q: must exceed 1" in str(error)

    def test_report_write_error_path(self):
        """Test ReportWriteError converts the path."""
        error = ReportWriteError("out/report.json", "permission denied")
        assert error.path == Path("out/report.json")
        assert "permission denied" in str(error)

    def test_grid_mismatch(self):
        """Test GridMismatchError names the operation."""
        error = GridMismatchError("pointwise_max")
        assert "pointwise_max" in str(error)
