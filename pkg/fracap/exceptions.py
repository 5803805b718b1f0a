"""fracap Exceptions

Custom exceptions for the capacity toolkit with structured error information.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any


class FracapError(Exception):
    """Base exception for all fracap errors."""

    pass


class DomainError(FracapError):
    """A point lies outside the closed domain.

    Attributes:
        point: The offending point
        reason: Description of the failure
    """

    def __init__(self, point: Any, reason: str = "point lies outside the closed domain"):
        self.point = point
        self.reason = reason
        super().__init__(f"Domain error at {point}: {reason}")


class InvalidExponentError(FracapError):
    """An exponent value violates 1 < q(x), p(x, y) < infinity.

    Attributes:
        name: Exponent name ("q" or "p")
        value: Offending value
        reason: Description of the violation
    """

    def __init__(self, name: str, value: float, reason: str = "exponent must exceed 1"):
        self.name = name
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid exponent {name}={value}: {reason}")


class ExpressionError(FracapError):
    """A closed-form exponent expression could not be parsed or evaluated.

    Attributes:
        expression: Source text of the expression
        reason: Description of the failure
    """

    def __init__(self, expression: str, reason: str):
        self.expression = expression
        self.reason = reason
        super().__init__(f"Invalid expression '{expression}': {reason}")


class ConstructionError(FracapError):
    """An object (grid, field, mask, function) could not be constructed.

    Attributes:
        reason: Description of the failure
    """

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Construction error: {reason}")


class GridMismatchError(FracapError):
    """Operands of a binary operation live on different grids.

    Attributes:
        operation: The operation that was attempted
    """

    def __init__(self, operation: str):
        self.operation = operation
        super().__init__(f"Grid mismatch in {operation}: operands must share a grid")


class ParameterError(FracapError):
    """A numeric parameter is outside its admissible range.

    Attributes:
        name: Parameter name
        value: Offending value
        reason: Description of the admissible range
    """

    def __init__(self, name: str, value: Any, reason: str):
        self.name = name
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid parameter {name}={value}: {reason}")


class EvaluationError(FracapError):
    """A modular or norm evaluation produced or received non-finite values.

    Attributes:
        operation: The evaluation that failed
        reason: Description of the failure
    """

    def __init__(self, operation: str, reason: str):
        self.operation = operation
        self.reason = reason
        super().__init__(f"Evaluation error in {operation}: {reason}")


class AdmissibilityError(FracapError):
    """A test function is not admissible for the capacity of a set.

    Attributes:
        reason: Description of the violation
    """

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Not admissible: {reason}")


class ConvergenceError(FracapError):
    """The capacity solver hit its iteration cap.

    Attributes:
        iterations: Iterations performed
        residual: Final projected-gradient residual
        best: Best iterate found (a CapacityResult)
    """

    def __init__(self, iterations: int, residual: float, best: Any = None):
        self.iterations = iterations
        self.residual = residual
        self.best = best
        super().__init__(
            f"Solver did not converge in {iterations} iterations (residual {residual:.3e})"
        )


class CertificateInapplicableError(FracapError):
    """A sequence violates the gap precondition of the convergence certificate.

    Attributes:
        index: 1-based index i of the violating gap ||u_{i+1} - u_i||
        gap: Measured gap
        limit: Required bound 8^{-i}
    """

    def __init__(self, index: int, gap: float, limit: float):
        self.index = index
        self.gap = gap
        self.limit = limit
        super().__init__(
            f"Certificate inapplicable at index {index}: gap {gap:.6e} exceeds {limit:.6e}"
        )


class UsageError(FracapError):
    """Arguments are inconsistent with the operation's contract.

    Attributes:
        reason: Description of the misuse
    """

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Usage error: {reason}")


class ValidationError(FracapError):
    """Validation failed.

    Raised when a scenario file fails validation. All errors are collected.

    Attributes:
        errors: List of validation error messages
    """

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__(f"Validation failed: {'; '.join(errors)}")


class ReportWriteError(FracapError):
    """A report could not be written or read.

    Attributes:
        path: File path involved
        reason: Description of the I/O failure
    """

    def __init__(self, path: Path | str, reason: str):
        self.path = Path(path)
        self.reason = reason
        super().__init__(f"Report I/O failed for {self.path}: {reason}")
