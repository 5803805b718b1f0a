"""Box-Constrained Projected Gradient.

Minimizes a smooth convex objective over lower <= x <= upper. Each iteration tries
a Barzilai-Borwein step and backtracks along the projected arc until the Armijo
condition

    f(P(x - t g)) <= f(x) + slope * g . (P(x - t g) - x)

holds. Stops when the projected-gradient residual ||P(x - g) - x||_inf falls below
the gradient tolerance, or when the relative decrease stalls while the residual
is already within the KKT tolerance.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ..models import SolverOptions

logger = logging.getLogger(__name__)

# Bounds on the Barzilai-Borwein step
MIN_STEP = 1e-12
MAX_STEP = 1e12
# Backtracking steps before the line search gives up
MAX_BACKTRACKS = 60


@dataclass
class OptimizationResult:
    """Final iterate and diagnostics."""

    x: np.ndarray
    value: float
    iterations: int
    residual: float
    converged: bool
    status: str


def projected_residual(x: np.ndarray, gradient: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    """||P(x - g) - x||_inf."""
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(np.clip(x - gradient, lower, upper) - x)))


def projected_gradient(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    options: SolverOptions,
) -> OptimizationResult:
    """Run projected gradient descent from x0.

    Args:
        objective: Smooth convex objective
        gradient: Its gradient
        x0: Starting point (projected onto the box first)
        lower: Lower bounds
        upper: Upper bounds (equal to lower for fixed coordinates)
        options: Tolerances and caps

    Returns:
        OptimizationResult; converged is False when the iteration cap was hit
    """
    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    f = objective(x)
    g = gradient(x)
    residual = projected_residual(x, g, lower, upper)
    step = 1.0

    for iteration in range(1, options.max_iterations + 1):
        if residual < options.gradient_tolerance:
            return OptimizationResult(x, f, iteration - 1, residual, True, "gradient")

        t = float(np.clip(step, MIN_STEP, MAX_STEP))
        for _ in range(MAX_BACKTRACKS):
            x_new = np.clip(x - t * g, lower, upper)
            f_new = objective(x_new)
            if f_new <= f + options.armijo_slope * float(np.dot(g, x_new - x)):
                break
            t *= options.armijo_shrink
        else:
            status = "converged" if residual <= options.kkt_tolerance else "stalled"
            logger.debug(f"Line search failed at iteration {iteration} (residual {residual:.3e})")
            return OptimizationResult(
                x, f, iteration, residual, residual <= options.kkt_tolerance, status
            )

        g_new = gradient(x_new)
        s_vec = x_new - x
        y_vec = g_new - g
        sy = float(np.dot(s_vec, y_vec))
        step = float(np.dot(s_vec, s_vec)) / sy if sy > 0 else MAX_STEP

        decrease = f - f_new
        x, f, g = x_new, f_new, g_new
        residual = projected_residual(x, g, lower, upper)

        if iteration % 100 == 0:
            logger.debug(f"iteration {iteration}: objective {f:.12g}, residual {residual:.3e}")

        if decrease <= options.decrease_tolerance * max(1.0, abs(f)) and residual <= options.kkt_tolerance:
            return OptimizationResult(x, f, iteration, residual, True, "decrease")

    converged = residual < options.gradient_tolerance
    return OptimizationResult(
        x, f, options.max_iterations, residual, converged, "gradient" if converged else "iterations"
    )
