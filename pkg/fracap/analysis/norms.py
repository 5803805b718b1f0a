"""Luxembourg-Type Norms.

Every norm here is inf{lam > 0 : rho(u / lam) <= 1} for some modular rho, found by
bisection on the strictly decreasing map lam -> rho(u / lam).
"""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from ..config import get_settings
from ..exceptions import EvaluationError
from ..models import NormReport
from ..space.exponents import ExponentField
from ..space.functions import GridFunction
from .modular import check_smoothness, modular_operator
from .reduction import tree_sum

logger = logging.getLogger(__name__)

# Lower end of the initial bracket
BRACKET_FLOOR = 1e-300
# Doublings allowed while growing the upper end
MAX_DOUBLINGS = 2000


def bisect_norm(
    modular: Callable[[np.ndarray], float],
    values: np.ndarray,
    operation: str,
    relative_width: float | None = None,
) -> NormReport:
    """Luxembourg norm of `values` for a modular on raw cell vectors.

    Args:
        modular: Map from cell values to the modular (may return inf)
        values: Cell values of u
        operation: Name used in log and error messages
        relative_width: Stop once hi - lo <= relative_width * hi

    Returns:
        NormReport with value = hi of the final bracket

    Raises:
        EvaluationError: If the modular is not finite at u or no upper bracket exists
    """
    settings = get_settings()
    width = settings.bisection_relative_width if relative_width is None else relative_width

    rho_u = modular(values)
    if not np.isfinite(rho_u):
        raise EvaluationError(operation, f"modular is not finite ({rho_u})")
    if rho_u == 0.0:
        return NormReport(value=0.0, lo=0.0, hi=0.0, iterations=0, residual=0.0)

    def phi(lam: float) -> float:
        return modular(values / lam)

    scale = float(np.max(np.abs(values)))
    lo = BRACKET_FLOOR
    hi = max(1.0, rho_u) * (1.0 + scale)
    doublings = 0
    while phi(hi) > 1.0:
        hi *= 2.0
        doublings += 1
        if doublings > MAX_DOUBLINGS or not np.isfinite(hi):
            raise EvaluationError(operation, "no upper bracket for the norm")

    history: list[float] = []
    iterations = 0
    phi_hi = phi(hi)
    while hi - lo > width * hi:
        mid = 0.5 * (lo + hi)
        phi_mid = phi(mid)
        if phi_mid <= 1.0:
            hi, phi_hi = mid, phi_mid
        else:
            lo = mid
        iterations += 1
        history.append(abs(phi_hi - 1.0))

    residual = abs(phi_hi - 1.0)
    if residual > settings.norm_residual_tolerance:
        logger.warning(f"{operation}: residual {residual:.3e} above tolerance after {iterations} steps")
    logger.debug(f"{operation}: value {hi:.12g} after {iterations} bisection steps")
    return NormReport(value=hi, lo=lo, hi=hi, iterations=iterations, residual=residual, history=history)


def luxembourg_norm(u: GridFunction, field: ExponentField) -> NormReport:
    """Norm of u in the variable-exponent Lebesgue space."""
    q = field.q_at(u.grid.centers)
    measure = u.grid.cell_measure

    def modular(values: np.ndarray) -> float:
        with np.errstate(over="ignore"):
            return tree_sum(np.abs(values) ** q) * measure  # type: ignore[operator]

    return bisect_norm(modular, u.cells, "luxembourg_norm")


def gagliardo_seminorm(u: GridFunction, field: ExponentField, s: float) -> NormReport:
    """Luxembourg seminorm built on the Gagliardo double sum; 0 for constant u."""
    operator = modular_operator(u.grid, field, check_smoothness(s))
    return bisect_norm(operator.gagliardo, u.cells, "gagliardo_seminorm")


def modular_norm(u: GridFunction, field: ExponentField, s: float) -> NormReport:
    """Luxembourg norm of the full Sobolev modular."""
    operator = modular_operator(u.grid, field, check_smoothness(s))
    return bisect_norm(operator.total, u.cells, "modular_norm")


def sobolev_norm(u: GridFunction, field: ExponentField, s: float) -> float:
    """Lebesgue norm plus Gagliardo seminorm."""
    return luxembourg_norm(u, field).value + gagliardo_seminorm(u, field, s).value
