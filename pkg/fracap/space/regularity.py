"""Exponent Regularity Checks.

Sampling certificates for the log-Hölder condition on q and the two-point
analogue on p:

    |q(x) - q(y)| * (-log |x - y|)                      for 0 < |x - y| <= 1/2
    |p(x, y) - p(x', y')| * (-log (|x - x'| + |y - y'|))  for 0 < |x - x'| + |y - y'| <= 1/2

The reported modulus is the supremum over a uniform lattice. A uniform lattice
with 2N + 1 points per axis on an N-cell axis samples every cell center and every
cell face. Each estimate also carries a refinement study at a quarter, half and
full density; a strictly growing modulus is flagged as diverging.
"""

from __future__ import annotations

import logging

import numpy as np

from ..exceptions import ParameterError
from ..models import ModulusEstimate, SeriesPoint
from .exponents import CHUNK_PAIRS, ExponentField, _lattice

logger = logging.getLogger(__name__)

# Largest distance entering the modulus
MAX_DISTANCE = 0.5
# Relative growth across the refinement study that counts as divergence
DIVERGENCE_GROWTH = 0.05


def _sup_modulus(
    values: np.ndarray, points: np.ndarray, split: int | None = None
) -> tuple[float, tuple[int, int] | None]:
    """sup |v_i - v_j| * (-log d_ij) over pairs with 0 < d_ij <= 1/2.

    With split set, points are two-point samples (x, y) stacked as columns and d is
    |x - x'| + |y - y'|.
    """
    m = points.shape[0]
    best = 0.0
    witness: tuple[int, int] | None = None
    step = max(1, CHUNK_PAIRS // max(1, m))
    for start in range(0, m, step):
        stop = min(m, start + step)
        block = points[start:stop, None, :] - points[None, :, :]
        if split is None:
            dist = np.linalg.norm(block, axis=2)
        else:
            dist = np.linalg.norm(block[:, :, :split], axis=2) + np.linalg.norm(
                block[:, :, split:], axis=2
            )
        admissible = (dist > 0) & (dist <= MAX_DISTANCE)
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = np.where(admissible, -np.log(np.where(admissible, dist, 1.0)), 0.0)
        score = np.abs(values[start:stop, None] - values[None, :]) * weight
        flat = int(np.argmax(score))
        row, col = divmod(flat, m)
        if score[row, col] > best:
            best = float(score[row, col])
            witness = (start + row, col)
    return best, witness


def _log_holder(field: ExponentField, samples: int) -> tuple[float, list[list[float]] | None]:
    points = _lattice(field.domain, samples)
    modulus, pair = _sup_modulus(field.q_at(points), points)
    if pair is None:
        return modulus, None
    return modulus, [points[pair[0]].tolist(), points[pair[1]].tolist()]


def _bb(field: ExponentField, samples: int) -> tuple[float, list[list[float]] | None]:
    points = _lattice(field.domain, samples)
    m, n = points.shape
    xs = np.repeat(points, m, axis=0)
    ys = np.tile(points, (m, 1))
    two_points = np.concatenate([xs, ys], axis=1)
    modulus, pair = _sup_modulus(field.p_at(xs, ys), two_points, split=n)
    if pair is None:
        return modulus, None
    a, b = two_points[pair[0]], two_points[pair[1]]
    return modulus, [a[:n].tolist(), a[n:].tolist(), b[:n].tolist(), b[n:].tolist()]


def _refinement_densities(samples: int) -> list[int]:
    return sorted({max(2, samples // 4), max(2, samples // 2), samples})


def _is_diverging(series: list[SeriesPoint]) -> bool:
    values = [point.value for point in series]
    if len(values) < 2 or max(values) <= 0:
        return False
    increasing = all(b > a for a, b in zip(values, values[1:]))
    return increasing and values[-1] > (1.0 + DIVERGENCE_GROWTH) * values[0]


def _estimate(field: ExponentField, samples: int, modulus_fn, label: str) -> ModulusEstimate:  # type: ignore[no-untyped-def]
    if samples < 2:
        raise ParameterError("samples", samples, "must be at least 2")
    series = []
    modulus, witness = 0.0, None
    for density in _refinement_densities(samples):
        modulus, witness = modulus_fn(field, density)
        series.append(SeriesPoint(resolution=density, value=modulus))
    diverging = _is_diverging(series)
    if diverging:
        logger.warning(
            f"{label} modulus grows under refinement: "
            + ", ".join(f"{p.resolution}: {p.value:.4g}" for p in series)
        )
    return ModulusEstimate(
        modulus=modulus,
        samples=samples,
        witness=witness,
        refinement=series,
        diverging=diverging,
    )


def check_log_holder(field: ExponentField, samples: int) -> ModulusEstimate:
    """Smallest C with |q(x) - q(y)| <= C / (-log |x - y|) on sampled pairs.

    Args:
        field: Exponent field
        samples: Lattice points per axis (at least 2)

    Returns:
        ModulusEstimate with the maximizing pair and a refinement study
    """
    return _estimate(field, samples, _log_holder, "log-Hoelder")


def check_bb_condition(field: ExponentField, samples: int) -> ModulusEstimate:
    """Two-point analogue of check_log_holder for p on sampled pairs of pairs.

    The witness lists x, y, x', y' in that order.
    """
    return _estimate(field, samples, _bb, "two-point log-Hoelder")
