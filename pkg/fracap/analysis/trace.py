"""Trace Analysis.

Finite-resolution counterparts of the trace results: quasi-uniform convergence
certificates for fast Cauchy sequences, zero-trace membership tested against a
capacity tolerance, the boundary capacity across resolutions, and the comparison
of capacities on Omega and on Omega minus a cell set N.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from ..exceptions import (
    CertificateInapplicableError,
    GridMismatchError,
    ParameterError,
    UsageError,
)
from ..models import (
    CertificateRecord,
    ConvergenceCertificate,
    LimitCertificate,
    MaskIndices,
    MembershipReport,
    PolarityReport,
    RemovabilityReport,
    SeriesPoint,
    SolverOptions,
    TestSetComparison,
)
from ..space.exponents import ExponentField, PSpec, QSpec
from ..space.functions import GridFunction, absolute_value, scale_and_combine
from ..space.grid import (
    DomainSpec,
    SetMask,
    boundary_mask,
    build_grid,
    open_neighborhood,
    remove_cells,
    transfer_mask,
)
from .capacity import capacity_relative_open, capacity_set, capacity_upper_bound
from .modular import check_smoothness
from .norms import sobolev_norm

logger = logging.getLogger(__name__)

# Relative slack on the 8^-i gap precondition
GAP_SLACK = 1e-12
# Absolute slack on certified capacity bounds
BOUND_SLACK = 1e-9
# Fraction of the coarsest value below which a series no longer counts as bounded away
BOUNDED_FRACTION = 0.5
# Each decay rate per doubling must keep at least this share of the previous one
DECAY_PERSISTENCE = 0.6
# Solver slack when comparing test-set discrepancies with C(N)
HULL_BOUND_SLACK = 1e-6


def _indices(mask: SetMask) -> MaskIndices:
    return MaskIndices(**mask.to_dict())


def _exceptional_set(diff: GridFunction, threshold: float) -> SetMask:
    return SetMask(diff.grid, np.abs(diff.cells) > threshold, np.abs(diff.boundary) > threshold)


def _certified_bound(
    diff: GridFunction, index: int, exceptional: SetMask, field: ExponentField, s: float
) -> float:
    """rho of 2^i |diff| clamped admissibly, or 0 for an empty exceptional set."""
    if exceptional.is_empty():
        return 0.0
    scaled = scale_and_combine(2.0**index, absolute_value(diff), 0.0, diff)
    return capacity_upper_bound(scaled, exceptional, field, s)


def _check_sequence(sequence: Sequence[GridFunction], minimum: int) -> None:
    if len(sequence) < minimum:
        raise UsageError(f"at least {minimum} functions are needed")
    grid = sequence[0].grid
    if any(u.grid is not grid for u in sequence):
        raise GridMismatchError("certificate")


def quasi_convergence_certificate(
    sequence: Sequence[GridFunction],
    field: ExponentField,
    s: float,
    tail_start: int = 1,
) -> ConvergenceCertificate:
    """Certify quasi-uniform convergence of a sequence with gaps ||u_{i+1} - u_i|| <= 8^-i.

    For each 1-based index i the exceptional set G_i = {|u_{i+1} - u_i| > 2^-i} gets
    the capacity bound rho(2^i |u_{i+1} - u_i|), which must not exceed 4^-i. Off the
    union of G_i for i >= tail_start, consecutive terms differ by at most 2^-i.

    Raises:
        UsageError: Fewer than two functions
        ParameterError: tail_start < 1
        CertificateInapplicableError: A gap exceeds 8^-i
    """
    _check_sequence(sequence, 2)
    s = check_smoothness(s)
    if tail_start < 1:
        raise ParameterError("tail_start", tail_start, "must be at least 1")

    grid = sequence[0].grid
    records: list[CertificateRecord] = []
    tail = SetMask.empty(grid)
    diffs: list[GridFunction] = []
    for index, (current, following) in enumerate(zip(sequence, sequence[1:]), start=1):
        diff = scale_and_combine(1.0, following, -1.0, current)
        gap = sobolev_norm(diff, field, s)
        gap_limit = 8.0**-index
        if gap > gap_limit * (1.0 + GAP_SLACK):
            raise CertificateInapplicableError(index, gap, gap_limit)

        threshold = 2.0**-index
        exceptional = _exceptional_set(diff, threshold)
        bound = _certified_bound(diff, index, exceptional, field, s)
        bound_limit = 4.0**-index
        records.append(
            CertificateRecord(
                index=index,
                gap=gap,
                gap_limit=gap_limit,
                threshold=threshold,
                bound=bound,
                bound_limit=bound_limit,
                exceptional_set=_indices(exceptional),
                holds=bound <= bound_limit + BOUND_SLACK,
            )
        )
        diffs.append(diff)
        if index >= tail_start:
            tail = tail.union(exceptional)

    tail_records = [r for r in records if r.index >= tail_start]
    uniform = all(
        np.all(np.abs(diff.cells[~tail.cells]) <= record.threshold)
        and np.all(np.abs(diff.boundary[~tail.boundary]) <= record.threshold)
        for diff, record in zip(diffs, records)
        if record.index >= tail_start
    )
    certificate = ConvergenceCertificate(
        records=records,
        verdict=all(r.holds for r in records),
        tail_start=tail_start,
        tail_set=_indices(tail),
        tail_bound=sum(r.bound for r in tail_records),
        tail_limit=sum(r.bound_limit for r in tail_records),
        uniform_off_tail=bool(uniform),
        cauchy_tail=sum(r.threshold for r in tail_records),
    )
    logger.info(
        f"Convergence certificate over {len(records)} gaps: verdict {certificate.verdict}, "
        f"tail bound {certificate.tail_bound:.3e}"
    )
    return certificate


def limit_convergence_certificate(
    sequence: Sequence[GridFunction], limit: GridFunction, field: ExponentField, s: float
) -> LimitCertificate:
    """Certify a subsequence converging to a known limit outside a small set.

    Indices are chosen greedily so that sum 2^i ||u_i - u|| <= 1. Each chosen index
    gets G = {|u_i - u| > 2^-i} with capacity bound rho(2^i |u_i - u|), and the
    bounds must add up to at most 1.
    """
    _check_sequence([*sequence, limit], 2)
    s = check_smoothness(s)

    budget = 1.0
    records: list[CertificateRecord] = []
    for index, term in enumerate(sequence, start=1):
        diff = scale_and_combine(1.0, term, -1.0, limit)
        gap = sobolev_norm(diff, field, s)
        weight = 2.0**index * gap
        if weight > budget:
            continue
        budget -= weight
        threshold = 2.0**-index
        exceptional = _exceptional_set(diff, threshold)
        bound = _certified_bound(diff, index, exceptional, field, s)
        records.append(
            CertificateRecord(
                index=index,
                gap=gap,
                threshold=threshold,
                bound=bound,
                bound_limit=weight,
                exceptional_set=_indices(exceptional),
                holds=bound <= weight + BOUND_SLACK,
            )
        )

    polar_bound = sum(r.bound for r in records)
    return LimitCertificate(
        indices=[r.index for r in records],
        records=records,
        polar_bound=polar_bound,
        verdict=bool(records) and all(r.holds for r in records) and polar_bound <= 1.0 + BOUND_SLACK,
    )


def _offending_nodes(u: GridFunction, epsilon: float) -> SetMask:
    grid = u.grid
    return SetMask(grid, np.zeros(grid.n_cells, dtype=bool), np.abs(u.boundary) > epsilon)


def boundary_trace_deficiency(
    u: GridFunction,
    epsilon: float,
    field: ExponentField,
    s: float,
    options: SolverOptions | None = None,
) -> float:
    """Capacity of the boundary nodes where |u| > epsilon; exactly 0 when there are none."""
    if not epsilon > 0:
        raise ParameterError("epsilon", epsilon, "must be positive")
    offending = _offending_nodes(u, epsilon)
    if offending.is_empty():
        return 0.0
    return capacity_set(offending, field, s, options).value


def zero_trace_membership(
    u: GridFunction,
    epsilon: float,
    delta: float,
    field: ExponentField,
    s: float,
    options: SolverOptions | None = None,
) -> MembershipReport:
    """Whether u vanishes on the boundary outside a set of capacity at most delta."""
    if not delta > 0:
        raise ParameterError("delta", delta, "must be positive")
    deficiency = boundary_trace_deficiency(u, epsilon, field, s, options)
    return MembershipReport(
        member=deficiency <= delta,
        deficiency=deficiency,
        epsilon=epsilon,
        delta=delta,
        offending_nodes=_offending_nodes(u, epsilon).boundary_indices(),
    )


def _decay_rates(series: list[SeriesPoint]) -> list[float]:
    """-log(v_{k+1} / v_k) per doubling of the resolution."""
    rates = []
    for a, b in zip(series, series[1:]):
        doublings = np.log2(b.resolution / a.resolution)
        if a.value <= 0.0 or doublings <= 0.0:
            rates.append(0.0)
        elif b.value <= 0.0:
            rates.append(np.inf)
        else:
            rates.append(float(np.log(a.value / b.value) / doublings))
    return rates


def polarity_verdict(series: Sequence[SeriesPoint]) -> str:
    """Classify a boundary-capacity refinement series.

    A strictly decreasing series whose decay rate per doubling persists (each rate
    keeps at least DECAY_PERSISTENCE of the previous one) is "tending to zero".
    Otherwise a series staying above BOUNDED_FRACTION of its coarsest value is
    "bounded away from zero", a non-increasing one is "tending to zero", and
    anything else is "inconclusive".
    """
    points = sorted(series, key=lambda point: point.resolution)
    values = [point.value for point in points]
    rates = _decay_rates(points)
    persistent = len(rates) >= 2 and all(rate > 0.0 for rate in rates) and all(
        later >= DECAY_PERSISTENCE * earlier for earlier, later in zip(rates, rates[1:])
    )
    if persistent or values[-1] == 0.0 < values[0]:
        return "tending to zero"
    if min(values) >= BOUNDED_FRACTION * values[0]:
        return "bounded away from zero"
    if all(b <= a for a, b in zip(values, values[1:])):
        return "tending to zero"
    return "inconclusive"


def boundary_polarity_check(
    domain: DomainSpec,
    resolutions: Sequence[int | Sequence[int]],
    q: QSpec,
    p: PSpec,
    s: float,
    options: SolverOptions | None = None,
) -> PolarityReport:
    """Boundary capacity over at least three resolutions with a trend verdict.

    The verdict comes from polarity_verdict: a steady decay per doubling reads as
    "tending to zero" before the bounded-away floor is considered.
    """
    if len(resolutions) < 3:
        raise UsageError("at least three resolutions are needed")
    s = check_smoothness(s)
    series = []
    for resolution in resolutions:
        grid = build_grid(domain, resolution)
        field = ExponentField(grid, q, p)
        value = capacity_set(boundary_mask(grid), field, s, options).value
        logger.info(f"Boundary capacity at resolution {resolution}: {value:.12g}")
        # Series rows are keyed by the first-axis resolution
        series.append(SeriesPoint(resolution=grid.resolution[0], value=value))
    return PolarityReport(
        capacity=series[-1].value, series=series, verdict=polarity_verdict(series)
    )


def default_test_sets(removed: SetMask) -> list[SetMask]:
    """Single cells bordering N, or the first cell when N is empty."""
    grid = removed.grid
    ring = open_neighborhood(grid, removed).cells & ~removed.cells
    cells = np.flatnonzero(ring) if ring.any() else np.flatnonzero(~removed.cells)[:1]
    return [SetMask.from_indices(grid, cells=[int(c)]) for c in cells]


def removable_set_check(
    removed: SetMask,
    test_sets: Sequence[SetMask],
    field: ExponentField,
    s: float,
    tolerance: float = 1e-6,
    options: SolverOptions | None = None,
) -> RemovabilityReport:
    """Compare test-set capacities on Omega and on Omega minus the cells of N.

    C(N) is measured through the one-ring hull of N, like any other set passed to
    capacity_set, and the verdict uses that value. The capacity of N's cells taken
    as a relatively open set is reported alongside. Default test sets are the
    cells bordering N.

    Raises:
        UsageError: If N flags boundary nodes or a test set meets N
    """
    s = check_smoothness(s)
    if not tolerance > 0:
        raise ParameterError("tolerance", tolerance, "must be positive")
    grid = removed.grid
    if removed.boundary.any():
        raise UsageError("the removed set must consist of cells")
    tests = list(test_sets) or default_test_sets(removed)
    for k, test in enumerate(tests):
        if test.grid is not grid:
            raise GridMismatchError("removable_set_check")
        if (test.cells & removed.cells).any():
            raise UsageError(f"test set {k} intersects the removed set")

    capacity_of_removed = capacity_set(removed, field, s, options).value
    open_capacity = capacity_relative_open(removed, field, s, options).value
    reduced_grid = remove_cells(grid, removed)

    comparisons = []
    for test in tests:
        full = capacity_set(test, field, s, options).value
        if reduced_grid is grid:
            reduced = full
        else:
            reduced = capacity_set(transfer_mask(test, reduced_grid), field, s, options).value
        comparisons.append(
            TestSetComparison(
                test_set=_indices(test), full=full, reduced=reduced, discrepancy=abs(full - reduced)
            )
        )
    max_discrepancy = max((c.discrepancy for c in comparisons), default=0.0)
    removable = capacity_of_removed <= tolerance and max_discrepancy <= tolerance
    within_hull_bound = max_discrepancy <= capacity_of_removed + HULL_BOUND_SLACK
    logger.info(
        f"Removability: C(N)={capacity_of_removed:.6g}, max discrepancy={max_discrepancy:.6g}, "
        f"removable={removable}"
    )
    return RemovabilityReport(
        removed=_indices(removed),
        capacity_of_removed=capacity_of_removed,
        open_capacity=open_capacity,
        comparisons=comparisons,
        max_discrepancy=max_discrepancy,
        tolerance=tolerance,
        removable=removable,
        within_hull_bound=within_hull_bound,
    )
