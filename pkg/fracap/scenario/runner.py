"""Scenario Runner.

Dispatches a validated scenario to its task and assembles a RunReport. Library
errors never escape: they become "fail" entries (or "inapplicable" when a
certificate's precondition does not hold).
"""

from __future__ import annotations

import hashlib
import logging
import time
from collections.abc import Callable

import numpy as np

from .. import __version__
from ..analysis.capacity import capacity_relative_open, verify_capacity_axioms
from ..analysis.modular import modular_gradient, sobolev_modular
from ..analysis.norms import gagliardo_seminorm, luxembourg_norm, modular_norm, sobolev_norm
from ..analysis.trace import (
    boundary_polarity_check,
    limit_convergence_certificate,
    quasi_convergence_certificate,
    removable_set_check,
    zero_trace_membership,
)
from ..exceptions import CertificateInapplicableError, ConvergenceError, FracapError, UsageError
from ..space.grid import SetMask
from .loader import ScenarioContext, axis_resolution, build_context
from .models import RunReport, Scenario, TaskResult, TimingEntry

logger = logging.getLogger(__name__)

# Probability that a cell joins a random axiom set
RANDOM_SET_DENSITY = 0.3
# Relative slack in the norm equivalence check
EQUIVALENCE_SLACK = 1e-9


def scenario_hash(scenario: Scenario) -> str:
    """SHA-256 of the canonical scenario dump."""
    canonical = scenario.model_dump_json(exclude={"output"})
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _modular(ctx: ScenarioContext) -> list[TaskResult]:
    u = ctx.function(ctx.scenario.payload.function)  # type: ignore[arg-type]
    breakdown = sobolev_modular(u, ctx.field, ctx.scenario.s)
    gradient = modular_gradient(u, ctx.field, ctx.scenario.s)
    data = breakdown.model_dump()
    data["gradient"] = gradient.cells.tolist()
    return [TaskResult(task="modular", verdict="pass", data=data)]


def _norm(ctx: ScenarioContext) -> list[TaskResult]:
    u = ctx.function(ctx.scenario.payload.function)  # type: ignore[arg-type]
    s = ctx.scenario.s
    lux = luxembourg_norm(u, ctx.field)
    semi = gagliardo_seminorm(u, ctx.field, s)
    rho = modular_norm(u, ctx.field, s)
    total = sobolev_norm(u, ctx.field, s)
    slack = EQUIVALENCE_SLACK * max(1.0, total)
    equivalent = rho.value <= total + slack and total <= 2.0 * rho.value + slack
    data = {
        "luxembourg": lux.model_dump(exclude={"history"}),
        "gagliardo_seminorm": semi.model_dump(exclude={"history"}),
        "modular_norm": rho.model_dump(exclude={"history"}),
        "sobolev_norm": total,
        "equivalence_holds": equivalent,
    }
    message = "" if equivalent else "norm equivalence constant 2 exceeded"
    return [TaskResult(task="norm", verdict="pass" if equivalent else "fail", data=data, message=message)]


def _capacity(ctx: ScenarioContext) -> list[TaskResult]:
    payload = ctx.scenario.payload
    mask = ctx.mask(payload.set)  # type: ignore[arg-type]
    result = capacity_relative_open(mask, ctx.field, ctx.scenario.s, payload.solver)
    return [TaskResult(task="capacity", verdict="pass", data=result.to_dict())]


def _random_masks(ctx: ScenarioContext) -> list[SetMask]:
    rng = np.random.default_rng(ctx.scenario.seed)
    grid = ctx.grid
    masks = []
    for _ in range(ctx.scenario.payload.random_sets):
        cells = rng.random(grid.n_cells) < RANDOM_SET_DENSITY
        masks.append(SetMask(grid, cells, np.zeros(grid.n_boundary, dtype=bool)))
    return masks


def _axioms(ctx: ScenarioContext) -> list[TaskResult]:
    payload = ctx.scenario.payload
    sets = [ctx.mask(spec) for spec in payload.sets] + _random_masks(ctx)
    report = verify_capacity_axioms(sets, ctx.field, ctx.scenario.s, payload.solver)
    data = {
        "checks": [check.model_dump() for check in report.checks],
        "capacities": report.capacities,
        "tolerance": report.tolerance,
        "sets": [mask.to_dict() for mask in sets],
    }
    failed = [check.name for check in report.checks if not check.passed]
    return [
        TaskResult(
            task="axioms",
            verdict="pass" if report.passed else "fail",
            data=data,
            message=f"failed: {', '.join(failed)}" if failed else "",
        )
    ]


def _certificate(ctx: ScenarioContext) -> list[TaskResult]:
    payload = ctx.scenario.payload
    sequence = [ctx.function(spec) for spec in payload.functions]
    s = ctx.scenario.s
    results = []
    certificate = quasi_convergence_certificate(sequence, ctx.field, s, payload.tail_start)
    results.append(
        TaskResult(
            task="certificate",
            verdict="pass" if certificate.verdict else "fail",
            data=certificate.model_dump(),
        )
    )
    if payload.limit is not None:
        limit = limit_convergence_certificate(sequence, ctx.function(payload.limit), ctx.field, s)
        results.append(
            TaskResult(
                task="limit_certificate",
                verdict="pass" if limit.verdict else "fail",
                data=limit.model_dump(),
            )
        )
    return results


def _boundary(ctx: ScenarioContext) -> list[TaskResult]:
    scenario = ctx.scenario
    payload = scenario.payload
    results = []
    if payload.function is not None:
        u = ctx.function(payload.function)
        membership = zero_trace_membership(
            u, payload.epsilon, payload.delta, ctx.field, scenario.s, payload.solver
        )
        results.append(
            TaskResult(
                task="zero_trace",
                verdict="pass" if membership.member else "fail",
                data=membership.model_dump(),
            )
        )
    resolutions = payload.resolutions or scenario.resolutions
    if len(resolutions) >= 3:
        polarity = boundary_polarity_check(
            ctx.domain,
            [axis_resolution(ctx.domain, r) for r in resolutions],
            scenario.q,
            scenario.p,
            scenario.s,
            payload.solver,
        )
        data = polarity.model_dump(exclude={"series"})
        results.append(
            TaskResult(task="boundary_polarity", verdict="pass", data=data, series=polarity.series)
        )
    return results


def _removability(ctx: ScenarioContext) -> list[TaskResult]:
    payload = ctx.scenario.payload
    removed = ctx.mask(payload.removed)  # type: ignore[arg-type]
    tests = [ctx.mask(spec) for spec in payload.sets]
    report = removable_set_check(
        removed, tests, ctx.field, ctx.scenario.s, payload.tolerance, payload.solver
    )
    return [
        TaskResult(
            task="removability",
            verdict="pass" if report.removable else "fail",
            data=report.model_dump(),
        )
    ]


TASKS: dict[str, Callable[[ScenarioContext], list[TaskResult]]] = {
    "modular": _modular,
    "norm": _norm,
    "capacity": _capacity,
    "axioms": _axioms,
    "certificate": _certificate,
    "boundary": _boundary,
    "removability": _removability,
}


def _failure(task: str, error: FracapError) -> TaskResult:
    if isinstance(error, CertificateInapplicableError):
        return TaskResult(
            task=task,
            verdict="inapplicable",
            data={"index": error.index, "gap": error.gap, "limit": error.limit},
            message=str(error),
        )
    data = {}
    if isinstance(error, ConvergenceError):
        data = {"iterations": error.iterations, "residual": error.residual}
        if error.best is not None:
            data["best_value"] = error.best.value
    return TaskResult(task=task, verdict="fail", data=data, message=str(error))


def run_scenario(scenario: Scenario, context: ScenarioContext | None = None) -> RunReport:
    """Run the scenario's task.

    Deterministic for a given scenario and seed; wall-clock times live in the
    separate timing section.

    Args:
        scenario: Validated scenario
        context: Context already built for this scenario by the loader; built
            here when absent

    Raises:
        ValidationError: If the scenario fails semantic validation
        UsageError: If the context was built for another scenario
    """
    if context is None:
        ctx = build_context(scenario)
    elif context.scenario is not scenario:
        raise UsageError("context was built for a different scenario")
    else:
        ctx = context
    task = scenario.task
    logger.info(f"Running task '{task}' on {ctx.grid}")
    start = time.perf_counter()
    try:
        results = TASKS[task](ctx)
    except FracapError as e:
        logger.warning(f"Task '{task}' failed: {e}")
        results = [_failure(task, e)]
    elapsed = time.perf_counter() - start
    logger.info(f"Task '{task}' finished in {elapsed:.3f}s")
    return RunReport(
        tool_version=__version__,
        scenario_hash=scenario_hash(scenario),
        results=results,
        timing=[TimingEntry(task=task, seconds=elapsed)],
    )
