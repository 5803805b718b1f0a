"""Scenario Loader.

Parses scenario JSON files into validated Scenario models and builds the grid,
exponent field, functions and masks they describe. Validation is exhaustive:
schema errors and semantic errors are collected and raised together.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import FracapError, ValidationError
from ..space.exponents import ExponentField
from ..space.functions import GridFunction
from ..space.grid import DomainSpec, Grid, SetMask, build_grid
from .models import FunctionSpec, MaskSpec, Scenario

logger = logging.getLogger(__name__)

# Dense pair matrices are cells x cells
MAX_CELLS = 4096

# Payload fields each task needs
REQUIRED_PAYLOAD: dict[str, list[str]] = {
    "modular": ["function"],
    "norm": ["function"],
    "capacity": ["set"],
    "axioms": [],
    "certificate": ["functions"],
    "boundary": [],
    "removability": ["removed"],
}


@dataclass
class ScenarioContext:
    """Objects built from a validated scenario at its base resolution."""

    scenario: Scenario
    domain: DomainSpec
    grid: Grid
    field: ExponentField

    def function(self, spec: FunctionSpec) -> GridFunction:
        return build_function(self.grid, spec)

    def mask(self, spec: MaskSpec) -> SetMask:
        return build_mask(self.grid, spec)


def axis_resolution(domain: DomainSpec, resolution: int) -> tuple[int, ...]:
    """Cells per axis giving square cells with `resolution` cells along the first axis.

    Raises:
        ValueError: If the other sides are not multiples of the cell size
    """
    h = (domain.upper[0] - domain.lower[0]) / resolution
    cells = [resolution]
    for lo, hi in zip(domain.lower[1:], domain.upper[1:]):
        count = (hi - lo) / h
        if abs(count - round(count)) > 1e-9 * max(1.0, count):
            raise ValueError(
                f"side length {hi - lo} is not a multiple of the cell size {h} at resolution {resolution}"
            )
        cells.append(int(round(count)))
    if int(np.prod(cells)) > MAX_CELLS:
        raise ValueError(f"{'x'.join(map(str, cells))} cells exceed the limit of {MAX_CELLS}")
    return tuple(cells)


def build_function(grid: Grid, spec: FunctionSpec) -> GridFunction:
    if spec.expression is not None:
        function = GridFunction.from_expression(grid, spec.expression)
        if spec.boundary is not None:
            function = GridFunction(grid, function.cells, np.asarray(spec.boundary, dtype=float))
        return function
    return GridFunction.from_values(grid, spec.values or [], spec.boundary)


def build_mask(grid: Grid, spec: MaskSpec) -> SetMask:
    if spec.whole:
        return SetMask.full(grid)
    return SetMask.from_indices(grid, cells=spec.cells, boundary=spec.boundary)


def _format_pydantic(error: PydanticValidationError) -> list[str]:
    messages = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "scenario"
        messages.append(f"{location}: {item['msg']}")
    return messages


def build_context(scenario: Scenario) -> ScenarioContext:
    """Build grid, field, functions and masks, collecting every semantic error.

    Raises:
        ValidationError: With all semantic errors found
    """
    errors: list[str] = []
    payload = scenario.payload

    for name in REQUIRED_PAYLOAD[scenario.task]:
        value = getattr(payload, name)
        if value is None or value == []:
            errors.append(f"payload.{name}: required for task '{scenario.task}'")
    if scenario.task == "axioms" and len(payload.sets) + payload.random_sets < 2:
        errors.append("payload.sets: the axioms task needs at least two sets (sets or random_sets)")
    if scenario.task == "certificate" and 0 < len(payload.functions) < 2:
        errors.append("payload.functions: a certificate needs at least two functions")
    if scenario.task == "boundary":
        resolutions = payload.resolutions or scenario.resolutions
        if payload.function is None and len(resolutions) < 3:
            errors.append(
                "payload.resolutions: the boundary task needs a function or at least three resolutions"
            )
        if any(r < 2 for r in payload.resolutions):
            errors.append("payload.resolutions: resolutions must be at least 2")

    try:
        domain = scenario.domain.to_spec()
    except (ValueError, TypeError) as e:
        raise ValidationError(errors + [f"domain: {e}"]) from None

    try:
        grid = build_grid(domain, axis_resolution(domain, scenario.resolutions[0]))
    except (FracapError, ValueError) as e:
        raise ValidationError(errors + [f"resolution: {e}"]) from None
    series = payload.resolutions if scenario.task == "boundary" else []
    for resolution in [*scenario.resolutions[1:], *series]:
        try:
            axis_resolution(domain, resolution)
        except (ValueError, ZeroDivisionError) as e:
            errors.append(f"resolution: {e}")

    try:
        field = ExponentField(grid, scenario.q, scenario.p)
    except FracapError as e:
        raise ValidationError(errors + [f"exponents: {e}"]) from None

    for name in ("function", "limit"):
        spec = getattr(payload, name)
        if spec is not None:
            try:
                build_function(grid, spec)
            except FracapError as e:
                errors.append(f"payload.{name}: {e}")
    for k, spec in enumerate(payload.functions):
        try:
            build_function(grid, spec)
        except FracapError as e:
            errors.append(f"payload.functions[{k}]: {e}")
    for name in ("set", "removed"):
        spec = getattr(payload, name)
        if spec is not None:
            try:
                build_mask(grid, spec)
            except FracapError as e:
                errors.append(f"payload.{name}: {e}")
    for k, spec in enumerate(payload.sets):
        try:
            build_mask(grid, spec)
        except FracapError as e:
            errors.append(f"payload.sets[{k}]: {e}")

    if errors:
        raise ValidationError(errors)
    return ScenarioContext(scenario=scenario, domain=domain, grid=grid, field=field)


def parse_scenario_context(data: Any) -> ScenarioContext:
    """Validate already-decoded scenario data and keep what validation built.

    Raises:
        ValidationError: With every schema and semantic error found
    """
    if not isinstance(data, dict):
        raise ValidationError([f"scenario: expected a JSON object, got {type(data).__name__}"])
    try:
        scenario = Scenario.model_validate(data)
    except PydanticValidationError as e:
        raise ValidationError(_format_pydantic(e)) from None
    try:
        return build_context(scenario)
    except ValidationError:
        raise
    except Exception as e:
        raise ValidationError([f"scenario: {e}"]) from None


def parse_scenario_data(data: Any) -> Scenario:
    """Validate already-decoded scenario data.

    Raises:
        ValidationError: With every schema and semantic error found
    """
    return parse_scenario_context(data).scenario


def load_scenario_context(path: Path | str) -> ScenarioContext:
    """Read and validate a scenario file, returning its built context.

    Raises:
        ValidationError: If the file is unreadable, not JSON, or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ValidationError([f"Cannot read scenario {path}: {e}"]) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError([f"Invalid JSON in {path}: {e}"]) from None
    ctx = parse_scenario_context(data)
    logger.info(f"Loaded scenario {path} (task {ctx.scenario.task})")
    return ctx


def parse_scenario(path: Path | str) -> Scenario:
    """Read and validate a scenario file.

    Args:
        path: Path to a UTF-8 JSON scenario

    Returns:
        Validated Scenario

    Raises:
        ValidationError: If the file is unreadable, not JSON, or invalid
    """
    return load_scenario_context(path).scenario
