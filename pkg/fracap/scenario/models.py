"""Pydantic Models for Scenario Files and Run Reports.

Scenario schema (UTF-8 JSON):

```json
{
  "domain": {"type": "interval", "bounds": [0.0, 1.0], "holes": []},
  "resolution": 16,
  "s": 0.5,
  "q": 2.0,
  "p": "2 + |x-y|",
  "task": "capacity",
  "payload": {"set": {"cells": [7, 8]}},
  "seed": 0,
  "output": "report.json"
}
```
"""

from __future__ import annotations

import math
from typing import Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..models import SeriesPoint, SolverOptions
from ..space.grid import DomainSpec

TaskName = Literal["modular", "norm", "capacity", "axioms", "certificate", "boundary", "removability"]
Verdict = Literal["pass", "fail", "inapplicable"]


class DomainModel(BaseModel):
    """Interval or rectangle, optionally minus closed boxes.

    Intervals use bounds [a, b] and holes [[lo, hi], ...]; rectangles use bounds
    [[x0, x1], [y0, y1]] and holes [[[x0, y0], [x1, y1]], ...].
    """

    model_config = ConfigDict(extra="forbid")

    type: Literal["interval", "rectangle"]
    bounds: Union[list[float], list[list[float]]]
    holes: list[Any] = Field(default_factory=list)

    def to_spec(self) -> DomainSpec:
        """Convert to a DomainSpec.

        Raises:
            ValueError: If bounds or holes have the wrong shape
        """
        if self.type == "interval":
            if len(self.bounds) != 2 or any(isinstance(b, list) for b in self.bounds):
                raise ValueError("interval bounds must be [a, b]")
            holes = []
            for hole in self.holes:
                if not (isinstance(hole, list) and len(hole) == 2):
                    raise ValueError(f"interval hole {hole} must be [lo, hi]")
                holes.append((float(hole[0]), float(hole[1])))
            return DomainSpec.interval(float(self.bounds[0]), float(self.bounds[1]), holes)  # type: ignore[arg-type]

        if len(self.bounds) != 2 or not all(
            isinstance(b, list) and len(b) == 2 for b in self.bounds
        ):
            raise ValueError("rectangle bounds must be [[x0, x1], [y0, y1]]")
        boxes = []
        for hole in self.holes:
            if not (
                isinstance(hole, list)
                and len(hole) == 2
                and all(isinstance(corner, list) and len(corner) == 2 for corner in hole)
            ):
                raise ValueError(f"rectangle hole {hole} must be [[x0, y0], [x1, y1]]")
            boxes.append((tuple(map(float, hole[0])), tuple(map(float, hole[1]))))
        x_bounds, y_bounds = self.bounds
        return DomainSpec.rectangle(tuple(x_bounds), tuple(y_bounds), boxes)  # type: ignore[arg-type]


class FunctionSpec(BaseModel):
    """Grid function given by an expression in x or by explicit values."""

    model_config = ConfigDict(extra="forbid")

    expression: str | None = None
    values: list[float] | None = Field(None, description="One value per cell")
    boundary: list[float] | None = Field(None, description="One value per boundary node")

    @model_validator(mode="after")
    def check_source(self) -> FunctionSpec:
        if (self.expression is None) == (self.values is None):
            raise ValueError("give exactly one of 'expression' or 'values'")
        return self


class MaskSpec(BaseModel):
    """Set given as index lists, or the whole closed domain."""

    model_config = ConfigDict(extra="forbid")

    cells: list[int] = Field(default_factory=list)
    boundary: list[int] = Field(default_factory=list)
    whole: bool = False


class TaskPayload(BaseModel):
    """Task inputs; which fields are required depends on the task."""

    model_config = ConfigDict(extra="forbid")

    function: FunctionSpec | None = None
    functions: list[FunctionSpec] = Field(default_factory=list)
    limit: FunctionSpec | None = None
    set: MaskSpec | None = None
    sets: list[MaskSpec] = Field(default_factory=list)
    removed: MaskSpec | None = None
    random_sets: int = Field(default=0, ge=0, le=64)
    resolutions: list[int] = Field(default_factory=list)
    epsilon: float = Field(default=1e-6, gt=0)
    delta: float = Field(default=1e-6, gt=0)
    tolerance: float = Field(default=1e-6, gt=0)
    tail_start: int = Field(default=1, ge=1)
    solver: SolverOptions = Field(default_factory=SolverOptions)


class Scenario(BaseModel):
    """One run: domain, exponents, fractional order and a task."""

    model_config = ConfigDict(extra="forbid")

    domain: DomainModel
    resolution: Union[int, list[int]]
    s: float = Field(..., gt=0, lt=1, description="Fractional order")
    q: Union[float, str, list[float]] = 2.0
    p: Union[float, str, list[list[Union[float, None]]]] = 2.0
    task: TaskName
    payload: TaskPayload = Field(default_factory=TaskPayload)
    seed: int = 0
    output: str | None = None

    @field_validator("resolution")
    @classmethod
    def check_resolution(cls, value: int | list[int]) -> int | list[int]:
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("at least one resolution is required")
        if any(r < 2 for r in values):
            raise ValueError("resolutions must be at least 2")
        return value

    @field_validator("q", "p")
    @classmethod
    def check_constant_exponent(cls, value: Any) -> Any:
        if isinstance(value, (int, float)) and not value > 1:
            raise ValueError(f"exponent must exceed 1, got {value}")
        return value

    @property
    def resolutions(self) -> list[int]:
        return list(self.resolution) if isinstance(self.resolution, list) else [self.resolution]


def _check_finite(value: Any, path: str) -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"{path} is not finite ({value})")
    if isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, f"{path}.{key}")
    elif isinstance(value, list):
        for k, item in enumerate(value):
            _check_finite(item, f"{path}[{k}]")


class TaskResult(BaseModel):
    """Outcome of one task."""

    task: str
    verdict: Verdict
    data: dict[str, Any] = Field(default_factory=dict)
    message: str = ""
    series: list[SeriesPoint] = Field(default_factory=list)

    @field_validator("data")
    @classmethod
    def check_data(cls, value: dict[str, Any]) -> dict[str, Any]:
        _check_finite(value, "data")
        return value


class TimingEntry(BaseModel):
    """Wall-clock time of one task; kept out of the deterministic section."""

    task: str
    seconds: float = Field(..., ge=0)


class RunReport(BaseModel):
    """Results of one scenario run."""

    tool_version: str
    scenario_hash: str
    results: list[TaskResult] = Field(default_factory=list)
    timing: list[TimingEntry] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.verdict != "fail" for result in self.results)

    def deterministic_json(self) -> str:
        """Report without wall-clock data, for byte comparisons."""
        return self.model_dump_json(exclude={"timing"}, indent=2)
