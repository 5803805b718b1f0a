"""Scenario files: parsing, running and report output."""

from .loader import (
    ScenarioContext,
    build_context,
    load_scenario_context,
    parse_scenario,
    parse_scenario_context,
    parse_scenario_data,
)
from .models import (
    DomainModel,
    FunctionSpec,
    MaskSpec,
    RunReport,
    Scenario,
    TaskPayload,
    TaskResult,
    TimingEntry,
)
from .runner import run_scenario, scenario_hash
from .writer import emit_report, load_report, series_path

__all__ = [
    # Models
    "DomainModel",
    "FunctionSpec",
    "MaskSpec",
    "RunReport",
    "Scenario",
    "TaskPayload",
    "TaskResult",
    "TimingEntry",
    # Loader
    "ScenarioContext",
    "build_context",
    "load_scenario_context",
    "parse_scenario",
    "parse_scenario_context",
    "parse_scenario_data",
    # Runner and writer
    "emit_report",
    "load_report",
    "run_scenario",
    "scenario_hash",
    "series_path",
]
