"""Tests for scenario parsing, running and report output."""

import csv
import importlib
import json
from unittest.mock import patch

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracap.exceptions import ReportWriteError, UsageError, ValidationError
from fracap.scenario import (
    RunReport,
    emit_report,
    load_report,
    load_scenario_context,
    parse_scenario,
    parse_scenario_context,
    parse_scenario_data,
    run_scenario,
    scenario_hash,
    series_path,
)

runner_module = importlib.import_module("fracap.scenario.runner")


def _scenario(**overrides):
    data = {
        "domain": {"type": "interval", "bounds": [0.0, 1.0]},
        "resolution": 16,
        "s": 0.5,
        "q": 2.0,
        "p": 2.0,
        "task": "capacity",
        "payload": {"set": {"cells": [7, 8]}},
    }
    data.update(overrides)
    return data


class TestParseScenario:
    """Tests for parse_scenario_data and parse_scenario."""

    def test_defaults(self):
        """Test omitted fields get their defaults."""
        scenario = parse_scenario_data(_scenario())
        assert scenario.seed == 0
        assert scenario.output is None
        assert scenario.payload.epsilon == 1e-6
        assert scenario.payload.tail_start == 1
        assert scenario.payload.solver.max_iterations == 50_000
        assert scenario.payload.solver.gradient_tolerance == 1e-8

    def test_invalid_smoothness(self):
        """Test s = 1 is rejected with an error naming s."""
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario_data(_scenario(s=1.0))
        assert any(error.startswith("s:") for error in excinfo.value.errors)

    def test_all_errors_reported(self):
        """Test several schema errors are reported together."""
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario_data(_scenario(s=1.0, task="bogus"))
        errors = excinfo.value.errors
        assert len(errors) >= 2
        assert any(error.startswith("task") for error in errors)

    def test_missing_payload_field(self):
        """Test a task without its required payload is rejected."""
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario_data(_scenario(payload={}))
        assert any("payload.set" in error for error in excinfo.value.errors)

    def test_semantic_errors(self):
        """Test out-of-range indices and bad expressions are collected."""
        payload = {"set": {"cells": [99]}, "function": {"expression": "x +"}}
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario_data(_scenario(payload=payload))
        errors = excinfo.value.errors
        assert any(error.startswith("payload.set") for error in errors)
        assert any(error.startswith("payload.function") for error in errors)

    def test_invalid_exponent(self):
        """Test constant exponents at most 1 are rejected."""
        with pytest.raises(ValidationError):
            parse_scenario_data(_scenario(q=1.0))

    def test_rectangle_resolution(self):
        """Test rectangle sides must be multiples of the cell size."""
        domain = {"type": "rectangle", "bounds": [[0.0, 1.0], [0.0, 0.3]]}
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario_data(_scenario(domain=domain, resolution=4))
        assert any(error.startswith("resolution") for error in excinfo.value.errors)

    def test_not_an_object(self):
        """Test non-object data is rejected."""
        with pytest.raises(ValidationError):
            parse_scenario_data([1, 2, 3])

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        with pytest.raises(ValidationError):
            parse_scenario_data(_scenario(colour="blue"))

    def test_missing_file(self, tmp_path):
        """Test a missing file raises ValidationError."""
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario(tmp_path / "missing.json")
        assert "Cannot read" in excinfo.value.errors[0]

    def test_invalid_json(self, tmp_path):
        """Test malformed JSON raises ValidationError."""
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValidationError) as excinfo:
            parse_scenario(path)
        assert "Invalid JSON" in excinfo.value.errors[0]

    def test_file_round_trip(self, tmp_path):
        """Test a scenario file parses to the same model as its data."""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(_scenario()), encoding="utf-8")
        assert parse_scenario(path) == parse_scenario_data(_scenario())

    @settings(max_examples=1000, deadline=None)
    @given(
        key=st.sampled_from(["domain", "resolution", "s", "q", "p", "task", "payload", "seed"]),
        value=st.one_of(
            st.none(),
            st.booleans(),
            st.integers(-5, 64),
            st.floats(allow_nan=True, allow_infinity=True),
            st.text(max_size=12),
            st.lists(st.integers(-3, 40), max_size=4),
            st.dictionaries(st.sampled_from(["type", "bounds", "cells", "set"]), st.integers(0, 3)),
        ),
    )
    def test_fuzzed_scenarios(self, key, value):
        """Test mutated scenarios either parse or raise ValidationError."""
        data = _scenario()
        data[key] = value
        try:
            parse_scenario_data(data)
        except ValidationError as e:
            assert e.errors


class TestRunScenario:
    """Tests for run_scenario."""

    def test_modular_of_one(self):
        """Test the modular of u = 1 on (0, 1) is 1."""
        scenario = parse_scenario_data(
            _scenario(task="modular", payload={"function": {"expression": "1"}})
        )
        report = run_scenario(scenario)
        result = report.results[0]
        assert result.task == "modular"
        assert result.verdict == "pass"
        assert result.data["total"] == pytest.approx(1.0, abs=1e-12)
        assert result.data["gagliardo_term"] == 0.0
        assert len(result.data["gradient"]) == 16

    def test_norm(self):
        """Test the norm task checks the equivalence constant."""
        scenario = parse_scenario_data(
            _scenario(task="norm", payload={"function": {"expression": "x"}})
        )
        result = run_scenario(scenario).results[0]
        assert result.verdict == "pass"
        assert result.data["equivalence_holds"]

    def test_capacity(self):
        """Test the capacity task reports the equilibrium."""
        report = run_scenario(parse_scenario_data(_scenario()))
        result = report.results[0]
        assert result.verdict == "pass"
        assert result.data["value"] > 0
        assert report.passed

    def test_axioms_on_trivial_family(self):
        """Test every property holds on the empty set and the closure."""
        scenario = parse_scenario_data(
            _scenario(task="axioms", payload={"sets": [{}, {"whole": True}]})
        )
        result = run_scenario(scenario).results[0]
        assert result.verdict == "pass"
        assert all(check["passed"] for check in result.data["checks"])
        assert result.data["capacities"][0] == 0.0

    def test_solver_failure(self):
        """Test a capped solver becomes a fail entry with the best iterate."""
        payload = {"set": {"cells": [7, 8]}, "solver": {"max_iterations": 1}}
        report = run_scenario(parse_scenario_data(_scenario(payload=payload)))
        result = report.results[0]
        assert result.verdict == "fail"
        assert result.data["iterations"] == 1
        assert result.data["best_value"] > 0
        assert not report.passed

    def test_inapplicable_certificate(self):
        """Test a large first gap is reported as inapplicable, not failed."""
        payload = {"functions": [{"expression": "0"}, {"expression": "x"}, {"expression": "x"}]}
        report = run_scenario(parse_scenario_data(_scenario(task="certificate", payload=payload)))
        result = report.results[0]
        assert result.verdict == "inapplicable"
        assert result.data["index"] == 1
        assert report.passed

    def test_certificate_with_limit(self):
        """Test a constant sequence certifies and adds a limit entry."""
        payload = {
            "functions": [{"expression": "x"}, {"expression": "x"}],
            "limit": {"expression": "x"},
        }
        report = run_scenario(parse_scenario_data(_scenario(task="certificate", payload=payload)))
        assert [r.task for r in report.results] == ["certificate", "limit_certificate"]
        assert all(r.verdict == "pass" for r in report.results)

    def test_boundary_series(self):
        """Test the boundary task emits one series point per resolution."""
        scenario = parse_scenario_data(
            _scenario(task="boundary", resolution=[4, 8, 16], payload={})
        )
        report = run_scenario(scenario)
        polarity = report.results[0]
        assert polarity.task == "boundary_polarity"
        assert [point.resolution for point in polarity.series] == [4, 8, 16]

    def test_removability_of_empty_set(self):
        """Test removing nothing is removable."""
        scenario = parse_scenario_data(_scenario(task="removability", payload={"removed": {}}))
        result = run_scenario(scenario).results[0]
        assert result.verdict == "pass"
        assert result.data["capacity_of_removed"] == 0.0

    def test_deterministic(self):
        """Test two runs give identical deterministic output."""
        scenario = parse_scenario_data(
            _scenario(task="axioms", payload={"sets": [{"cells": [3]}], "random_sets": 3}, seed=7)
        )
        first = run_scenario(scenario).deterministic_json()
        second = run_scenario(scenario).deterministic_json()
        assert first == second

    def test_hash_ignores_output(self):
        """Test the scenario hash does not depend on the output path."""
        a = parse_scenario_data(_scenario())
        b = parse_scenario_data(_scenario(output="elsewhere.json"))
        assert scenario_hash(a) == scenario_hash(b)
        assert scenario_hash(a) != scenario_hash(parse_scenario_data(_scenario(s=0.25)))

    def test_reuses_loaded_context(self, tmp_path):
        """Test a context from the loader is used without rebuilding grid and field."""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(_scenario()), encoding="utf-8")
        ctx = load_scenario_context(path)
        with patch.object(runner_module, "build_context") as build:
            report = run_scenario(ctx.scenario, ctx)
        build.assert_not_called()
        assert report.passed
        assert report.deterministic_json() == run_scenario(ctx.scenario).deterministic_json()

    def test_context_for_other_scenario(self):
        """Test a context built for another scenario is rejected."""
        ctx = parse_scenario_context(_scenario())
        other = parse_scenario_data(_scenario(s=0.25))
        with pytest.raises(UsageError):
            run_scenario(other, ctx)


class TestReportWriter:
    """Tests for emit_report and load_report."""

    def test_round_trip(self, tmp_path):
        """Test a written report loads back unchanged."""
        report = run_scenario(parse_scenario_data(_scenario()))
        path = tmp_path / "out" / "report.json"
        assert emit_report(report, path) == [path]
        assert load_report(path).deterministic_json() == report.deterministic_json()

    def test_series_csv(self, tmp_path):
        """Test a three-point series becomes a header plus three rows."""
        scenario = parse_scenario_data(
            _scenario(task="boundary", resolution=[4, 8, 16], payload={})
        )
        path = tmp_path / "report.json"
        written = emit_report(run_scenario(scenario), path)
        assert written == [path, series_path(path, 0)]
        with open(written[1], newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["resolution", "value"]
        assert [row[0] for row in rows[1:]] == ["4", "8", "16"]

    def test_series_names(self, tmp_path):
        """Test series files are numbered after the first."""
        path = tmp_path / "report.json"
        assert series_path(path, 0).name == "report_series.csv"
        assert series_path(path, 1).name == "report_series_2.csv"

    def test_empty_results(self, tmp_path):
        """Test a report without results writes only the JSON."""
        report = RunReport(tool_version="0.1.0", scenario_hash="0" * 64)
        path = tmp_path / "empty.json"
        assert emit_report(report, path) == [path]
        assert load_report(path).results == []

    def test_write_error(self, tmp_path):
        """Test an unwritable destination raises ReportWriteError."""
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        report = RunReport(tool_version="0.1.0", scenario_hash="0" * 64)
        with pytest.raises(ReportWriteError):
            emit_report(report, blocker / "report.json")

    def test_load_invalid(self, tmp_path):
        """Test loading something that is not a report fails."""
        path = tmp_path / "other.json"
        path.write_text('{"hello": 1}', encoding="utf-8")
        with pytest.raises(ReportWriteError):
            load_report(path)
        with pytest.raises(ReportWriteError):
            load_report(tmp_path / "missing.json")
