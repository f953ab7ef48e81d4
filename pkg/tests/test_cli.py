import json
import subprocess
import sys

import pytest

from datadam import make_reference_scenario
from datadam.cli import main
from datadam.io import load_scenario, read_trajectory_csv


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "reference.json"
    assert main(["init", "--out", str(path)]) == 0
    return path


def _error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return json.loads(err[0])


def test_init_writes_reference(scenario_file):
    assert load_scenario(scenario_file) == make_reference_scenario()


def test_simulate(tmp_path, scenario_file, capsys):
    out = tmp_path / "run.csv"
    assert main(["simulate", "--scenario", str(scenario_file), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 2001
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["max_storage"] <= 1000.0


def test_simulate_controller_override(tmp_path, scenario_file):
    out = tmp_path / "run.csv"
    assert main(["simulate", "--scenario", str(scenario_file), "--out", str(out),
                 "--controller", "capped"]) == 0
    assert max(r.outflow_actual for r in read_trajectory_csv(out)) == 50.0
    assert main(["simulate", "--scenario", str(scenario_file), "--out", str(out),
                 "--controller", "baseline", "--rate", "30"]) == 0
    assert max(r.outflow_actual for r in read_trajectory_csv(out)) == 30.0


def test_compare_with_traces(tmp_path, scenario_file):
    report, traces = tmp_path / "report.json", tmp_path / "traces"
    assert main(["compare", "--scenario", str(scenario_file), "--report", str(report),
                 "--traces", str(traces)]) == 0
    doc = json.loads(report.read_text())
    assert doc["optimized"]["avg_storage"] < doc["baseline"]["avg_storage"]
    assert sorted(p.name for p in traces.iterdir()) == ["baseline.csv", "optimized.csv"]


def test_mm1(capsys):
    assert main(["mm1", "--lambda", "40", "--mu", "100"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rho"] == pytest.approx(0.4)
    assert doc["l"] == pytest.approx(2 / 3)


def test_mm1_unstable_is_runtime_error(capsys):
    assert main(["mm1", "--lambda", "50", "--mu", "50"]) == 3
    assert _error_line(capsys)["error"] == "runtime"


def test_usage_error(capsys):
    assert main(["simulate", "--scenario", "x.json"]) == 1
    assert _error_line(capsys)["error"] == "usage"


def test_validation_error(tmp_path, scenario_file, capsys):
    doc = json.loads(scenario_file.read_text())
    doc["params"]["capacity"] = -1
    scenario_file.write_text(json.dumps(doc))
    assert main(["simulate", "--scenario", str(scenario_file), "--out", str(tmp_path / "x.csv")]) == 2
    err = _error_line(capsys)
    assert err["error"] == "validation" and err["field"] == "params.capacity"


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["compare", "--scenario", str(bad), "--report", str(tmp_path / "r.json")]) == 2
    err = _error_line(capsys)
    assert err["error"] == "parse" and err["line"] == 1


def test_unknown_field_error(tmp_path, scenario_file, capsys):
    doc = json.loads(scenario_file.read_text())
    doc["extra"] = True
    scenario_file.write_text(json.dumps(doc))
    assert main(["simulate", "--scenario", str(scenario_file), "--out", str(tmp_path / "x.csv")]) == 2
    assert _error_line(capsys)["error"] == "unknown_field"


def test_missing_file_is_runtime(tmp_path, capsys):
    assert main(["simulate", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path / "x.csv")]) == 3
    assert _error_line(capsys)["error"] == "runtime"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "datadam", "mm1", "--lambda", "0", "--mu", "50"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["w"] == pytest.approx(0.02)
