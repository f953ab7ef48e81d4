import json

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from datadam import Baseline, Capped, InflowSpec, Optimized, Scenario, SpikeWindow, SystemParams, compare, run
from datadam import make_reference_scenario
from datadam.errors import ScenarioParseError, ScenarioValidationError, UnknownFieldError
from datadam.io import (CSV_HEADER, load_scenario, read_trajectory_csv, reference_scenario_path,
                        report_to_dict, scenario_from_dict, scenario_to_dict, trajectory_csv,
                        write_report_json, write_scenario, write_trajectory_csv)


def _doc():
    return scenario_to_dict(make_reference_scenario())


def _write(tmp_path, doc):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    return path


def test_bundled_reference_matches_constructor():
    assert load_scenario(reference_scenario_path()) == make_reference_scenario()


def test_negative_capacity_names_field(tmp_path):
    doc = _doc()
    doc["params"]["capacity"] = -1
    with pytest.raises(ScenarioValidationError) as info:
        load_scenario(_write(tmp_path, doc))
    assert "capacity" in info.value.field


def test_baseline_needs_rate(tmp_path):
    doc = _doc()
    doc["controller"] = {"type": "baseline"}
    with pytest.raises(ScenarioValidationError) as info:
        load_scenario(_write(tmp_path, doc))
    assert info.value.field == "controller.rate"


@pytest.mark.parametrize("section", [None, "params", "inflow", "controller"])
def test_unknown_fields_rejected(tmp_path, section):
    doc = _doc()
    (doc if section is None else doc[section])["surprise"] = 1
    with pytest.raises(UnknownFieldError):
        load_scenario(_write(tmp_path, doc))


def test_version_checked(tmp_path):
    doc = _doc()
    doc["version"] = 2
    with pytest.raises(ScenarioValidationError):
        load_scenario(_write(tmp_path, doc))


def test_parse_error_has_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "version": 1,\n  "params": {oops}\n}')
    with pytest.raises(ScenarioParseError) as info:
        load_scenario(path)
    assert info.value.line == 3


def test_optional_fields_default(tmp_path):
    doc = _doc()
    del doc["initial_storage"]
    for key in ("noise_std", "seed", "spikes"):
        del doc["inflow"][key]
    s = load_scenario(_write(tmp_path, doc))
    assert s.initial_storage == 0.0
    assert s.inflow.noise_std == 0.0 and s.inflow.seed == 0 and s.inflow.spikes == ()


def test_plain_params_omit_penalty_keys():
    doc = scenario_to_dict(Scenario())
    assert set(doc["params"]) == {"capacity", "o_max", "processing", "bandwidth", "security_threshold",
                                  "o_optimal", "alpha", "beta", "duration", "dt"}


scenarios = st.builds(
    Scenario,
    params=st.builds(SystemParams, alpha=st.floats(0, 1), beta=st.floats(0.01, 5),
                     storage_penalty=st.sampled_from(["capacity_gap", "overflow"]),
                     safe_capacity=st.one_of(st.none(), st.floats(0, 1000))),
    inflow=st.builds(InflowSpec, base=st.floats(20, 60), amplitude=st.floats(0, 20),
                     period=st.floats(1, 50),
                     spikes=st.lists(st.builds(SpikeWindow, start=st.floats(0, 100), end=st.floats(101, 200),
                                               boost=st.floats(0, 50)), max_size=3),
                     noise_std=st.floats(0, 5), seed=st.integers(0, 2**31)),
    controller=st.one_of(st.builds(Baseline, rate=st.floats(0, 60)), st.just(Capped()), st.just(Optimized())),
    initial_storage=st.floats(0, 1000),
)


@settings(max_examples=50)
@given(scenarios)
def test_scenario_roundtrip(tmp_path_factory, scenario):
    path = tmp_path_factory.mktemp("rt") / "s.json"
    write_scenario(scenario, path)
    assert load_scenario(path) == scenario
    assert scenario_from_dict(scenario_to_dict(scenario)) == scenario


def _one_step():
    p = SystemParams(duration=0.1)
    return run(Scenario(p, InflowSpec(40.0, 0.0), Baseline(40.0), initial_storage=100.0))


def test_csv_one_step(tmp_path):
    path = tmp_path / "t.csv"
    write_trajectory_csv(_one_step(), path)
    raw = path.read_bytes()
    lines = raw.decode().split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    # step cost 1e-4 * (100 - 1000)**2
    assert lines[1] == "0.000000,40.000000,40.000000,40.000000,100.000000,0.000000,81.000000"
    assert lines[2:] == [""]
    assert b"\r" not in raw


def test_csv_reload(tmp_path):
    result = run(make_reference_scenario())
    path = tmp_path / "t.csv"
    write_trajectory_csv(result, path)
    back = read_trajectory_csv(path)
    assert len(back) == 2000
    for a, b in zip(back, result.records):
        assert a.storage == pytest.approx(b.storage, abs=5e-7)
        assert a.outflow_actual == pytest.approx(b.outflow_actual, abs=5e-7)
    assert trajectory_csv(result.records) == path.read_text()


def test_report_json(tmp_path):
    report = compare(make_reference_scenario())
    path = tmp_path / "r.json"
    write_report_json(report, path)
    doc = json.loads(path.read_text())
    assert list(doc) == ["optimized", "baseline", "deltas"]
    assert list(doc["optimized"]) == ["avg_storage", "total_outflow", "total_spill", "max_storage",
                                      "time_at_capacity", "trajectory_cost"]
    assert doc == report_to_dict(report)
    assert doc["optimized"]["total_outflow"] > doc["baseline"]["total_outflow"]


def test_zero_inflow_report(tmp_path):
    report = compare(Scenario(SystemParams(), InflowSpec(0.0, 0.0)))
    path = tmp_path / "r.json"
    write_report_json(report, path)
    doc = json.loads(path.read_text())
    # an empty dam still pays cost: storage and release both sit away from their targets
    for leg in ("optimized", "baseline"):
        for key, value in doc[leg].items():
            if key != "trajectory_cost":
                assert value == 0.0, key
    assert all(v == 0.0 for v in doc["deltas"].values())


def test_atomic_write_leaves_no_temp(tmp_path):
    write_scenario(make_reference_scenario(), tmp_path / "s.json")
    assert [p.name for p in tmp_path.iterdir()] == ["s.json"]
