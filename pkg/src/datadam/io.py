"""Scenario documents, trajectory CSV, and comparison reports.

Scenario files are versioned JSON.  Unknown keys are rejected at every
level and all parameter invariants are re-checked on load.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, fields
from pathlib import Path

from .control import Baseline, Capped, Optimized
from .engine import ComparisonReport, RunMetrics, RunResult, Scenario
from .errors import InvalidParamsError, ScenarioParseError, ScenarioValidationError, UnknownFieldError
from .flow import StepRecord, SystemParams
from .inflow import InflowSpec, SpikeWindow

SCENARIO_VERSION = 1

CSV_HEADER = ("t", "inflow", "outflow_commanded", "outflow_actual", "storage", "spill", "step_cost")

_PARAM_REQUIRED = ("capacity", "o_max", "processing", "bandwidth", "security_threshold",
                   "o_optimal", "alpha", "beta", "duration", "dt")
_PARAM_OPTIONAL = ("storage_penalty", "safe_capacity")
_INFLOW_REQUIRED = ("base", "amplitude", "period")
_INFLOW_OPTIONAL = ("spikes", "noise_std", "seed")
_CONTROLLER_TYPES = {"baseline": Baseline, "capped": Capped, "optimized": Optimized}


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


# --- scenario documents -------------------------------------------------------

def controller_to_dict(controller) -> dict:
    if isinstance(controller, Baseline):
        return {"type": "baseline", "rate": controller.rate}
    if isinstance(controller, Capped):
        return {"type": "capped"}
    if isinstance(controller, Optimized):
        return {"type": "optimized"}
    raise TypeError(f"unknown controller {controller!r}")


def scenario_to_dict(scenario: Scenario) -> dict:
    p = scenario.params
    params = {name: getattr(p, name) for name in _PARAM_REQUIRED}
    if p.storage_penalty != "capacity_gap" or p.safe_capacity is not None:
        params["storage_penalty"] = p.storage_penalty
        params["safe_capacity"] = p.safe_capacity
    inflow = scenario.inflow
    return {
        "version": SCENARIO_VERSION,
        "params": params,
        "inflow": {
            "base": inflow.base,
            "amplitude": inflow.amplitude,
            "period": inflow.period,
            "spikes": [asdict(w) for w in inflow.spikes],
            "noise_std": inflow.noise_std,
            "seed": inflow.seed,
        },
        "controller": controller_to_dict(scenario.controller),
        "initial_storage": scenario.initial_storage,
    }


def _check_keys(section: str, doc, required, optional=()):
    if not isinstance(doc, dict):
        raise ScenarioValidationError(section, "must be an object")
    unknown = set(doc) - set(required) - set(optional)
    if unknown:
        raise UnknownFieldError(section, unknown)
    for key in required:
        if key not in doc:
            raise ScenarioValidationError(f"{section}.{key}", "missing required field")


def _number(section: str, key: str, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioValidationError(f"{section}.{key}", f"must be a number, got {value!r}")
    return float(value)


def _build(section: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except InvalidParamsError as exc:
        raise ScenarioValidationError(f"{section}.{exc.field}", str(exc).split(": ", 1)[-1]) from exc


def scenario_from_dict(doc) -> Scenario:
    _check_keys("scenario", doc, ("version", "params", "inflow", "controller"), ("initial_storage",))
    if doc["version"] != SCENARIO_VERSION or isinstance(doc["version"], bool):
        raise ScenarioValidationError("version", f"must equal {SCENARIO_VERSION}, got {doc['version']!r}")

    raw = doc["params"]
    _check_keys("params", raw, _PARAM_REQUIRED, _PARAM_OPTIONAL)
    values = {k: _number("params", k, raw[k]) for k in _PARAM_REQUIRED}
    if "storage_penalty" in raw:
        values["storage_penalty"] = raw["storage_penalty"]
    if raw.get("safe_capacity") is not None:
        values["safe_capacity"] = _number("params", "safe_capacity", raw["safe_capacity"])
    params = _build("params", SystemParams, **values)

    raw = doc["inflow"]
    _check_keys("inflow", raw, _INFLOW_REQUIRED, _INFLOW_OPTIONAL)
    spikes = []
    raw_spikes = raw.get("spikes", [])
    if not isinstance(raw_spikes, list):
        raise ScenarioValidationError("inflow.spikes", "must be a list")
    for i, w in enumerate(raw_spikes):
        section = f"inflow.spikes[{i}]"
        _check_keys(section, w, ("start", "end", "boost"))
        spikes.append(_build(section, SpikeWindow,
                             **{k: _number(section, k, w[k]) for k in ("start", "end", "boost")}))
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioValidationError("inflow.seed", "must be a non-negative integer")
    inflow = _build("inflow", InflowSpec,
                    base=_number("inflow", "base", raw["base"]),
                    amplitude=_number("inflow", "amplitude", raw["amplitude"]),
                    period=_number("inflow", "period", raw["period"]),
                    spikes=tuple(spikes),
                    noise_std=_number("inflow", "noise_std", raw.get("noise_std", 0.0)),
                    seed=seed)

    raw = doc["controller"]
    if not isinstance(raw, dict):
        raise ScenarioValidationError("controller", "must be an object")
    kind = raw.get("type")
    if kind not in _CONTROLLER_TYPES:
        raise ScenarioValidationError("controller.type", f"must be one of {sorted(_CONTROLLER_TYPES)}")
    if kind == "baseline":
        _check_keys("controller", raw, ("type", "rate"))
        controller = _build("controller", Baseline, rate=_number("controller", "rate", raw["rate"]))
    else:
        _check_keys("controller", raw, ("type",))
        controller = _CONTROLLER_TYPES[kind]()

    initial = _number("scenario", "initial_storage", doc.get("initial_storage", 0.0))
    return _build("scenario", Scenario, params=params, inflow=inflow,
                  controller=controller, initial_storage=initial)


def load_scenario(path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from exc
    return scenario_from_dict(doc)


def write_scenario(scenario: Scenario, path) -> None:
    atomic_write_text(path, json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


# --- trajectories --------------------------------------------------------------

def trajectory_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([f"{getattr(r, name):.6f}" for name in CSV_HEADER])
    return buf.getvalue()


def write_trajectory_csv(result: RunResult, path) -> None:
    atomic_write_text(path, trajectory_csv(result.records))


def read_trajectory_csv(path) -> list[StepRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected trajectory header {header!r}")
        return [StepRecord(*map(float, row)) for row in reader]


# --- reports -------------------------------------------------------------------

def metrics_to_dict(metrics: RunMetrics) -> dict:
    return {f.name: getattr(metrics, f.name) for f in fields(RunMetrics)}


def report_to_dict(report: ComparisonReport) -> dict:
    return {
        "optimized": metrics_to_dict(report.optimized),
        "baseline": metrics_to_dict(report.baseline),
        "deltas": dict(report.deltas),
    }


def write_report_json(report: ComparisonReport, path) -> None:
    atomic_write_text(path, json.dumps(report_to_dict(report), indent=2) + "\n")


def reference_scenario_path() -> Path:
    """Path of the bundled reference scenario document."""
    return Path(__file__).parent / "data" / "reference.json"
