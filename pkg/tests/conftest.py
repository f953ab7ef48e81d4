from dataclasses import replace

import pytest

from datadam import Baseline, Capped, InflowSpec, Optimized, Scenario, SpikeWindow, make_reference_scenario

CONTROLLERS = {
    "baseline": Baseline(40.0),
    "capped": Capped(),
    "optimized": Optimized(),
}


def scenario_matrix():
    """Named scenarios used by the conservation and bounds suites."""
    ref = make_reference_scenario()
    params = ref.params
    return {
        "reference": ref,
        "zero-inflow": Scenario(params, InflowSpec(base=0.0, amplitude=0.0), initial_storage=500.0),
        "constant-equilibrium": Scenario(params, InflowSpec(base=40.0, amplitude=0.0), initial_storage=500.0),
        "spike-only": Scenario(params, InflowSpec(
            base=0.0, amplitude=0.0,
            spikes=(SpikeWindow(50.0, 100.0, 80.0), SpikeWindow(130.0, 160.0, 80.0)))),
    }


def matrix_cases():
    return [(sname, cname, replace(s, controller=c))
            for sname, s in scenario_matrix().items()
            for cname, c in CONTROLLERS.items()]


# acceptance summary: one line per criterion at the end of the session

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion this test gates")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    n, text = marker.args
    ok = rep.passed if rep.when == "call" else False
    prev = _CRITERIA.get(n, (text, True))
    _CRITERIA[n] = (text, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        text, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
