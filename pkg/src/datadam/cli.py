"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 scenario validation/parse, 3 runtime.
Failures print one JSON object on stderr, e.g.
``{"error": "validation", "field": "params.capacity", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .control import Baseline, Capped, Optimized
from .engine import compare_runs, build_report, make_reference_scenario, run
from .errors import DataDamError, ScenarioFileError, ScenarioParseError, UnknownFieldError
from .io import (load_scenario, metrics_to_dict, report_to_dict, write_report_json, write_scenario,
                 write_trajectory_csv)
from .queueing import Mm1Params, mm1_metrics

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(kind: str, message: str, code: int, **extra) -> int:
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="datadam", description="Reservoir flow-control simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run one scenario and write its trajectory CSV")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--controller", choices=["baseline", "capped", "optimized"],
                   help="override the scenario's controller")
    p.add_argument("--rate", type=float, help="baseline rate when overriding (default: o_optimal)")

    p = sub.add_parser("compare", help="optimized vs constant-rate baseline on one scenario")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--traces", type=Path, help="directory for optimized.csv and baseline.csv")

    p = sub.add_parser("mm1", help="steady-state M/M/1 metrics as JSON")
    p.add_argument("--lambda", dest="lam", required=True, type=float)
    p.add_argument("--mu", required=True, type=float)

    p = sub.add_parser("init", help="write the reference scenario file")
    p.add_argument("--out", required=True, type=Path)
    return parser


def _simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.controller == "baseline":
        rate = scenario.params.o_optimal if args.rate is None else args.rate
        scenario = replace(scenario, controller=Baseline(rate))
    elif args.controller == "capped":
        scenario = replace(scenario, controller=Capped())
    elif args.controller == "optimized":
        scenario = replace(scenario, controller=Optimized())
    result = run(scenario)
    write_trajectory_csv(result, args.out)
    print(json.dumps(metrics_to_dict(result.metrics)))
    return EXIT_OK


def _compare(args) -> int:
    scenario = load_scenario(args.scenario)
    optimized, baseline = compare_runs(scenario)
    report = build_report(optimized.metrics, baseline.metrics)
    write_report_json(report, args.report)
    if args.traces is not None:
        args.traces.mkdir(parents=True, exist_ok=True)
        write_trajectory_csv(optimized, args.traces / "optimized.csv")
        write_trajectory_csv(baseline, args.traces / "baseline.csv")
    print(json.dumps(report_to_dict(report)))
    return EXIT_OK


def _mm1(args) -> int:
    metrics = mm1_metrics(Mm1Params(arrival_rate=args.lam, service_rate=args.mu))
    print(json.dumps(asdict(metrics)))
    return EXIT_OK


def _init(args) -> int:
    write_scenario(make_reference_scenario(), args.out)
    return EXIT_OK


COMMANDS = {"simulate": _simulate, "compare": _compare, "mm1": _mm1, "init": _init}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    try:
        return COMMANDS[args.command](args)
    except ScenarioFileError as exc:
        if isinstance(exc, ScenarioParseError):
            return _fail("parse", str(exc), EXIT_INVALID, line=exc.line, column=exc.column)
        if isinstance(exc, UnknownFieldError):
            return _fail("unknown_field", str(exc), EXIT_INVALID, section=exc.section, fields=exc.names)
        return _fail("validation", str(exc), EXIT_INVALID, field=exc.field)
    except (DataDamError, OSError) as exc:
        return _fail("runtime", str(exc), EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())
