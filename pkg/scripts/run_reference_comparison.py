"""Run the bundled reference scenario under both controllers and write the results.

    python scripts/run_reference_comparison.py --out results/
"""

import argparse
import json
from pathlib import Path

from datadam import compare_runs, make_reference_scenario
from datadam.engine import build_report
from datadam.io import report_to_dict, write_report_json, write_trajectory_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()

    opt, base = compare_runs(make_reference_scenario())
    report = build_report(opt.metrics, base.metrics)
    args.out.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(opt, args.out / "optimized.csv")
    write_trajectory_csv(base, args.out / "baseline.csv")
    write_report_json(report, args.out / "report.json")
    print(json.dumps(report_to_dict(report), indent=2))


if __name__ == "__main__":
    main()
