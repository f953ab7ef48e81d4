"""Discrete-time reservoir simulator with pluggable sluice controllers."""

from .control import (Baseline, Capped, FeasibleBounds, Optimized, baseline_outflow, capped_outflow,
                      feasible_bounds, grid_search_outflow, optimized_outflow, step_cost, trajectory_cost)
from .engine import (ComparisonReport, RunMetrics, RunResult, Scenario, compare, compare_runs,
                     make_reference_scenario, run, summarize)
from .flow import ReservoirState, StepRecord, SystemParams, mass_balance_residual, step_reservoir
from .inflow import InflowSpec, SpikeWindow, inflow_at
from .queueing import Mm1Metrics, Mm1Params, downstream_report, mm1_metrics

__version__ = "0.1.0"
