"""Sluice controllers, the quadratic cost, and a brute-force oracle.

Every controller returns a rate inside ``feasible_bounds``: never above
o_max, processing, or bandwidth, and never drawing storage below the
security reserve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateWeightsError, EmptyRecordsError, InvalidParamsError
from .flow import ReservoirState, StepRecord, SystemParams


@dataclass(frozen=True)
class Baseline:
    """Constant commanded rate, clamped only by feasibility."""

    rate: float

    def __post_init__(self):
        if not self.rate >= 0:
            raise InvalidParamsError("controller.rate", "must be >= 0")


@dataclass(frozen=True)
class Capped:
    """Release as much as processing, bandwidth and availability allow, up to o_max."""


@dataclass(frozen=True)
class Optimized:
    """One-step lookahead minimiser of the quadratic storage/outflow cost."""


ControllerSpec = Union[Baseline, Capped, Optimized]


@dataclass(frozen=True)
class FeasibleBounds:
    lo: float
    hi: float

    def clamp(self, value: float) -> float:
        return min(max(value, self.lo), self.hi)


def feasible_bounds(state: ReservoirState, inflow: float, params: SystemParams) -> FeasibleBounds:
    available = max(0.0, (state.storage - params.security_threshold) / params.dt + inflow)
    hi = min(params.o_max, params.processing, params.bandwidth, available)
    return FeasibleBounds(0.0, max(hi, 0.0))


def baseline_outflow(spec: Baseline, bounds: FeasibleBounds) -> float:
    return bounds.clamp(spec.rate)


def capped_outflow(state: ReservoirState, inflow: float, params: SystemParams) -> float:
    # f(S, P, B) taken as the greedy release min(P, B, availability)
    return feasible_bounds(state, inflow, params).hi


def _storage_residual(storage, params: SystemParams):
    # works elementwise on arrays as well as on floats
    gap = storage - params.penalty_level
    if params.storage_penalty == "overflow":
        return np.maximum(gap, 0.0) if isinstance(gap, np.ndarray) else max(gap, 0.0)
    return gap


def step_cost(storage: float, outflow: float, params: SystemParams) -> float:
    return (params.alpha * _storage_residual(storage, params) ** 2
            + params.beta * (outflow - params.o_optimal) ** 2)


def trajectory_cost(records: Sequence[StepRecord], params: SystemParams) -> float:
    """Left Riemann sum of the running cost over a trajectory."""
    if not records:
        raise EmptyRecordsError("trajectory cost needs at least one record")
    return math.fsum(step_cost(r.storage, r.outflow_actual, params) * params.dt for r in records)


def one_step_objective(outflow, state: ReservoirState, inflow: float, params: SystemParams):
    """Running cost evaluated at the storage the outflow would produce next step.

    ``outflow`` may be a float or a numpy array of candidates.
    """
    projected = state.storage + (inflow - outflow) * params.dt
    return (params.alpha * _storage_residual(projected, params) ** 2
            + params.beta * (outflow - params.o_optimal) ** 2)


def unconstrained_optimum(state: ReservoirState, inflow: float, params: SystemParams) -> float:
    dt = params.dt
    denom = params.alpha * dt * dt + params.beta
    if denom <= 0:
        raise DegenerateWeightsError("alpha*dt**2 + beta must be > 0")
    excess = state.storage + inflow * dt - params.penalty_level
    if params.storage_penalty == "overflow" and excess - params.o_optimal * dt <= 0:
        # releasing o_optimal already keeps storage under the penalty level
        return params.o_optimal
    return (params.alpha * dt * excess + params.beta * params.o_optimal) / denom


def optimized_outflow(state: ReservoirState, inflow: float, params: SystemParams) -> float:
    # the objective is convex in outflow, so projecting the stationary point is exact
    bounds = feasible_bounds(state, inflow, params)
    return bounds.clamp(unconstrained_optimum(state, inflow, params))


def grid_search_outflow(state: ReservoirState, inflow: float, params: SystemParams,
                        resolution: int) -> float:
    """Brute-force argmin of the one-step objective on an even grid over the bounds."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    bounds = feasible_bounds(state, inflow, params)
    if bounds.hi <= bounds.lo:
        return bounds.lo
    grid = np.linspace(bounds.lo, bounds.hi, resolution)
    values = one_step_objective(grid, state, inflow, params)
    return float(grid[int(np.argmin(values))])


def command(controller: ControllerSpec, state: ReservoirState, inflow: float,
            params: SystemParams) -> float:
    """Outflow rate the given controller requests for this step."""
    if isinstance(controller, Baseline):
        return baseline_outflow(controller, feasible_bounds(state, inflow, params))
    if isinstance(controller, Capped):
        return capped_outflow(state, inflow, params)
    if isinstance(controller, Optimized):
        return optimized_outflow(state, inflow, params)
    raise TypeError(f"unknown controller {controller!r}")
