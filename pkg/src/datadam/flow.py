"""Reservoir state and the forward-Euler storage integrator.

Storage evolves as dS/dt = I - O, clamped to [0, capacity].  Volume that
would push storage above capacity is recorded as spill and dropped; outflow
that would drain storage below zero is reduced to what is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CorruptStateError, EmptyRecordsError, InvalidParamsError, InvalidRateError

STEP_COUNT_TOL = 1e-9

# names accepted for SystemParams.storage_penalty
PENALTIES = ("capacity_gap", "overflow")


@dataclass(frozen=True)
class SystemParams:
    """Scalar configuration of one dam.

    Rates are in data units per time unit, volumes in data units.
    ``processing`` and ``bandwidth`` are held constant over a run.

    ``storage_penalty`` selects the storage term of the cost:
    ``"capacity_gap"`` is alpha*(S - capacity)**2, ``"overflow"`` is
    alpha*max(0, S - safe_capacity)**2 with ``safe_capacity`` defaulting
    to ``capacity``.
    """

    capacity: float = 1000.0
    o_max: float = 50.0
    processing: float = 100.0
    bandwidth: float = 80.0
    security_threshold: float = 50.0
    o_optimal: float = 40.0
    alpha: float = 1e-4
    beta: float = 1.0
    duration: float = 200.0
    dt: float = 0.1
    storage_penalty: str = "capacity_gap"
    safe_capacity: float | None = None

    def __post_init__(self):
        for name in ("capacity", "o_max", "processing", "bandwidth", "security_threshold",
                     "o_optimal", "alpha", "beta", "duration", "dt"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise InvalidParamsError(name, f"must be a finite number, got {value!r}")
        if self.capacity <= 0:
            raise InvalidParamsError("capacity", "must be > 0")
        if self.o_max <= 0:
            raise InvalidParamsError("o_max", "must be > 0")
        if self.processing < 0:
            raise InvalidParamsError("processing", "must be >= 0")
        if self.bandwidth < 0:
            raise InvalidParamsError("bandwidth", "must be >= 0")
        if self.dt <= 0:
            raise InvalidParamsError("dt", "must be > 0")
        if self.duration <= 0:
            raise InvalidParamsError("duration", "must be > 0")
        ratio = self.duration / self.dt
        if abs(ratio - round(ratio)) > STEP_COUNT_TOL * max(1.0, ratio):
            raise InvalidParamsError("duration", "must be a whole number of dt steps")
        if not 0 <= self.security_threshold < self.capacity:
            raise InvalidParamsError("security_threshold", "must satisfy 0 <= threshold < capacity")
        if not 0 <= self.o_optimal <= self.o_max:
            raise InvalidParamsError("o_optimal", "must satisfy 0 <= o_optimal <= o_max")
        if self.alpha < 0:
            raise InvalidParamsError("alpha", "must be >= 0")
        if self.beta < 0:
            raise InvalidParamsError("beta", "must be >= 0")
        if self.alpha + self.beta <= 0:
            raise InvalidParamsError("beta", "alpha + beta must be > 0")
        if self.storage_penalty not in PENALTIES:
            raise InvalidParamsError("storage_penalty", f"must be one of {PENALTIES}")
        if self.safe_capacity is not None:
            if not isinstance(self.safe_capacity, (int, float)) or not 0 <= self.safe_capacity <= self.capacity:
                raise InvalidParamsError("safe_capacity", "must satisfy 0 <= safe_capacity <= capacity")

    @property
    def n_steps(self) -> int:
        return round(self.duration / self.dt)

    @property
    def penalty_level(self) -> float:
        """Storage level the cost's storage term is measured against."""
        if self.storage_penalty == "overflow" and self.safe_capacity is not None:
            return self.safe_capacity
        return self.capacity


@dataclass(frozen=True)
class ReservoirState:
    t: float
    storage: float


@dataclass(frozen=True)
class StepRecord:
    t: float
    inflow: float
    outflow_commanded: float
    outflow_actual: float
    storage: float
    spill: float
    step_cost: float


def step_reservoir(state: ReservoirState, inflow: float, outflow_commanded: float,
                   params: SystemParams) -> tuple[ReservoirState, float, float]:
    """Advance storage by one dt.

    Returns ``(new_state, outflow_actual, spill)``.  The actual outflow is
    limited to what the reservoir can supply in the step,
    ``storage/dt + inflow``; anything above capacity spills.
    """
    if not inflow >= 0:
        raise InvalidRateError(f"inflow must be >= 0, got {inflow!r}")
    if not outflow_commanded >= 0:
        raise InvalidRateError(f"outflow must be >= 0, got {outflow_commanded!r}")
    if not 0 <= state.storage <= params.capacity:
        raise CorruptStateError(
            f"storage {state.storage!r} outside [0, {params.capacity}] at t={state.t}")

    dt = params.dt
    outflow_actual = min(outflow_commanded, state.storage / dt + inflow)
    unclamped = state.storage + (inflow - outflow_actual) * dt
    # availability limiting can leave -1e-16 behind
    unclamped = max(unclamped, 0.0)
    if unclamped > params.capacity:
        spill = unclamped - params.capacity
        storage = params.capacity
    else:
        spill = 0.0
        storage = unclamped
    return ReservoirState(state.t + dt, storage), outflow_actual, spill


def mass_balance_residual(records: Sequence[StepRecord], initial_storage: float, dt: float) -> float:
    """Absolute conservation error over a run: in - out - spill - change in storage."""
    if not records:
        raise EmptyRecordsError("mass balance needs at least one record")
    inflow = math.fsum(r.inflow * dt for r in records)
    outflow = math.fsum(r.outflow_actual * dt for r in records)
    spill = math.fsum(r.spill for r in records)
    change = records[-1].storage - initial_storage
    return abs(inflow - change - outflow - spill)
