"""Inflow signal: a sinusoid with additive spike windows and optional noise."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParamsError


@dataclass(frozen=True)
class SpikeWindow:
    """Constant ``boost`` added to the inflow for ``start <= t < end``."""

    start: float
    end: float
    boost: float

    def __post_init__(self):
        if not self.start < self.end:
            raise InvalidParamsError("spikes.start", "start must be < end")
        if self.boost < 0:
            raise InvalidParamsError("spikes.boost", "must be >= 0")

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end


@dataclass(frozen=True)
class InflowSpec:
    base: float = 40.0
    amplitude: float = 10.0
    period: float = 25.0
    spikes: tuple[SpikeWindow, ...] = field(default_factory=tuple)
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        # lists from callers are frozen so the spec stays hashable
        object.__setattr__(self, "spikes", tuple(self.spikes))
        if self.amplitude < 0:
            raise InvalidParamsError("amplitude", "must be >= 0")
        if self.base < self.amplitude:
            raise InvalidParamsError("base", "must be >= amplitude")
        if self.period <= 0:
            raise InvalidParamsError("period", "must be > 0")
        if self.noise_std < 0:
            raise InvalidParamsError("noise_std", "must be >= 0")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidParamsError("seed", "must be a non-negative integer")


def noise_at(seed: int, step_index: int) -> float:
    """Standard normal draw keyed by ``(seed, step_index)``.

    Philox is counter based, so the draw for a step does not depend on
    which other steps were evaluated or in what order.
    """
    bitgen = np.random.Philox(key=seed, counter=[step_index, 0, 0, 0])
    return float(np.random.Generator(bitgen).standard_normal())


def inflow_at(spec: InflowSpec, t: float, step_index: int) -> float:
    rate = spec.base + spec.amplitude * math.sin(2.0 * math.pi * t / spec.period)
    for window in spec.spikes:
        if window.contains(t):
            rate += window.boost
    if spec.noise_std > 0:
        rate += spec.noise_std * noise_at(spec.seed, step_index)
    return max(0.0, rate)


def reference_inflow() -> InflowSpec:
    """Sinusoidal load with surges over [50, 100) and [130, 160).

    Magnitudes are calibrated, not measured: under the capped controller
    storage saturates inside both surges, and a constant release of 40
    runs the reservoir down to its reserve floor in the troughs.
    """
    return InflowSpec(
        base=39.0,
        amplitude=15.0,
        period=25.0,
        spikes=(SpikeWindow(50.0, 100.0, 40.0), SpikeWindow(130.0, 160.0, 40.0)),
    )
