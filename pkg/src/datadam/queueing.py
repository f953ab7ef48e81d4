"""Steady-state M/M/1 model of the processing queue behind the sluices."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyRecordsError, InvalidRateError, UnstableQueueError


@dataclass(frozen=True)
class Mm1Params:
    arrival_rate: float
    service_rate: float


@dataclass(frozen=True)
class Mm1Metrics:
    rho: float
    l: float  # noqa: E741  mean number in system
    w: float  # mean time in system
    lq: float
    wq: float


def mm1_metrics(params: Mm1Params) -> Mm1Metrics:
    lam, mu = params.arrival_rate, params.service_rate
    if not (math.isfinite(mu) and mu > 0):
        raise InvalidRateError(f"service rate must be > 0, got {mu!r}")
    if not (math.isfinite(lam) and lam >= 0):
        raise InvalidRateError(f"arrival rate must be >= 0, got {lam!r}")
    if lam >= mu:
        raise UnstableQueueError(f"arrival rate {lam} >= service rate {mu}")
    rho = lam / mu
    w = 1.0 / (mu - lam)
    wq = rho / (mu - lam)
    # L and Lq via Little's law so the identity holds by construction
    return Mm1Metrics(rho=rho, l=lam * w, w=w, lq=lam * wq, wq=wq)


def downstream_report(run, params) -> Mm1Metrics:
    """Queue metrics when the run's mean release feeds a server of rate ``processing``."""
    records = run.records
    if not records:
        raise EmptyRecordsError("run has no records")
    lam = math.fsum(r.outflow_actual for r in records) / len(records)
    return mm1_metrics(Mm1Params(arrival_rate=lam, service_rate=params.processing))
