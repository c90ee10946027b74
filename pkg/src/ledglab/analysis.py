"""Measurement instruments: period estimation, energy drift, observed order.

Period estimation locates upward crossings of the (unwrapped) position
through its start level by cubic Hermite interpolation inside the bracketing
step, refined by a single Newton pass on the interpolant.  Event phases are
kept as (integer step, fractional offset) pairs so that long runs do not pay
float resolution on the step counter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateFit, NoCycleDetected
from .potentials import PENDULUM, PotentialSpec, evaluate
from .steppers import (
    SchemeId,
    State,
    StepParams,
    _make_stepper,
    delta_of,
    total_energy,
)

TWO_PI = 2.0 * math.pi

DEFAULT_N_CYCLES = 100
DEFAULT_STEP_BUDGET = 10 ** 8


@dataclass(frozen=True)
class PeriodEstimate:
    """Measured period from (n_cycles + 1) located events."""

    period: float
    n_cycles: int
    t_first: float
    t_last: float
    uncertainty: float


@dataclass(frozen=True)
class SweepRecord:
    """One cell of an accuracy sweep."""

    scheme: str
    p0: float
    eps: float
    rel_period_error: float
    energy_drift: float
    wall_time: float
    status: str = "ok"


def _hermite_event(x0: float, m0: float, x1: float, m1: float) -> Tuple[float, float]:
    """Crossing of the cubic Hermite interpolant through (x0, m0), (x1, m1).

    Positions are already shifted so the event level is zero; slopes are in
    step units.  Returns (s, residual) with s the secant root refined by one
    Newton pass and residual the remaining |H(s)/H'(s)| in step units.
    """

    def val(s):
        s2 = s * s
        s3 = s2 * s
        return (
            (2.0 * s3 - 3.0 * s2 + 1.0) * x0
            + (s3 - 2.0 * s2 + s) * m0
            + (3.0 * s2 - 2.0 * s3) * x1
            + (s3 - s2) * m1
        )

    def deriv(s):
        s2 = s * s
        return (
            (6.0 * s2 - 6.0 * s) * x0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (6.0 * s - 6.0 * s2) * x1
            + (3.0 * s2 - 2.0 * s) * m1
        )

    s = x0 / (x0 - x1)
    dh = deriv(s)
    if dh != 0.0:
        s = s - val(s) / dh
    if not (-0.5 <= s <= 1.5):
        s = x0 / (x0 - x1)
    dh = deriv(s)
    residual = abs(val(s) / dh) if dh != 0.0 else abs(val(s))
    return s, residual


class _EventScanner:
    """Streams trajectory samples and records upward level crossings.

    For libration the level is fixed at zero; for rotation the level climbs
    by 2 pi after each event.  Samples arrive as (index, x, x_lo, p) and are
    compared against the level through the exact big-minus-big difference so
    that interpolation stays well conditioned for unwrapped positions.
    """

    def __init__(self, eps: float, rotation: bool, n_events: int):
        self.eps = eps
        self.rotation = rotation
        self.n_events = n_events
        self.events: List[Tuple[int, float]] = []
        self.residuals: List[float] = []
        self._level_count = 0
        self._prev: Optional[Tuple[int, float, float, float]] = None

    def done(self) -> bool:
        return len(self.events) >= self.n_events

    def _xi(self, x: float, x_lo: float) -> float:
        level = self._level_count * TWO_PI if self.rotation else 0.0
        return (x - level) + x_lo

    def _record_exact(self, index: int) -> None:
        self.events.append((index, 0.0))
        self.residuals.append(0.0)
        if self.rotation:
            self._level_count += 1

    def push(self, index: int, x: float, x_lo: float, p: float) -> None:
        if self._prev is not None and not self.done():
            i0, x0, x0_lo, p0 = self._prev
            while not self.done():
                xi0 = self._xi(x0, x0_lo)
                if xi0 == 0.0:
                    break  # previous sample sat on the level; recorded already
                xi1 = self._xi(x, x_lo)
                if not (xi0 < 0.0 < xi1):
                    break
                s, residual = _hermite_event(
                    xi0, self.eps * p0, xi1, self.eps * p
                )
                self.events.append((i0, s))
                self.residuals.append(residual)
                if not self.rotation:
                    break
                self._level_count += 1  # rescan against the next level
        if not self.done() and self._xi(x, x_lo) == 0.0 and p > 0.0:
            self._record_exact(index)
        self._prev = (index, x, x_lo, p)

    def estimate(self, n_cycles: int) -> PeriodEstimate:
        i0, s0 = self.events[0]
        i1, s1 = self.events[-1]
        span_steps = (i1 - i0) + (s1 - s0)
        period = span_steps * self.eps / n_cycles
        uncertainty = (
            max(self.residuals[0], self.residuals[-1]) * self.eps / n_cycles
        )
        return PeriodEstimate(
            period=period,
            n_cycles=n_cycles,
            t_first=(i0 + s0) * self.eps,
            t_last=(i1 + s1) * self.eps,
            uncertainty=uncertainty,
        )


def _measure(
    scheme: SchemeId,
    spec: PotentialSpec,
    p0: float,
    params: StepParams,
    n_cycles: int,
    max_steps: int,
    track_energy: bool,
):
    """Run the scheme from (0, 0, p0) until n_cycles + 1 events are found.

    Returns (PeriodEstimate, max energy drift or None).
    """
    rotation = spec.kind == PENDULUM and p0 > 2.0
    scanner = _EventScanner(params.eps, rotation, n_cycles + 1)
    step = _make_stepper(scheme, spec, params)
    s = State(0.0, 0.0, p0)
    drift = 0.0
    e0 = total_energy(spec, s) if track_energy else 0.0
    scanner.push(0, s.x, s.x_lo, s.p)
    i = 0
    while not scanner.done():
        if i >= max_steps:
            raise NoCycleDetected(
                f"{len(scanner.events)} of {n_cycles + 1} events within "
                f"{max_steps} steps"
            )
        s, _diag = step(s)
        i += 1
        scanner.push(i, s.x, s.x_lo, s.p)
        if track_energy:
            err = abs(total_energy(spec, s) - e0)
            if err > drift:
                drift = err
    return scanner.estimate(n_cycles), (drift if track_energy else None)


def estimate_period(
    scheme: SchemeId,
    spec: PotentialSpec,
    p0: float,
    params: StepParams,
    n_cycles: int = DEFAULT_N_CYCLES,
    max_steps: int = DEFAULT_STEP_BUDGET,
) -> PeriodEstimate:
    """Measure the scheme's period starting from (x, p) = (0, p0).

    Libration locates upward zero crossings of x; rotation (pendulum with
    p0 > 2) locates crossings of the unwrapped x through multiples of 2 pi.
    The period is the event span divided by n_cycles.
    """
    if n_cycles < 10:
        raise ValueError("n_cycles must be at least 10")
    estimate, _ = _measure(scheme, spec, p0, params, n_cycles, max_steps, False)
    return estimate


def energy_drift(trajectory: Iterable[State], spec: PotentialSpec) -> float:
    """max_n |E_n - E_0| over the given states."""
    it = iter(trajectory)
    try:
        first = next(it)
    except StopIteration:
        raise ValueError("trajectory must be nonempty") from None
    e0 = total_energy(spec, first)
    drift = 0.0
    for s in it:
        err = abs(total_energy(spec, s) - e0)
        if err > drift:
            drift = err
    return drift


def observed_order(errors: Sequence[Tuple[float, float]]) -> float:
    """Least-squares slope of log(error) against log(eps)."""
    if len(errors) < 4:
        raise ValueError("need at least 4 (eps, error) points")
    eps = np.array([e for e, _ in errors], dtype=float)
    err = np.array([v for _, v in errors], dtype=float)
    if np.any(err <= 0.0) or np.any(eps <= 0.0):
        raise ValueError("eps and error values must be positive")
    log_eps = np.log(eps)
    if np.ptp(log_eps) == 0.0:
        raise DegenerateFit("zero variance in log(eps)")
    slope, _intercept = np.polyfit(log_eps, np.log(err), 1)
    return float(slope)


def delta_profile(
    spec: PotentialSpec,
    eps: float,
    x_grid: Sequence[float],
    params: Optional[StepParams] = None,
) -> List[Tuple[float, float]]:
    """Tabulate delta(x)/eps over the grid."""
    out = []
    for x in x_grid:
        d2v = evaluate(spec, x).d2v
        out.append((x, delta_of(eps, d2v, params) / eps))
    return out
