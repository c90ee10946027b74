"""Ground-truth oracles: exact periods, the separatrix, and a reference
integrator.

Nothing here shares code with the steppers under test; these are the other
side of every accuracy comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    InvalidMomentum,
    ModulusOutOfRange,
    SeparatrixPeriodInfinite,
    ToleranceNotMet,
    Unstable,
)
from .potentials import PotentialSpec, evaluate
from .steppers import State


class Regime(enum.Enum):
    """Pendulum motion class for x0 = 0, classified exactly by p0 vs 2."""

    LIBRATION = "libration"
    SEPARATRIX = "separatrix"
    ROTATION = "rotation"


@dataclass(frozen=True)
class EnergyRecord:
    """Total energy and regime for a pendulum launched from x0 = 0."""

    e: float
    p0: float
    regime: Regime

    @staticmethod
    def from_p0(p0: float) -> "EnergyRecord":
        if p0 < 2.0:
            regime = Regime.LIBRATION
        elif p0 == 2.0:
            regime = Regime.SEPARATRIX
        else:
            regime = Regime.ROTATION
        return EnergyRecord(0.5 * p0 * p0 - 1.0, p0, regime)


@dataclass(frozen=True)
class ReferenceTolerance:
    """Adaptive-integrator tolerances; defaults sit well below every
    acceptance tolerance in the benchmark suite."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-12

    def __post_init__(self):
        for name, value in (("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)):
            if not (0.0 < value <= 1e-8):
                raise ValueError(f"{name} must lie in (0, 1e-8]")


def agm_elliptic_k(k: float) -> float:
    """Complete elliptic integral K(k) via the arithmetic-geometric mean."""
    if not (0.0 <= k < 1.0):
        raise ModulusOutOfRange(f"modulus {k!r} outside [0, 1)")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(60):
        if a == b:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        if abs(a - b) <= 2.0 * (2.0 ** -53) * a:
            break
    return math.pi / (a + b)


def exact_pendulum_period(p0: float) -> float:
    """Exact period for V = -cos x launched from (x, p) = (0, p0).

    Libration: 4 K(p0/2).  Rotation: the x-advance-by-2pi time,
    (2/k) K(1/k) with k = p0/2.
    """
    if not (p0 > 0.0):
        raise InvalidMomentum(f"p0 = {p0!r} must be positive")
    if p0 == 2.0:
        raise SeparatrixPeriodInfinite("period diverges at p0 = 2")
    k = 0.5 * p0
    if k < 1.0:
        return 4.0 * agm_elliptic_k(k)
    return (2.0 / k) * agm_elliptic_k(1.0 / k)


def separatrix_solution(t: float) -> tuple:
    """Exact E = 1 pendulum orbit through (x, p) = (0, 2): returns (x, p).

    x(t) = 4 arctan(exp t) - pi, p(t) = 2 / cosh t, written in overflow-free
    odd-symmetric form.
    """
    if t >= 0.0:
        x = math.pi - 4.0 * math.atan(math.exp(-t))
    else:
        x = 4.0 * math.atan(math.exp(t)) - math.pi
    w = math.exp(-abs(t))
    p = 4.0 * w / (1.0 + w * w)
    return x, p


def leapfrog_harmonic_period(eps: float, omega: float) -> float:
    """Exact period of the leap-frog map on V = omega^2 x^2 / 2.

    2 pi eps / arccos(1 - eps^2 omega^2 / 2), evaluated through the
    cancellation-free identity arccos(1 - z^2/2) = 2 arcsin(z/2).
    """
    z = 0.5 * eps * omega
    if z >= 1.0:
        raise Unstable(f"eps*omega = {eps * omega:.6g} is at or past the limit 2")
    return math.pi * eps / math.asin(z)


def reference_trajectory(
    spec: PotentialSpec,
    s0: State,
    t_grid: Sequence[float],
    tol: ReferenceTolerance = None,
) -> List[State]:
    """High-order adaptive solution of the equations of motion, sampled with
    dense output at t_grid (strictly increasing, all beyond s0.t)."""
    if tol is None:
        tol = ReferenceTolerance()
    grid = [float(t) for t in t_grid]
    if not grid:
        raise ValueError("t_grid must be nonempty")
    prev = s0.t
    for t in grid:
        if not (t > prev):
            raise ValueError("t_grid must be strictly increasing from s0.t")
        prev = t

    def rhs(_t, y):
        return (y[1], -evaluate(spec, y[0]).dv)

    sol = solve_ivp(
        rhs,
        (s0.t, grid[-1]),
        (s0.x + s0.x_lo, s0.p),
        method="DOP853",
        rtol=tol.rel_tol,
        atol=tol.abs_tol,
        dense_output=True,
    )
    if not sol.success:
        raise ToleranceNotMet(sol.message)
    samples = sol.sol(np.asarray(grid))
    return [
        State(t, float(x), float(p))
        for t, x, p in zip(grid, samples[0], samples[1])
    ]
