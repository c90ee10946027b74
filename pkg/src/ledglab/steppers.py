"""One-step schemes: leap-frog, discrete gradient variants, and the predictor.

All schemes advance physical time by eps per step; the discrete-gradient
family replaces eps by an effective step delta inside the difference
equations only.  The corrector is a scalar root solve in the position
increment, driven to the rounding floor so that the algebraic energy
identity of the scheme survives 1e5-step runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from ._accurate import advance_position, div_rem, two_prod, two_sum
from .errors import LedgLabError, NoConvergence, NotAStableEquilibrium, StepTooLarge
from .potentials import PotentialSpec, _dg_of_increment, _dg_slope, evaluate

_U = 2.0 ** -53

DEFAULT_SOLVER_TOL = 1e-14
DEFAULT_MAX_ITER = 50
DEFAULT_SERIES_THRESHOLD = 1e-8  # on (eps*omega/2)^2
DEFAULT_DELTA_CAP_MARGIN = 0.1


class State(NamedTuple):
    """Trajectory point (t, x, p).

    x_lo is a compensation word: the position is x + x_lo with |x_lo| below
    half an ulp of x.  It exists so that long rotations (x growing without
    bound) do not shed ulp-sized position noise into conserved quantities.
    Plain ``State(t, x, p)`` is always valid.
    """

    t: float
    x: float
    p: float
    x_lo: float = 0.0


class StepDiagnostics(NamedTuple):
    """Per-step bookkeeping emitted alongside the new state."""

    omega_n: float
    delta_n: float
    corrector_iters: int
    predictor_used: bool


class LinearizedState(NamedTuple):
    """Offset coordinates around a frozen expansion point x_ref."""

    x_ref: float
    xi: float
    p: float

    @property
    def x(self) -> float:
        return self.x_ref + self.xi


@dataclass(frozen=True)
class StepParams:
    """Time step plus implicit-solver controls."""

    eps: float
    solver_tol: float = DEFAULT_SOLVER_TOL
    max_iter: int = DEFAULT_MAX_ITER
    series_threshold: float = DEFAULT_SERIES_THRESHOLD
    delta_cap_margin: float = DEFAULT_DELTA_CAP_MARGIN

    def __post_init__(self):
        if not (self.eps > 0.0):
            raise ValueError("eps must be positive")
        if not (0.0 < self.solver_tol <= 1e-6):
            raise ValueError("solver_tol must lie in (0, 1e-6]")
        if self.max_iter < 8:
            raise ValueError("max_iter must be at least 8")
        if not (self.series_threshold > 0.0 and self.delta_cap_margin > 0.0):
            raise ValueError("thresholds must be positive")


LEAPFROG = "leapfrog"
DG = "dg"
DG_DELTA0 = "dg_delta0"
LEDG = "ledg"
LEDG_PREDICTOR = "ledg_predictor"

SCHEME_KINDS = (LEAPFROG, DG, DG_DELTA0, LEDG, LEDG_PREDICTOR)


@dataclass(frozen=True)
class SchemeId:
    """Identifies one of the five schemes; dg_delta0 carries its constant step."""

    kind: str
    delta0: Optional[float] = None

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == DG_DELTA0:
            if self.delta0 is None or not (self.delta0 > 0.0):
                raise ValueError("dg_delta0 needs delta0 > 0")
        elif self.delta0 is not None:
            raise ValueError(f"{self.kind} does not take delta0")

    @staticmethod
    def leapfrog() -> "SchemeId":
        return SchemeId(LEAPFROG)

    @staticmethod
    def dg() -> "SchemeId":
        return SchemeId(DG)

    @staticmethod
    def dg_delta0(delta0: float) -> "SchemeId":
        return SchemeId(DG_DELTA0, delta0=float(delta0))

    @staticmethod
    def ledg() -> "SchemeId":
        return SchemeId(LEDG)

    @staticmethod
    def ledg_predictor() -> "SchemeId":
        return SchemeId(LEDG_PREDICTOR)


def omega_of(d2v: float) -> float:
    """Local frequency sqrt(|V''|)."""
    return math.sqrt(abs(d2v))


def delta_of(eps: float, d2v: float, params: Optional[StepParams] = None) -> float:
    """Effective step: (2/w) tan(eps w/2), eps, or (2/w) tanh(eps w/2).

    Branches on the sign of d2v with w = sqrt(|d2v|).  A series kicks in for
    (eps w / 2)^2 below the threshold so the result is continuous in d2v
    across zero.
    """
    series_threshold = params.series_threshold if params else DEFAULT_SERIES_THRESHOLD
    margin = params.delta_cap_margin if params else DEFAULT_DELTA_CAP_MARGIN
    if d2v == 0.0:
        return eps
    om = math.sqrt(abs(d2v))
    z = 0.5 * eps * om
    if z * z < series_threshold:
        zz = (eps * om) * (eps * om)
        sign = 1.0 if d2v > 0.0 else -1.0
        return eps * (1.0 + sign * zz / 12.0 + zz * zz / 120.0)
    if d2v > 0.0:
        if eps * om >= math.pi - margin:
            raise StepTooLarge(
                f"eps*omega = {eps * om:.6g} at the tan pole; reduce eps"
            )
        return 2.0 * math.tan(z) / om
    return 2.0 * math.tanh(z) / om


def delta0_of(
    eps: float,
    spec: PotentialSpec,
    x_eq: float = 0.0,
    params: Optional[StepParams] = None,
) -> float:
    """Constant effective step (2/w0) tan(w0 eps/2) at a stable equilibrium."""
    d2v = evaluate(spec, x_eq).d2v
    if d2v <= 0.0:
        raise NotAStableEquilibrium(f"V''({x_eq}) = {d2v} is not positive")
    return delta_of(eps, d2v, params)


def total_energy(spec: PotentialSpec, s: State) -> float:
    """p^2/2 + V(x), evaluated on the compensated position."""
    vals = evaluate(spec, s.x)
    return 0.5 * s.p * s.p + vals.v + vals.dv * s.x_lo


# ---------------------------------------------------------------------------
# leap-frog (velocity Verlet)


def _leapfrog_core(spec, s, eps, vals0):
    t, x, p, x_lo = s
    if vals0 is None:
        vals0 = evaluate(spec, x)
    p_half = p - 0.5 * eps * vals0.dv
    x1, x1_lo = advance_position(x, x_lo, eps * p_half)
    vals1 = evaluate(spec, x1)
    p1 = p_half - 0.5 * eps * vals1.dv
    diag = StepDiagnostics(omega_of(vals0.d2v), eps, 0, False)
    return State(t + eps, x1, p1, x1_lo), diag, vals1


def step_leapfrog(spec: PotentialSpec, s: State, eps: float) -> State:
    """One velocity-Verlet step."""
    new, _, _ = _leapfrog_core(spec, s, eps, None)
    return new


# ---------------------------------------------------------------------------
# predictor (exact flow of the local linearization)


def _predictor_increment(vals, p, eps):
    """Position increment and new momentum from the frozen-coefficient flow."""
    dv, d2v = vals.dv, vals.d2v
    if d2v > 0.0:
        om = math.sqrt(d2v)
        z = om * eps
        sn = math.sin(z)
        sh2 = math.sin(0.5 * z)
        d = (sn / om) * p - (2.0 * sh2 * sh2 / d2v) * dv
        p1 = p * math.cos(z) - (dv / om) * sn
    elif d2v == 0.0:
        d = eps * p - 0.5 * eps * eps * dv
        p1 = p - eps * dv
    else:
        om = math.sqrt(-d2v)
        z = om * eps
        sn = math.sinh(z)
        sh2 = math.sinh(0.5 * z)
        d = (sn / om) * p + (2.0 * sh2 * sh2 / (om * om)) * dv
        p1 = p * math.cosh(z) - (dv / om) * sn
    return d, p1


def predictor_step(spec: PotentialSpec, s: State, eps: float) -> State:
    """Explicit locally-exact step: closed-form flow of the linearization."""
    t, x, p, x_lo = s
    vals = evaluate(spec, x)
    d, p1 = _predictor_increment(vals, p, eps)
    x1, x1_lo = advance_position(x, x_lo, d)
    return State(t + eps, x1, p1, x1_lo)


def linearized_flow(
    spec: PotentialSpec, lin: LinearizedState, eps: float
) -> LinearizedState:
    """Exact time-eps flow of dp/dt = -V'(x_ref) - V''(x_ref) xi, dxi/dt = p."""
    vals = evaluate(spec, lin.x_ref)
    # the affine system seen from the offset point has force slope V'(x_ref)
    # + V''(x_ref) * xi and unchanged curvature
    d, p1 = _predictor_increment(
        vals._replace(dv=vals.dv + vals.d2v * lin.xi), lin.p, eps
    )
    return LinearizedState(lin.x_ref, lin.xi + d, p1)


# ---------------------------------------------------------------------------
# discrete-gradient corrector


def _solve_increment(spec, x_hi, x_lo, p, delta, params, d_seed):
    """Root of G(d) = d - delta*p + (delta^2/2) DG(x, x+d), safeguarded Newton.

    Returns (d, d_lo, iters) where d + d_lo is a refined root carrying one
    guard word below the float resolution of d.
    """
    h2 = 0.5 * delta * delta
    dp_hi, dp_lo = two_prod(delta, p)

    def g(d):
        return ((d - dp_hi) - dp_lo) + h2 * _dg_of_increment(spec, x_hi, x_lo, d)

    def gp(d):
        return 1.0 + h2 * _dg_slope(spec, x_hi, d)

    half = 2.0 * max(abs(dp_hi), delta)
    lo = d_seed - half
    hi = d_seed + half
    glo = g(lo)
    ghi = g(hi)
    expansions = 0
    while glo * ghi > 0.0 and expansions < 8:
        half *= 2.0
        lo = d_seed - half
        hi = d_seed + half
        glo = g(lo)
        ghi = g(hi)
        expansions += 1
    if glo * ghi > 0.0:
        raise NoConvergence(
            f"no sign change in [{lo:.6g}, {hi:.6g}] after {expansions} expansions"
        )
    if glo == 0.0:
        return lo, 0.0, 0
    if ghi == 0.0:
        return hi, 0.0, 0

    d = d_seed if lo < d_seed < hi else 0.5 * (lo + hi)
    gd = g(d)
    best_d, best_g = d, gd
    iters = 1
    while gd != 0.0 and iters < params.max_iter:
        deriv = gp(d)
        nd = d - gd / deriv if deriv != 0.0 else 0.5 * (lo + hi)
        if nd == d:
            break  # Newton update below the float resolution: converged
        if not (lo < nd < hi):
            nd = 0.5 * (lo + hi)
        if nd == d:
            break
        step = abs(nd - d)
        gd = g(nd)
        iters += 1
        d = nd
        if abs(gd) < abs(best_g):
            best_d, best_g = d, gd
        if (gd > 0.0) == (ghi > 0.0):
            hi, ghi = d, gd
        else:
            lo, glo = d, gd
        if step <= 2.0 * _U * abs(d):
            break
    d, gd = best_d, best_g

    scale = max(1.0, abs(dp_hi))
    if abs(gd) > params.solver_tol * scale:
        raise NoConvergence(
            f"residual {gd:.3e} above tolerance after {iters} iterations"
        )
    d_lo = 0.0 if gd == 0.0 else -gd / gp(d)
    return d, d_lo, iters


def _recover_momentum(d, d_lo, delta, p):
    """p' = 2(d + d_lo)/delta - p with one final rounding."""
    q, e_q = div_rem(2.0 * d, delta)
    s, t = two_sum(q, -p)
    return s + (t + (e_q + 2.0 * d_lo / delta))


def _corrector_step(spec, s, delta, params, d_seed, omega_n, predictor_used):
    t, x, p, x_lo = s
    d, d_lo, iters = _solve_increment(spec, x, x_lo, p, delta, params, d_seed)
    x1, x1_lo = advance_position(x, x_lo, d, d_lo)
    p1 = _recover_momentum(d, d_lo, delta, p)
    diag = StepDiagnostics(omega_n, delta, iters, predictor_used)
    return State(t + params.eps, x1, p1, x1_lo), diag


def step_dg(
    spec: PotentialSpec, s: State, delta: float, params: StepParams
) -> tuple:
    """One discrete-gradient step with effective step delta.

    Solves x' = x + delta*p - (delta^2/2) DG(x, x') for the position, then
    recovers p' = 2(x'-x)/delta - p so the momentum average line holds
    exactly.  Physical time advances by params.eps.
    """
    if not (delta > 0.0):
        raise ValueError("delta must be positive")
    vals = evaluate(spec, s.x)
    d_seed = delta * s.p - 0.5 * delta * delta * vals.dv
    return _corrector_step(
        spec, s, delta, params, d_seed, omega_of(vals.d2v), False
    )


def step_ledg(spec: PotentialSpec, s: State, params: StepParams) -> tuple:
    """One locally exact discrete-gradient step: state-dependent delta, with
    the explicit linearized flow as the corrector seed."""
    vals = evaluate(spec, s.x)
    delta = delta_of(params.eps, vals.d2v, params)
    d_seed, _ = _predictor_increment(vals, s.p, params.eps)
    return _corrector_step(
        spec, s, delta, params, d_seed, omega_of(vals.d2v), True
    )


# ---------------------------------------------------------------------------
# driver


def _make_stepper(
    scheme: SchemeId, spec: PotentialSpec, params: StepParams
) -> Callable[[State], tuple]:
    """Sequential stepping closure; leap-frog caches its trailing force."""
    kind = scheme.kind
    eps = params.eps
    if kind == LEAPFROG:
        cache = {"vals": None, "x": None}

        def step(s):
            vals0 = cache["vals"] if cache["x"] == s.x else None
            new, diag, vals1 = _leapfrog_core(spec, s, eps, vals0)
            cache["vals"] = vals1
            cache["x"] = new.x
            return new, diag

        return step
    if kind == LEDG_PREDICTOR:

        def step(s):
            vals = evaluate(spec, s.x)
            d, p1 = _predictor_increment(vals, s.p, eps)
            x1, x1_lo = advance_position(s.x, s.x_lo, d)
            diag = StepDiagnostics(omega_of(vals.d2v), eps, 0, True)
            return State(s.t + eps, x1, p1, x1_lo), diag

        return step
    if kind == DG:
        return lambda s: step_dg(spec, s, eps, params)
    if kind == DG_DELTA0:
        delta0 = scheme.delta0
        return lambda s: step_dg(spec, s, delta0, params)
    if kind == LEDG:
        return lambda s: step_ledg(spec, s, params)
    raise ValueError(f"unknown scheme kind {kind!r}")


def integrate(
    scheme: SchemeId,
    spec: PotentialSpec,
    s0: State,
    params: StepParams,
    n_steps: int,
    observer: Optional[Callable[[State, StepDiagnostics], None]] = None,
) -> State:
    """Apply the scheme n_steps times from s0.

    Time is reconstructed as s0.t + (i+1)*eps each step, so t_n carries at
    most a couple of ulps of error regardless of n.  Stepper failures are
    re-raised with the failing step index attached.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    step = _make_stepper(scheme, spec, params)
    t0 = s0.t
    eps = params.eps
    s = s0
    for i in range(n_steps):
        try:
            s, diag = step(s)
        except LedgLabError as err:
            err.step_index = i
            err.args = (f"step {i}: {err.args[0] if err.args else ''}",)
            raise
        s = s._replace(t=t0 + (i + 1) * eps)
        if observer is not None:
            observer(s, diag)
    return s
