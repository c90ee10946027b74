"""Energy-preserving discrete gradient integrators for 1-D Newtonian systems.

The package bundles four one-step schemes (leap-frog, discrete gradient,
discrete gradient with constant effective step, locally exact discrete
gradient), exact oracles for the pendulum, measurement instruments, and a
benchmark CLI (``ledg-lab``).
"""

from .analysis import (
    PeriodEstimate,
    SweepRecord,
    delta_profile,
    energy_drift,
    estimate_period,
    observed_order,
)
from .errors import (
    ConfigError,
    DegenerateFit,
    InvalidMomentum,
    LedgLabError,
    ModulusOutOfRange,
    NoConvergence,
    NoCycleDetected,
    NotAStableEquilibrium,
    SeparatrixPeriodInfinite,
    StepTooLarge,
    ToleranceNotMet,
    Unstable,
)
from .potentials import PotentialSpec, PotentialValues, discrete_gradient, evaluate
from .reference import (
    EnergyRecord,
    ReferenceTolerance,
    Regime,
    agm_elliptic_k,
    exact_pendulum_period,
    leapfrog_harmonic_period,
    reference_trajectory,
    separatrix_solution,
)
from .steppers import (
    LinearizedState,
    SchemeId,
    State,
    StepDiagnostics,
    StepParams,
    delta0_of,
    delta_of,
    integrate,
    linearized_flow,
    omega_of,
    predictor_step,
    step_dg,
    step_leapfrog,
    step_ledg,
    total_energy,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateFit",
    "EnergyRecord",
    "InvalidMomentum",
    "LedgLabError",
    "LinearizedState",
    "ModulusOutOfRange",
    "NoConvergence",
    "NoCycleDetected",
    "NotAStableEquilibrium",
    "PeriodEstimate",
    "PotentialSpec",
    "PotentialValues",
    "ReferenceTolerance",
    "Regime",
    "SchemeId",
    "SeparatrixPeriodInfinite",
    "State",
    "StepDiagnostics",
    "StepParams",
    "StepTooLarge",
    "SweepRecord",
    "ToleranceNotMet",
    "Unstable",
    "agm_elliptic_k",
    "delta0_of",
    "delta_of",
    "delta_profile",
    "discrete_gradient",
    "energy_drift",
    "estimate_period",
    "evaluate",
    "exact_pendulum_period",
    "integrate",
    "leapfrog_harmonic_period",
    "linearized_flow",
    "observed_order",
    "omega_of",
    "predictor_step",
    "reference_trajectory",
    "separatrix_solution",
    "step_dg",
    "step_leapfrog",
    "step_ledg",
    "total_energy",
]
