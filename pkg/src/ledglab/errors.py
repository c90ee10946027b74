"""Exception types shared across the library."""


class LedgLabError(Exception):
    """Base class for all errors raised by this package."""

    #: Filled in by :func:`ledglab.steppers.integrate` when a step fails.
    step_index = None


class StepTooLarge(LedgLabError):
    """eps * sqrt(V''(x)) sits at or beyond the tan-branch pole."""


class NotAStableEquilibrium(LedgLabError):
    """V''(x_eq) <= 0 where a stable equilibrium was required."""


class NoConvergence(LedgLabError):
    """The corrector root solve did not converge within its iteration cap."""


class ModulusOutOfRange(LedgLabError):
    """Elliptic modulus outside [0, 1)."""


class SeparatrixPeriodInfinite(LedgLabError):
    """The pendulum period diverges at p0 = 2."""


class InvalidMomentum(LedgLabError):
    """Initial momentum must be positive."""


class Unstable(LedgLabError):
    """Leap-frog stability limit eps * omega >= 2 exceeded."""


class ToleranceNotMet(LedgLabError):
    """The adaptive reference integrator could not meet its tolerance."""


class NoCycleDetected(LedgLabError):
    """Trajectory produced too few period events within the step budget."""


class DegenerateFit(LedgLabError):
    """Log-log fit input has zero variance in the abscissa."""


class ConfigError(LedgLabError):
    """Experiment configuration is malformed or inconsistent."""
