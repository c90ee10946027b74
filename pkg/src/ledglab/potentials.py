"""Potentials V(x) with first and second derivatives and discrete gradients.

The potential family is a closed enumeration so that configs stay
serializable and every evaluation has a known closed form.  All arithmetic
is binary64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from ._accurate import two_sum

PENDULUM = "pendulum"
HARMONIC = "harmonic"
LINEAR_FORCE = "linear_force"
INVERTED_HARMONIC = "inverted_harmonic"
POLYNOMIAL = "polynomial"

_KINDS = (PENDULUM, HARMONIC, LINEAR_FORCE, INVERTED_HARMONIC, POLYNOMIAL)

#: Removable-singularity threshold scale: below sqrt(u) * (1 + max|x|) the
#: difference quotient has lost half its digits, the midpoint derivative has
#: an O(|b-a|^2) defect instead.
SQRT_U = math.sqrt(2.0 ** -53)


class PotentialValues(NamedTuple):
    """V, V' and V'' at a point."""

    v: float
    dv: float
    d2v: float


@dataclass(frozen=True)
class PotentialSpec:
    """One member of the built-in potential family.

    Use the factory methods; the constructor does not validate cross-field
    consistency beyond what each factory sets up.
    """

    kind: str
    omega: Optional[float] = None
    slope: Optional[float] = None
    coeffs: Optional[Tuple[float, ...]] = None

    @staticmethod
    def pendulum() -> "PotentialSpec":
        """V(x) = -cos x."""
        return PotentialSpec(PENDULUM)

    @staticmethod
    def harmonic(omega: float) -> "PotentialSpec":
        """V(x) = omega^2 x^2 / 2 with omega > 0."""
        if not (omega > 0.0):
            raise ValueError("harmonic potential needs omega > 0")
        return PotentialSpec(HARMONIC, omega=float(omega))

    @staticmethod
    def inverted_harmonic(omega: float) -> "PotentialSpec":
        """V(x) = -omega^2 x^2 / 2 with omega > 0."""
        if not (omega > 0.0):
            raise ValueError("inverted harmonic potential needs omega > 0")
        return PotentialSpec(INVERTED_HARMONIC, omega=float(omega))

    @staticmethod
    def linear_force(slope: float) -> "PotentialSpec":
        """V(x) = slope * x."""
        return PotentialSpec(LINEAR_FORCE, slope=float(slope))

    @staticmethod
    def polynomial(coeffs) -> "PotentialSpec":
        """V(x) = sum coeffs[k] x^k, coefficients in ascending degree."""
        tup = tuple(float(c) for c in coeffs)
        if not tup:
            raise ValueError("polynomial potential needs at least one coefficient")
        return PotentialSpec(POLYNOMIAL, coeffs=tup)

    def to_json_dict(self) -> dict:
        if self.kind == PENDULUM:
            return {"kind": "pendulum"}
        if self.kind == HARMONIC:
            return {"kind": "harmonic", "omega": self.omega}
        if self.kind == INVERTED_HARMONIC:
            return {"kind": "inverted_harmonic", "omega": self.omega}
        if self.kind == LINEAR_FORCE:
            return {"kind": "linear_force", "slope": self.slope}
        return {"kind": "polynomial", "coeffs": list(self.coeffs)}

    @staticmethod
    def from_json_dict(obj: dict) -> "PotentialSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ValueError("potential must be an object with a 'kind' key")
        kind = obj["kind"]
        extra = set(obj) - {"kind", "omega", "slope", "coeffs"}
        if extra:
            raise ValueError(f"unknown potential keys: {sorted(extra)}")
        if kind == "pendulum":
            return PotentialSpec.pendulum()
        if kind == "harmonic":
            return PotentialSpec.harmonic(obj["omega"])
        if kind == "inverted_harmonic":
            return PotentialSpec.inverted_harmonic(obj["omega"])
        if kind == "linear_force":
            return PotentialSpec.linear_force(obj["slope"])
        if kind == "polynomial":
            return PotentialSpec.polynomial(obj["coeffs"])
        raise ValueError(f"unknown potential kind {kind!r}")


def _poly_derivative(coeffs: Tuple[float, ...]) -> Tuple[float, ...]:
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0.0,)


def _horner(coeffs: Tuple[float, ...], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def evaluate(spec: PotentialSpec, x: float) -> PotentialValues:
    """Return (V, V', V'') at x.  Deterministic, defined for all finite x."""
    kind = spec.kind
    if kind == PENDULUM:
        c = math.cos(x)
        return PotentialValues(-c, math.sin(x), c)
    if kind == HARMONIC:
        w2 = spec.omega * spec.omega
        return PotentialValues(0.5 * w2 * x * x, w2 * x, w2)
    if kind == INVERTED_HARMONIC:
        w2 = spec.omega * spec.omega
        return PotentialValues(-0.5 * w2 * x * x, -w2 * x, -w2)
    if kind == LINEAR_FORCE:
        return PotentialValues(spec.slope * x, spec.slope, 0.0)
    if kind == POLYNOMIAL:
        d1 = _poly_derivative(spec.coeffs)
        d2 = _poly_derivative(d1)
        return PotentialValues(
            _horner(spec.coeffs, x), _horner(d1, x), _horner(d2, x)
        )
    raise ValueError(f"unknown potential kind {kind!r}")


def _dg_quotient(spec: PotentialSpec, a: float, b: float) -> float:
    """(V(b) - V(a)) / (b - a) through cancellation-free closed forms.

    Every branch is bitwise symmetric in (a, b).
    """
    kind = spec.kind
    if kind == PENDULUM:
        # cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2)
        half = 0.5 * abs(b - a)
        return math.sin(0.5 * (a + b)) * (math.sin(half) / half)
    if kind == HARMONIC:
        return spec.omega * spec.omega * (0.5 * (a + b))
    if kind == INVERTED_HARMONIC:
        return -spec.omega * spec.omega * (0.5 * (a + b))
    if kind == LINEAR_FORCE:
        return spec.slope
    # polynomial: (b^k - a^k)/(b - a) = sum_{j<k} a^j b^(k-1-j); summing the
    # products a^j * b^m with math.fsum keeps the result order-independent,
    # hence exactly symmetric under swapping a and b.
    coeffs = spec.coeffs
    deg = len(coeffs) - 1
    pa = [1.0]
    pb = [1.0]
    for _ in range(deg - 1):
        pa.append(pa[-1] * a)
        pb.append(pb[-1] * b)
    terms = []
    for k in range(1, deg + 1):
        c = coeffs[k]
        if c != 0.0:
            for j in range(k):
                terms.append(c * (pa[j] * pb[k - 1 - j]))
    return math.fsum(terms)


def discrete_gradient(spec: PotentialSpec, a: float, b: float) -> float:
    """Difference quotient (V(b) - V(a))/(b - a), symmetric in (a, b).

    Below the removable-singularity threshold the midpoint derivative
    V'((a+b)/2) is returned instead.
    """
    if abs(b - a) <= SQRT_U * (1.0 + max(abs(a), abs(b))):
        return evaluate(spec, 0.5 * (a + b)).dv
    return _dg_quotient(spec, a, b)


def _dg_of_increment(spec: PotentialSpec, x_hi: float, x_lo: float, d: float) -> float:
    """DG(x, x + d) for the corrector, with x given as a compensated pair.

    The compensation word matters for long rotations: evaluating the pendulum
    midpoint angle as a rounded single float would feed ulp(x)-sized angle
    noise straight into the conserved energy.
    """
    kind = spec.kind
    if kind == PENDULUM:
        m_hi, m_e = two_sum(x_hi, 0.5 * d)
        m_lo = m_e + x_lo
        sm = math.sin(m_hi) + math.cos(m_hi) * m_lo
        if d == 0.0:
            return sm
        half = 0.5 * abs(d)
        return sm * (math.sin(half) / half)
    if kind == HARMONIC or kind == INVERTED_HARMONIC:
        w2 = spec.omega * spec.omega
        if kind == INVERTED_HARMONIC:
            w2 = -w2
        m_hi, m_e = two_sum(x_hi, 0.5 * d)
        return w2 * m_hi + w2 * (m_e + x_lo)
    if kind == LINEAR_FORCE:
        return spec.slope
    a = x_hi + x_lo
    if d == 0.0:
        return evaluate(spec, a).dv
    return _dg_quotient(spec, a, a + d)


def _dg_slope(spec: PotentialSpec, x_hi: float, d: float) -> float:
    """Approximate d(DG(x, x+d))/dd, good enough for a Newton direction."""
    kind = spec.kind
    if kind == PENDULUM:
        return 0.5 * math.cos(x_hi + 0.5 * d)
    if kind == HARMONIC:
        return 0.5 * spec.omega * spec.omega
    if kind == INVERTED_HARMONIC:
        return -0.5 * spec.omega * spec.omega
    if kind == LINEAR_FORCE:
        return 0.0
    return 0.5 * evaluate(spec, x_hi + 0.5 * d).d2v
