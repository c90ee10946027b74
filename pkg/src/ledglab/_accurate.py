"""Error-free float transformations used by the energy-exact steppers.

The corrector conserves energy algebraically, so the only drift left over a
long run comes from rounding in the state update itself.  These helpers keep
that rounding out of the books: positions carry a compensation word, and the
corrector residual is evaluated against an exactly-represented delta*p.
"""

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def two_sum(a, b):
    """Return (s, e) with s = fl(a + b) and a + b = s + e exactly."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def fast_two_sum(a, b):
    """two_sum specialised to |a| >= |b|."""
    s = a + b
    return s, b - (s - a)


def two_prod(a, b):
    """Return (p, e) with p = fl(a * b) and a * b = p + e exactly."""
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def div_rem(a, b):
    """Return (q, e) with q = fl(a / b) and e ~ a/b - q (first order exact)."""
    q = a / b
    p, pe = two_prod(q, b)
    return q, ((a - p) - pe) / b


def advance_position(x_hi, x_lo, d, d_lo=0.0):
    """Add the increment d + d_lo to the compensated position (x_hi, x_lo)."""
    s, e = two_sum(x_hi, d)
    return fast_two_sum(s, (x_lo + e) + d_lo)
