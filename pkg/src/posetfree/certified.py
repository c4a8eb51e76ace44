"""Outward-rounded interval arithmetic for transcendental thresholds.

A private 128-bit interval context is used so the global ``mpmath.iv``
precision is never touched.  Endpoints convert to exact fractions through the
raw binary representation, so comparisons against rational masses are sound.
"""
from __future__ import annotations

from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext

PRECISION = 128

ctx = MPIntervalContext()
ctx.prec = PRECISION


def interval(x):
    """Lift an int, Fraction or interval into the context."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _bc = raw
    if not man:
        if exp:
            raise ArithmeticError("interval endpoint is infinite or NaN")
        return Fraction(0)
    value = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -value if sign else value


def lower(x) -> Fraction:
    return _raw_to_fraction(interval(x)._mpi_[0])


def upper(x) -> Fraction:
    return _raw_to_fraction(interval(x)._mpi_[1])


def exceeds(value: Fraction, bound) -> bool:
    """True only when ``value`` is provably larger than every point of ``bound``."""
    return Fraction(value) > upper(bound)


def below(value: Fraction, bound) -> bool:
    """True only when ``value`` is provably smaller than every point of ``bound``."""
    return Fraction(value) < lower(bound)


def certainly_greater(a, b) -> bool:
    """``a > b`` certified: the lower end of ``a`` beats the upper end of ``b``."""
    return lower(a) > upper(b)


def midpoint(x) -> float:
    x = interval(x)
    return float((lower(x) + upper(x)) / 2)


def width(x) -> Fraction:
    return upper(x) - lower(x)


def ln2():
    return ctx.log(2)


def universal_threshold(r: int, gamma: Fraction):
    """``4r/gamma + 2 ln 2 / (1 - gamma) + 2`` as an interval."""
    g = interval(Fraction(gamma))
    return 4 * r / g + 2 * ln2() / (1 - g) + 2


def std_example_threshold(r: int, gamma: Fraction, delta: Fraction):
    """``r/gamma + ln(1/(1-delta)) / (1-gamma) + 1`` as an interval."""
    g = interval(Fraction(gamma))
    d = interval(Fraction(delta))
    return r / g + ctx.log(1 / (1 - d)) / (1 - g) + 1


def height2_threshold(r: int):
    """``4r + sqrt(32 ln2 r) + 6`` as an interval."""
    return 4 * r + ctx.sqrt(32 * ln2() * r) + 6


def flexible_bound(gamma: Fraction, delta: Fraction):
    """``1 + ln(1/(1-delta)) / (1-gamma)`` as an interval."""
    g = interval(Fraction(gamma))
    d = interval(Fraction(delta))
    return 1 + ctx.log(1 / (1 - d)) / (1 - g)
