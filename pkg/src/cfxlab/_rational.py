"""Exact rational helpers: parsing, JSON formatting and integer scaling."""

from fractions import Fraction
from math import lcm
import numbers

import numpy as np

# int64 headroom kept when deciding whether vectorized integer arithmetic is safe
INT64_SAFE = 2**62


def as_fraction(value):
    """Coerce ``value`` to a :class:`Fraction` without losing exactness.

    Accepts ints (including numpy integers), Fractions, strings such as
    ``"3/4"`` or ``"-2"``, and floats (read through their shortest repr,
    so ``0.1`` becomes ``1/10``).
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    if isinstance(value, numbers.Real):
        if not np.isfinite(value):
            raise ValueError(f"not a finite rational: {value!r}")
        return Fraction(repr(float(value)))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_fraction(q):
    """JSON form of a rational: a plain int when integral, else ``"p/q"``."""
    q = as_fraction(q)
    if q.denominator == 1:
        return int(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def common_denominator(values):
    den = 1
    for v in values:
        den = lcm(den, as_fraction(v).denominator)
    return den


def scaled_ints(values, den=None):
    """Return ``(ints, den)`` with ``values[i] == ints[i] / den`` exactly."""
    values = [as_fraction(v) for v in values]
    if den is None:
        den = common_denominator(values)
    return [int(v * den) for v in values], den


def int_array(py_ints, bound=None):
    """numpy array of Python ints; int64 when ``bound`` fits, object otherwise."""
    if bound is None:
        bound = max((abs(v) for v in py_ints), default=0)
    dtype = np.int64 if bound < INT64_SAFE else object
    return np.array(py_ints, dtype=dtype)


def ceil_sqrt(q):
    """Smallest integer ``m >= 0`` with ``m * m >= q``."""
    q = as_fraction(q)
    if q <= 0:
        return 0
    n = -((-q.numerator) // q.denominator)  # ceil(q)
    from math import isqrt

    r = isqrt(n)
    return r if r * r >= n else r + 1
