"""Scalar backends: exact rationals (``fractions.Fraction``) and tolerant float64.

Every coordinate in the package is either a ``Fraction`` or a ``float``.
Integers are promoted to ``Fraction``.  A value or operation that mixes the
two kinds raises :class:`~minkowski.errors.BackendMismatch`; conversion to
float is always explicit (``to_float``).

Float comparisons use a relative tolerance held in a context variable so
that concurrent callers can use different tolerances::

    with using_tolerance(1e-12):
        ...
"""
from __future__ import annotations

import contextlib
import contextvars
import math
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import BackendMismatch

Number = Union[Fraction, float]

DEFAULT_TOLERANCE = 1e-9

_tolerance = contextvars.ContextVar("minkowski_tolerance", default=DEFAULT_TOLERANCE)


class Backend(Enum):
    EXACT_RATIONAL = "rational"
    FLOAT64 = "float64"


def get_tolerance() -> float:
    return _tolerance.get()


@contextlib.contextmanager
def using_tolerance(tol: float):
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    token = _tolerance.set(float(tol))
    try:
        yield
    finally:
        _tolerance.reset(token)


def coerce(value) -> Number:
    """Promote ints and "p/q" strings to Fraction; keep floats as floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    if hasattr(value, "is_integer") and hasattr(value, "__float__"):
        return coerce(float(value))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"unsupported scalar {value!r}")


def backend_of_value(x: Number) -> Backend:
    return Backend.FLOAT64 if isinstance(x, float) else Backend.EXACT_RATIONAL


def backend_of(values: Iterable[Number]) -> Backend:
    """The common backend of already-coerced values; mixing raises."""
    found = None
    for v in values:
        b = backend_of_value(v)
        if found is None:
            found = b
        elif b is not found:
            raise BackendMismatch("exact rational and float64 scalars mixed")
    return found if found is not None else Backend.EXACT_RATIONAL


def convert(x: Number, backend: Backend) -> Number:
    if backend is Backend.FLOAT64:
        return float(x)
    if isinstance(x, float):
        raise BackendMismatch("refusing to convert float64 to an exact rational")
    return x


def to_float(x: Number) -> float:
    return float(x)


def sign(x: Number, scale: float = 1.0) -> int:
    """Sign of ``x``; float values within tolerance of zero (relative to
    ``max(1, scale)``) count as zero."""
    if isinstance(x, float):
        if abs(x) <= get_tolerance() * max(1.0, abs(scale)):
            return 0
    return (x > 0) - (x < 0)


def compare(a: Number, b: Number) -> int:
    """Three-way comparison; floats are equal when
    ``|a-b| <= tol * max(1, |a|, |b|)``."""
    if isinstance(a, float) or isinstance(b, float):
        if isinstance(a, float) != isinstance(b, float):
            raise BackendMismatch("comparison between rational and float64")
        if abs(a - b) <= get_tolerance() * max(1.0, abs(a), abs(b)):
            return 0
    return (a > b) - (a < b)


def eq(a: Number, b: Number) -> bool:
    return compare(a, b) == 0


def is_zero(x: Number, scale: float = 1.0) -> bool:
    return sign(x, scale) == 0


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """Square root of a nonnegative rational if it is rational, else None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt(x: Number) -> Number:
    """Exact root when ``x`` is a perfect rational square, else float64."""
    if isinstance(x, Fraction):
        r = exact_sqrt(x)
        if r is not None:
            return r
        if x < 0:
            raise ValueError("square root of a negative number")
        return math.sqrt(x)
    if x < 0:
        if x >= -get_tolerance():
            return 0.0
        raise ValueError("square root of a negative number")
    return math.sqrt(x)


def power_of_two_exponent(x: Number) -> Optional[int]:
    """``e`` if ``x == 2**e`` exactly, else None."""
    if x <= 0:
        return None
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
        if den == 1 and num & (num - 1) == 0:
            return num.bit_length() - 1
        if num == 1 and den & (den - 1) == 0:
            return -(den.bit_length() - 1)
        return None
    mantissa, exponent = math.frexp(x)
    return exponent - 1 if mantissa == 0.5 else None


def two_pow(e: int) -> Fraction:
    return Fraction(2) ** e


def format_scalar(x: Number):
    """JSON form: "p/q" strings for rationals, plain numbers for floats."""
    if isinstance(x, float):
        return x
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_scalar(value) -> Number:
    """Inverse of :func:`format_scalar`; JSON integers are read as exact."""
    return coerce(value)
