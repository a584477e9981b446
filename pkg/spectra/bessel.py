"""
Bessel functions J0, J1 by their ascending power series, and the first zero
of J0.

    J0(x) = sum_k (-1)^k (x/2)^(2k) / (k!)^2
    J1(x) = sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)

Twenty-five terms reach double precision for |x| <= 8, which is all the
root search needs.
"""

import math

from django.core.exceptions import ValidationError

SERIES_TERMS = 25
SERIES_RANGE = 8.0
ZERO_BRACKET = (2.0, 3.0)
ZERO_TOLERANCE = 1e-10
MAX_ITERATIONS = 100


def _check_range(x: float) -> None:
    if not (math.isfinite(x) and abs(x) <= SERIES_RANGE):
        msg = f"Series evaluation needs |x| <= {SERIES_RANGE}, got {x!r}"
        raise ValidationError(msg)


def bessel_j0(x: float) -> float:
    _check_range(x)
    quarter = -0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, SERIES_TERMS):
        term *= quarter / (k * k)
        total += term
    return total


def bessel_j1(x: float) -> float:
    _check_range(x)
    quarter = -0.25 * x * x
    term = 0.5 * x
    total = term
    for k in range(1, SERIES_TERMS):
        term *= quarter / (k * (k + 1))
        total += term
    return total


def bessel_j0_first_zero() -> float:
    """
    j_{0,1} ~ 2.404825557695773.

    Newton steps on J0 (with J0' = -J1) inside the sign-change bracket [2, 3];
    a step that would leave the bracket is replaced by bisection.
    """
    lo, hi = ZERO_BRACKET
    f_lo = bessel_j0(lo)
    x = 0.5 * (lo + hi)
    for _ in range(MAX_ITERATIONS):
        value = bessel_j0(x)
        if value == 0.0:
            return x
        if (value > 0) == (f_lo > 0):
            lo, f_lo = x, value
        else:
            hi = x
        slope = -bessel_j1(x)
        candidate = x - value / slope if slope != 0.0 else lo - 1.0
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        if abs(candidate - x) < ZERO_TOLERANCE:
            return candidate
        x = candidate
    msg = "Root search for the first zero of J0 did not converge"
    raise ArithmeticError(msg)
