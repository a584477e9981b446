"""
Dirichlet eigenvalues of the unit ball and the resulting bracket for the
small-deviation constant of the hypoelliptic Brownian motion.

lambda1(n) is the lowest eigenvalue of -1/2 Laplacian on the unit ball of
R^n with zero boundary values:

- n = 1: -u''/2 = lambda u on (-1, 1), u(+-1) = 0, so u = cos(pi x / 2)
  and lambda = pi^2 / 8.
- n = 2: radial u = J0(k r) with J0(k) = 0, so k = j_{0,1} and
  lambda = j_{0,1}^2 / 2.

The small-deviation constant c satisfies

    lambda1(2) <= c^2 <= f(x*),
    f(x) = lambda1(2) / sqrt(1 - x) + lambda1(1) sqrt(1 - x) / (4 x),

with x* the minimizer of f over (0, 1).
"""

import math
from dataclasses import dataclass
from functools import cache

from django.core.exceptions import ValidationError

from core.validators import ParameterValidator

from .bessel import bessel_j0_first_zero


@dataclass(frozen=True)
class BoundResult:
    lambda1_1: float
    lambda1_2: float
    x_star: float
    f_at_xstar: float
    c_lower: float
    c_upper: float


def lambda1(n: int) -> float:
    if n == 1:
        return math.pi**2 / 8.0
    if n == 2:  # noqa: PLR2004
        return bessel_j0_first_zero() ** 2 / 2.0
    msg = f"Only the unit balls of R^1 and R^2 are supported, got n={n!r}"
    raise ValidationError(msg)


def bound_f(x: float, l1: float, l2: float) -> float:
    ParameterValidator.validate_open_unit_interval("x", x)
    ParameterValidator.validate_positive("l1", l1)
    ParameterValidator.validate_positive("l2", l2)
    root = math.sqrt(1.0 - x)
    return l2 / root + l1 * root / (4.0 * x)


def x_star(l1: float, l2: float) -> float:
    """Closed-form minimizer of ``bound_f`` (the positive root of f'(x) = 0)."""
    ParameterValidator.validate_positive("l1", l1)
    ParameterValidator.validate_positive("l2", l2)
    denominator = 2.0 * (4.0 * l2 - l1)
    if denominator == 0.0:
        msg = "x_star is undefined when 4 * l2 == l1"
        raise ValidationError(msg)
    value = (math.sqrt(l1 * l1 + 32.0 * l1 * l2) - 3.0 * l1) / denominator
    ParameterValidator.validate_open_unit_interval("x_star", value)
    return value


@cache
def chung_bounds() -> BoundResult:
    l1, l2 = lambda1(1), lambda1(2)
    x = x_star(l1, l2)
    f_x = bound_f(x, l1, l2)
    return BoundResult(
        lambda1_1=l1,
        lambda1_2=l2,
        x_star=x,
        f_at_xstar=f_x,
        c_lower=math.sqrt(l2),
        c_upper=math.sqrt(f_x),
    )


def brownian_small_ball(epsilon: float, tolerance: float = 1e-18) -> float:
    """
    P(max_{s<=1} |b_s| < epsilon) for a 1D Brownian motion b, by the
    reflection series

        (4 / pi) sum_k (-1)^k / (2k + 1) exp(-(2k + 1)^2 pi^2 / (8 epsilon^2)).

    Terms are summed until their exponential factor drops below ``tolerance``.
    """
    ParameterValidator.validate_positive("epsilon", epsilon)
    rate = math.pi**2 / (8.0 * epsilon * epsilon)
    total = 0.0
    k = 0
    while True:
        odd = 2 * k + 1
        weight = math.exp(-odd * odd * rate)
        total += (-1) ** k * weight / odd
        if weight < tolerance:
            break
        k += 1
    return min(1.0, 4.0 / math.pi * total)


def levy_area_rate() -> float:
    """
    pi / 4. P(sup_{s<=t} |A_s| < 1) decays like exp(-pi t / 4); equivalently
    -eps^2 log P(sup_{s<=1} |A_s| < eps^2) -> pi / 4.
    """
    return math.pi / 4.0
