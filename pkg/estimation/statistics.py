"""Binomial intervals, two-sample tests and least-squares fits."""

import math
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError
from scipy import special, stats

CONFIDENCE = 0.95


def _normal_quantile(confidence: float, *, two_sided: bool) -> float:
    tail = (1.0 - confidence) / 2.0 if two_sided else 1.0 - confidence
    return float(stats.norm.isf(tail))


def wilson_interval(successes: int, n: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    """
    Wilson score interval for a binomial proportion. When all or none of the
    trials succeed the interval is one-sided at the same confidence, with the
    observed proportion as its closed end.
    """
    if n < 1:
        msg = f"A binomial interval needs at least one trial, got n={n}"
        raise ValidationError(msg)
    if not 0 <= successes <= n:
        msg = f"successes must lie in [0, n], got {successes} of {n}"
        raise ValidationError(msg)
    one_sided = successes in (0, n)
    z = _normal_quantile(confidence, two_sided=not one_sided)
    p = successes / n
    z2 = z * z
    centre = (p + z2 / (2 * n)) / (1 + z2 / n)
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n)
    low, high = max(0.0, centre - half), min(1.0, centre + half)
    if successes == 0:
        return 0.0, high
    if successes == n:
        return low, 1.0
    return low, high


def clopper_pearson(successes: int, n: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    """Exact binomial interval from beta quantiles."""
    if n < 1:
        msg = f"A binomial interval needs at least one trial, got n={n}"
        raise ValidationError(msg)
    alpha = 1.0 - confidence
    low = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, n - successes + 1))
    high = 1.0 if successes == n else float(stats.beta.isf(alpha / 2, successes + 1, n - successes))
    return low, high


def binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def standardized_difference(p1: float, se1: float, p2: float, se2: float) -> float:
    """(p1 - p2) in units of the joint standard error; 0 when both are exact."""
    joint = math.hypot(se1, se2)
    if joint == 0.0:
        return 0.0 if p1 == p2 else math.copysign(math.inf, p1 - p2)
    return (p1 - p2) / joint


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float
    n1: int
    n2: int


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> KSResult:
    """
    Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| over the pooled
    sample, with the asymptotic Kolmogorov p-value at n_eff = n1 n2 / (n1 + n2).
    """
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        msg = "Kolmogorov-Smirnov needs two nonempty samples"
        raise ValidationError(msg)
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    statistic = float(np.max(np.abs(cdf_a - cdf_b)))
    n_eff = a.size * b.size / (a.size + b.size)
    p_value = float(min(1.0, max(0.0, special.kolmogorov(math.sqrt(n_eff) * statistic))))
    return KSResult(statistic=statistic, p_value=p_value, n1=int(a.size), n2=int(b.size))


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    stderr: float


def mean_estimate(samples: np.ndarray) -> MomentEstimate:
    samples = np.asarray(samples, dtype=float)
    return MomentEstimate(
        float(np.mean(samples)), float(np.std(samples, ddof=1) / math.sqrt(samples.size))
    )


def variance_estimate(samples: np.ndarray) -> MomentEstimate:
    """Sample variance with the large-sample error sqrt((m4 - s^4) / n)."""
    samples = np.asarray(samples, dtype=float)
    centred = samples - np.mean(samples)
    variance = float(np.var(samples, ddof=1))
    fourth = float(np.mean(centred**4))
    return MomentEstimate(variance, math.sqrt(max(fourth - variance**2, 0.0) / samples.size))


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    slope_stderr: float
    intercept_stderr: float


def weighted_linear_fit(x: np.ndarray, y: np.ndarray, weights: np.ndarray) -> LinearFit:
    """
    Weighted least squares y ~ intercept + slope x with weights 1 / Var(y_i);
    standard errors are the square roots of diag (X^T W X)^-1.
    """
    x, y, weights = (np.asarray(v, dtype=float) for v in (x, y, weights))
    if np.unique(x).size < 2:  # noqa: PLR2004
        msg = "A linear fit needs at least two distinct abscissae"
        raise ValidationError(msg)
    design = np.column_stack([np.ones_like(x), x])
    root = np.sqrt(weights)
    coefficients, *_ = np.linalg.lstsq(design * root[:, None], y * root, rcond=None)
    covariance = np.linalg.inv(design.T @ (design * weights[:, None]))
    return LinearFit(
        slope=float(coefficients[1]),
        intercept=float(coefficients[0]),
        slope_stderr=float(math.sqrt(max(covariance[1, 1], 0.0))),
        intercept_stderr=float(math.sqrt(max(covariance[0, 0], 0.0))),
    )
