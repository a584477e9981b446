"""
Monte Carlo checks of the distributional identities behind the small-ball
bounds:

- scaling: P(g*_1 < eps) = P(tau > eps^-2) for the unit-ball exit time tau,
  and |g_eps| has the law of sqrt(eps) |g_1|;
- time change: A_1 has the law of b(tau(1)) with tau(1) = 1/4 int_0^1 |B_s|^2 ds
  and b a Brownian motion independent of B;
- increments: the left increment g_u^-1 g_{u+s} has the law of g_s, while the
  right increment g_{u+s} g_u^-1 does not.
"""

import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.integrate import trapezoid

from core.context import ProcessKind, Side, Stream
from core.parallel import map_blocks
from core.rng import gaussian_increments, substream
from core.validators import ParameterValidator
from heisenberg.group import homogeneous_norms, invert_points, multiply_points
from heisenberg.simulation import SimConfig, WalkState, scaled_path_samples, steps_for, terminal_points

from .processes import exit_times_block
from .results import ScalingComparison
from .small_ball import estimate_from_sups, sample_running_sups
from .statistics import KSResult, MomentEstimate, ks_two_sample, mean_estimate, variance_estimate, wilson_interval

logger = logging.getLogger(__name__)


def scaling_identity_check(
    epsilon: float,
    n_paths: int,
    steps: int,
    seed: int = 0,
    threads: int | None = None,
) -> ScalingComparison:
    """
    Direct estimate of P(g*_1 < eps) against the fraction of exit times
    beyond eps^-2. The exit arm runs on [0, eps^-2] with the same number of
    grid steps as the direct arm, so both estimate one probability exactly.
    """
    ParameterValidator.validate_positive("epsilon", epsilon)
    sups = sample_running_sups(
        [ProcessKind.HEIS], n_paths, steps, seed, 1.0, Stream.SCALING_DIRECT, threads
    )[:, 0]
    direct = estimate_from_sups(ProcessKind.HEIS, epsilon, sups, steps, seed)

    horizon = epsilon**-2
    block = partial(
        exit_times_block,
        ProcessKind.HEIS,
        seed,
        Stream.SCALING_EXIT,
        horizon / steps,
        steps,
        steps,
        1,
    )
    exits = map_blocks(block, n_paths, threads=threads).reshape(n_paths, 2)
    survivors = int(np.count_nonzero(exits[:, 1] > 0.5))  # noqa: PLR2004
    return ScalingComparison(
        epsilon=epsilon,
        direct_p=direct.p_hat,
        direct_ci=(direct.ci_low, direct.ci_high),
        transformed_p=survivors / n_paths,
        transformed_ci=wilson_interval(survivors, n_paths),
        n_paths=n_paths,
        seed=seed,
    )


def scaling_distribution_check(
    epsilon: float,
    n_samples: int,
    steps: int,
    seed: int = 0,
    threads: int | None = None,
) -> KSResult:
    """KS comparison of |g_eps| against sqrt(eps) |g_1|."""
    samples = scaled_path_samples(SimConfig(seed=seed, steps=steps), epsilon, n_samples, threads)
    return ks_two_sample(samples.short, samples.long)


def timechange_block(seed: int, steps: int, start: int, stop: int) -> np.ndarray:
    """
    Per path: the clock tau(1) = 1/4 int_0^1 |B_s|^2 ds (trapezoid rule on the
    grid) and one draw of N(0, tau(1)). Shape (stop - start, 2).
    """
    step = 1.0 / steps
    result = np.empty((stop - start, 2))
    for row, index in enumerate(range(start, stop)):
        rng = substream(seed, Stream.TIMECHANGE_CLOCK, index)
        planar, _ = WalkState.origin().advance(gaussian_increments(rng, steps, step), with_area=False)
        squared = np.concatenate(([0.0], np.sum(planar**2, axis=1)))
        clock = 0.25 * trapezoid(squared, dx=step)
        result[row] = (clock, np.sqrt(clock) * rng.standard_normal())
    return result


@dataclass(frozen=True, eq=False)
class TimeChangeSamples:
    area: np.ndarray = field(repr=False)
    timechanged: np.ndarray = field(repr=False)
    clocks: np.ndarray = field(repr=False)


def timechange_samples(
    n_samples: int,
    steps: int,
    seed: int = 0,
    threads: int | None = None,
) -> TimeChangeSamples:
    """Terminal Levy areas A_1 and independent draws of b(tau(1))."""
    ParameterValidator.validate_count("n_samples", n_samples)
    ParameterValidator.validate_count("steps", steps)
    logger.info("Time-change samples: n_samples=%d steps=%d seed=%d", n_samples, steps, seed)
    area = terminal_points(seed, Stream.TIMECHANGE_AREA, 1.0, steps, n_samples, threads)[:, 2]
    clocked = map_blocks(partial(timechange_block, seed, steps), n_samples, threads=threads)
    clocked = clocked.reshape(n_samples, 2)
    return TimeChangeSamples(area=area, timechanged=clocked[:, 1], clocks=clocked[:, 0])


@dataclass(frozen=True)
class TimeChangeReport:
    n_samples: int
    clock_mean: MomentEstimate
    area_variance: MomentEstimate
    timechanged_variance: MomentEstimate
    ks: KSResult
    seed: int


def timechange_report(samples: TimeChangeSamples, seed: int) -> TimeChangeReport:
    return TimeChangeReport(
        n_samples=int(samples.area.size),
        clock_mean=mean_estimate(samples.clocks),
        area_variance=variance_estimate(samples.area),
        timechanged_variance=variance_estimate(samples.timechanged),
        ks=ks_two_sample(samples.area, samples.timechanged),
        seed=seed,
    )


def increment_block(
    side: Side,
    seed: int,
    steps_u: int,
    steps_s: int,
    step: float,
    start: int,
    stop: int,
) -> np.ndarray:
    """Norm and area component of the increment over [u, u + s], shape (stop - start, 2)."""
    result = np.empty((stop - start, 2))
    for row, index in enumerate(range(start, stop)):
        rng = substream(seed, Stream.INCREMENTS, index)
        planar, area = WalkState.origin().advance(
            gaussian_increments(rng, steps_u + steps_s, step)
        )
        g_u = np.array([planar[steps_u - 1, 0], planar[steps_u - 1, 1], area[steps_u - 1]])
        g_end = np.array([planar[-1, 0], planar[-1, 1], area[-1]])
        if side is Side.LEFT:
            increment = multiply_points(invert_points(g_u), g_end)
        else:
            increment = multiply_points(g_end, invert_points(g_u))
        result[row] = (homogeneous_norms(increment), increment[2])
    return result


@dataclass(frozen=True, eq=False)
class IncrementSamples:
    side: Side
    u: float
    s: float
    norms: np.ndarray = field(repr=False)
    areas: np.ndarray = field(repr=False)


def increment_samples(
    u: float,
    s: float,
    side: Side,
    n_samples: int,
    steps_per_unit: int,
    seed: int = 0,
    threads: int | None = None,
) -> IncrementSamples:
    ParameterValidator.validate_positive("u", u)
    ParameterValidator.validate_positive("s", s)
    ParameterValidator.validate_count("n_samples", n_samples)
    ParameterValidator.validate_count("steps_per_unit", steps_per_unit)
    block = partial(
        increment_block,
        side,
        seed,
        steps_for(u, steps_per_unit),
        steps_for(s, steps_per_unit),
        1.0 / steps_per_unit,
    )
    pairs = map_blocks(block, n_samples, threads=threads).reshape(n_samples, 2)
    return IncrementSamples(side=side, u=u, s=s, norms=pairs[:, 0], areas=pairs[:, 1])


def fresh_norm_samples(
    s: float,
    n_samples: int,
    steps_per_unit: int,
    seed: int = 0,
    threads: int | None = None,
) -> np.ndarray:
    """|g_s| of fresh paths on the same grid as the increments."""
    steps = steps_for(s, steps_per_unit)
    points = terminal_points(seed, Stream.FRESH, steps / steps_per_unit, steps, n_samples, threads)
    return homogeneous_norms(points)


def expected_area_variance(side: Side, u: float, s: float) -> float:
    """s^2/4 for the left increment; the right one picks up omega(W_u, W_{u+s} - W_u)."""
    return s * s / 4.0 if side is Side.LEFT else s * s / 4.0 + 2.0 * u * s


@dataclass(frozen=True)
class IncrementReport:
    side: Side
    u: float
    s: float
    n_samples: int
    area_variance: MomentEstimate
    expected_area_variance: float
    norm_ks: KSResult
    seed: int


def increment_report(
    u: float,
    s: float,
    side: Side,
    n_samples: int,
    steps_per_unit: int,
    seed: int = 0,
    threads: int | None = None,
) -> IncrementReport:
    samples = increment_samples(u, s, side, n_samples, steps_per_unit, seed, threads)
    fresh = fresh_norm_samples(s, n_samples, steps_per_unit, seed, threads)
    return IncrementReport(
        side=side,
        u=u,
        s=s,
        n_samples=n_samples,
        area_variance=variance_estimate(samples.areas),
        expected_area_variance=expected_area_variance(side, u, s),
        norm_ks=ks_two_sample(samples.norms, fresh),
        seed=seed,
    )
