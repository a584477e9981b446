"""
Exit-time route to the small-deviation constant.

By the dilation identity, P(sup_{s<=1} |X_s| < eps) = P(tau > eps^-2) with tau
the first exit time of the unit ball, so c^2 is the exponential tail rate of
tau. Paths are followed on the grid until their norm first reaches 1 or
until ``t_max``, where they are censored.

The tail rate is fitted on the window of times where the empirical survival
lies in [0.02, 0.3]: earlier times still carry the non-exponential
transient, later ones are dominated by censoring noise. Within the window
the exits are treated as exponential with a constant hazard, fitted by
maximum likelihood: rate = exits in window / time at risk in window. This
is the slope of log-survival over the window, and rate / sqrt(exits) is its
standard error.
"""

import logging
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from django.core.exceptions import ValidationError

from core.context import ProcessKind, Stream
from core.exceptions import InsufficientTailDataError
from core.parallel import map_blocks
from core.validators import ParameterValidator
from heisenberg.simulation import default_chunk_steps, steps_for
from spectra.bounds import chung_bounds

from .processes import exit_times_block, reference_rate
from .results import RateFit, SurvivalCurve

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = (0.02, 0.3)
MIN_WINDOW_EXITS = 100


@dataclass(frozen=True, eq=False)
class ExitSample:
    times: np.ndarray
    censored: np.ndarray
    t_max: float
    step: float


def simulate_exit_times(
    kind: ProcessKind,
    t_max: float,
    n_paths: int,
    steps_per_unit: int,
    seed: int = 0,
    stream: Stream = Stream.EXIT,
    threads: int | None = None,
    substeps: int = 1,
) -> ExitSample:
    """
    Exit times of the unit ball on a grid of ``steps_per_unit`` steps per
    unit time, each grid step summing ``substeps`` finer Gaussian draws.
    """
    ParameterValidator.validate_positive("t_max", t_max)
    ParameterValidator.validate_count("n_paths", n_paths)
    ParameterValidator.validate_count("steps_per_unit", steps_per_unit)
    ParameterValidator.validate_seed(seed)
    ParameterValidator.validate_count("substeps", substeps)
    max_steps = steps_for(t_max, steps_per_unit)
    step = t_max / max_steps
    logger.info(
        "Simulating exit times: kind=%s t_max=%s n_paths=%d steps_per_unit=%d substeps=%d seed=%d",
        kind.value,
        t_max,
        n_paths,
        steps_per_unit,
        substeps,
        seed,
    )
    block = partial(
        exit_times_block, kind, seed, stream, step, max_steps, default_chunk_steps(), substeps
    )
    result = map_blocks(block, n_paths, threads=threads).reshape(n_paths, 2)
    return ExitSample(
        times=result[:, 0],
        censored=result[:, 1] > 0.5,  # noqa: PLR2004
        t_max=max_steps * step,
        step=step,
    )


def fit_exit_rate(
    curve: SurvivalCurve,
    kind: ProcessKind,
    seed: int,
    window: tuple[float, float] = DEFAULT_WINDOW,
    min_exits: int = MIN_WINDOW_EXITS,
) -> RateFit:
    """
    Constant-hazard fit of the survival tail between the times where the
    survival first drops to ``window[1]`` and last stays at or above
    ``window[0]``.
    """
    ParameterValidator.validate_window("window", window)
    ParameterValidator.validate_count("min_exits", min_exits)
    low, high = window
    ParameterValidator.validate_open_unit_interval("window lower end", low)
    ParameterValidator.validate_open_unit_interval("window upper end", high)
    if curve.final_survival > high:
        msg = (
            f"t_max={curve.censored_at} is too short: survival at t_max is "
            f"{curve.final_survival:.3f}, above the fit window's upper end {high}"
        )
        raise ValidationError(msg)

    times, survival = curve.times, curve.survival
    t_lo = float(times[int(np.argmax(survival <= high))])
    if curve.final_survival >= low:
        t_hi = curve.censored_at
    else:
        inside = np.flatnonzero(survival >= low)
        t_hi = float(times[inside[-1]]) if inside.size else t_lo

    in_window = (times > t_lo) & (times <= t_hi)
    exits = int(np.count_nonzero(in_window))
    if exits < min_exits:
        raise InsufficientTailDataError(exits, min_exits)

    beyond = curve.n - int(np.count_nonzero(times <= t_hi))
    exposure = float(np.sum(times[in_window] - t_lo)) + beyond * (t_hi - t_lo)
    rate = exits / exposure
    intercept = math.log(curve.survival_at(t_lo)) + rate * t_lo
    logger.info("Exit-rate fit: %d exits in [%s, %s], rate=%.6f", exits, t_lo, t_hi, rate)
    return RateFit(
        kind=kind,
        rate=rate,
        stderr=rate / math.sqrt(exits),
        intercept=intercept,
        window=(t_lo, t_hi),
        n_points=exits,
        seed=seed,
    )


def report_bound_bracket(fit: RateFit) -> bool:
    """Log whether a HEIS rate estimate lies in [lambda1(2), f(x*)]."""
    bounds = chung_bounds()
    low, high = bounds.lambda1_2, bounds.f_at_xstar
    inside = low <= fit.rate <= high
    log = logger.info if inside else logger.warning
    log(
        "HEIS exit rate %.6f (stderr %.6f) is %s the bound interval [%.6f, %.6f]",
        fit.rate,
        fit.stderr,
        "inside" if inside else "outside",
        low,
        high,
    )
    return inside


def fit_exit_sample(
    sample: ExitSample,
    kind: ProcessKind,
    seed: int,
    window: tuple[float, float] = DEFAULT_WINDOW,
    min_exits: int = MIN_WINDOW_EXITS,
) -> tuple[SurvivalCurve, RateFit]:
    curve = SurvivalCurve.from_exit_times(sample.times, sample.censored, sample.t_max)
    fit = fit_exit_rate(curve, kind, seed, window, min_exits)
    if kind is ProcessKind.HEIS:
        report_bound_bracket(fit)
    return curve, fit


def estimate_exit_rate(
    kind: ProcessKind,
    t_max: float,
    n_paths: int,
    steps_per_unit: int,
    seed: int = 0,
    window: tuple[float, float] = DEFAULT_WINDOW,
    threads: int | None = None,
    min_exits: int = MIN_WINDOW_EXITS,
) -> tuple[SurvivalCurve, RateFit]:
    sample = simulate_exit_times(kind, t_max, n_paths, steps_per_unit, seed, threads=threads)
    return fit_exit_sample(sample, kind, seed, window, min_exits)


@dataclass(frozen=True)
class CalibrationReport:
    kind: ProcessKind
    reference: float
    fit: RateFit
    relative_error: float
    refined: RateFit
    refinement_shift: float
    steps_per_unit: int


def calibrate(
    kind: ProcessKind,
    t_max: float,
    n_paths: int,
    steps_per_unit: int,
    seed: int = 0,
    window: tuple[float, float] = DEFAULT_WINDOW,
    threads: int | None = None,
    min_exits: int = MIN_WINDOW_EXITS,
) -> CalibrationReport:
    """
    Exit-rate estimate for a process with a known rate, its relative error,
    and the relative shift of the estimate when the grid is refined twofold.

    The refined run follows the same Brownian paths: the coarse grid's
    increments are the pairwise sums of the refined grid's, so the shift
    measures the discretization alone.
    """
    reference = reference_rate(kind)
    if reference is None:
        msg = f"No reference rate is known for kind {kind.value!r}"
        raise ValidationError(msg)
    ParameterValidator.validate_positive("t_max", t_max)
    ParameterValidator.validate_count("steps_per_unit", steps_per_unit)
    horizon = steps_for(t_max, steps_per_unit) / steps_per_unit
    coarse = simulate_exit_times(
        kind, horizon, n_paths, steps_per_unit, seed, threads=threads, substeps=2
    )
    _, fit = fit_exit_sample(coarse, kind, seed, window, min_exits)
    fine = simulate_exit_times(kind, horizon, n_paths, 2 * steps_per_unit, seed, threads=threads)
    _, refined = fit_exit_sample(fine, kind, seed, window, min_exits)
    report = CalibrationReport(
        kind=kind,
        reference=reference,
        fit=fit,
        relative_error=abs(fit.rate - reference) / reference,
        refined=refined,
        refinement_shift=abs(refined.rate - fit.rate) / fit.rate,
        steps_per_unit=steps_per_unit,
    )
    logger.info(
        "Calibration %s: rate=%.6f reference=%.6f relative_error=%.4f refinement_shift=%.4f",
        kind.value,
        fit.rate,
        reference,
        report.relative_error,
        report.refinement_shift,
    )
    return report
