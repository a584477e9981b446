"""
Direct Monte Carlo estimates of P(sup_{s<=T} |X_s| < eps) and the fit of
the small-deviation constant c^2 from -log p(eps) ~ c^2 / eps^2.
"""

import logging
import math
from collections.abc import Sequence
from functools import partial

import numpy as np
from django.core.exceptions import ValidationError

from core.context import ProcessKind, Stream
from core.parallel import map_blocks
from core.validators import ParameterValidator

from .processes import running_sups_block
from .results import RateFit, ScalingComparison, SmallBallEstimate
from .statistics import weighted_linear_fit, wilson_interval

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 3


def _validate(n_paths: int, steps: int, seed: int, horizon: float) -> None:
    ParameterValidator.validate_count("n_paths", n_paths)
    ParameterValidator.validate_count("steps", steps)
    ParameterValidator.validate_seed(seed)
    ParameterValidator.validate_positive("horizon", horizon)


def sample_running_sups(
    kinds: Sequence[ProcessKind],
    n_paths: int,
    steps: int,
    seed: int,
    horizon: float = 1.0,
    stream: Stream = Stream.SMALL_BALL,
    threads: int | None = None,
    *,
    bridge: bool = True,
) -> np.ndarray:
    """
    Running sups on [0, horizon], shape (n_paths, len(kinds)), on shared
    noise. BM1 and BM2 are bridge-monitored between grid points unless
    ``bridge`` is off.
    """
    _validate(n_paths, steps, seed, horizon)
    logger.info(
        "Sampling running sups: kinds=%s n_paths=%d steps=%d seed=%d",
        ",".join(kind.value for kind in kinds),
        n_paths,
        steps,
        seed,
    )
    block = partial(running_sups_block, tuple(kinds), seed, stream, horizon, steps, bridge)
    return map_blocks(block, n_paths, threads=threads).reshape(n_paths, len(kinds))


def estimate_from_sups(
    kind: ProcessKind,
    epsilon: float,
    sups: np.ndarray,
    steps: int,
    seed: int,
    horizon: float = 1.0,
) -> SmallBallEstimate:
    ParameterValidator.validate_positive("epsilon", epsilon)
    n_paths = int(sups.size)
    successes = int(np.count_nonzero(sups < epsilon))
    ci_low, ci_high = wilson_interval(successes, n_paths)
    return SmallBallEstimate(
        kind=kind,
        epsilon=epsilon,
        p_hat=successes / n_paths,
        ci_low=ci_low,
        ci_high=ci_high,
        n_paths=n_paths,
        steps=steps,
        seed=seed,
        successes=successes,
        horizon=horizon,
    )


def estimate_small_ball(
    kind: ProcessKind,
    epsilon: float,
    n_paths: int,
    steps: int,
    seed: int = 0,
    horizon: float = 1.0,
    threads: int | None = None,
) -> SmallBallEstimate:
    """Fraction of paths whose running sup over [0, horizon] stays below ``epsilon``."""
    ParameterValidator.validate_positive("epsilon", epsilon)
    sups = sample_running_sups([kind], n_paths, steps, seed, horizon, threads=threads)
    return estimate_from_sups(kind, epsilon, sups[:, 0], steps, seed, horizon)


def estimate_small_ball_grid(
    kind: ProcessKind,
    epsilons: Sequence[float],
    n_paths: int,
    steps: int,
    seed: int = 0,
    horizon: float = 1.0,
    threads: int | None = None,
) -> list[SmallBallEstimate]:
    """One shared set of paths for every epsilon; p_hat is monotone in epsilon."""
    for epsilon in epsilons:
        ParameterValidator.validate_positive("epsilon", epsilon)
    sups = sample_running_sups([kind], n_paths, steps, seed, horizon, threads=threads)[:, 0]
    return [estimate_from_sups(kind, eps, sups, steps, seed, horizon) for eps in epsilons]


def coupled_small_ball(
    epsilon: float,
    n_paths: int,
    steps: int,
    seed: int = 0,
    threads: int | None = None,
) -> tuple[SmallBallEstimate, SmallBallEstimate]:
    """
    HEIS and BM2 estimates from the same driving noise. Since |g| >= |W|
    pathwise, the HEIS successes are a subset of the BM2 ones. Both arms are
    monitored on the grid so the ordering holds path by path.
    """
    ParameterValidator.validate_positive("epsilon", epsilon)
    kinds = (ProcessKind.HEIS, ProcessKind.BM2)
    sups = sample_running_sups(kinds, n_paths, steps, seed, threads=threads, bridge=False)
    heis, bm2 = (
        estimate_from_sups(kind, epsilon, sups[:, column], steps, seed)
        for column, kind in enumerate(kinds)
    )
    return heis, bm2


def fit_small_ball_rate(estimates: Sequence[SmallBallEstimate]) -> RateFit:
    """
    Weighted regression of -log p_hat on 1 / eps^2. The slope estimates c^2;
    each point is weighted by n p / (1 - p), the inverse of the delta-method
    variance of log p_hat.
    """
    if not estimates:
        msg = "No small-ball estimates to fit"
        raise ValidationError(msg)
    kinds = {estimate.kind for estimate in estimates}
    if len(kinds) != 1:
        msg = "All estimates in a rate fit must share one process kind"
        raise ValidationError(msg)
    epsilons = np.array([estimate.epsilon for estimate in estimates])
    if np.unique(epsilons).size < MIN_FIT_POINTS:
        msg = f"A rate fit needs at least {MIN_FIT_POINTS} distinct epsilon values"
        raise ValidationError(msg)
    p = np.array([estimate.p_hat for estimate in estimates])
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        msg = "Every p_hat in a rate fit must lie strictly between 0 and 1"
        raise ValidationError(msg)
    n = np.array([estimate.n_paths for estimate in estimates], dtype=float)

    fit = weighted_linear_fit(1.0 / epsilons**2, -np.log(p), n * p / (1.0 - p))
    return RateFit(
        kind=estimates[0].kind,
        rate=fit.slope,
        stderr=fit.slope_stderr,
        intercept=fit.intercept,
        window=(float(np.min(epsilons)), float(np.max(epsilons))),
        n_points=len(estimates),
        seed=estimates[0].seed,
    )


def horizon_scaling_check(
    kind: ProcessKind,
    epsilon: float,
    horizon: float,
    n_paths: int,
    steps: int,
    seed: int = 0,
    threads: int | None = None,
) -> ScalingComparison:
    """
    P(sup_{s<=T} |X_s| < eps) against P(sup_{s<=1} |X_s| < eps / sqrt(T)).
    Both arms use ``steps`` grid steps, so the two probabilities coincide
    for the discrete scheme as well.
    """
    ParameterValidator.validate_positive("epsilon", epsilon)
    ParameterValidator.validate_positive("horizon", horizon)
    long_sups = sample_running_sups(
        [kind], n_paths, steps, seed, horizon, Stream.HORIZON_LONG, threads
    )[:, 0]
    short_sups = sample_running_sups(
        [kind], n_paths, steps, seed, 1.0, Stream.HORIZON_SHORT, threads
    )[:, 0]
    direct = estimate_from_sups(kind, epsilon, long_sups, steps, seed, horizon)
    scaled = estimate_from_sups(kind, epsilon / math.sqrt(horizon), short_sups, steps, seed)
    return ScalingComparison(
        epsilon=epsilon,
        direct_p=direct.p_hat,
        direct_ci=(direct.ci_low, direct.ci_high),
        transformed_p=scaled.p_hat,
        transformed_ci=(scaled.ci_low, scaled.ci_high),
        n_paths=n_paths,
        seed=seed,
        horizon=horizon,
    )
