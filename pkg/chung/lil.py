"""
Law-of-iterated-logarithm diagnostics.

With phi(t) = sqrt(log log t / t), the liminf of phi(t) g*_t is an almost
sure constant lying in the Chung interval of ``spectra.bounds``, and the
liminf of phi(t)^2 A*_t is pi/4. A trace follows one long path, records the
statistic at a grid of checkpoints and keeps its running minimum. Finite
horizons never reach the liminf, so a set of traces is only checked against
a widened band around the limit.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from django.core.exceptions import ValidationError

from core.context import Stream, TraceMode
from core.parallel import map_blocks
from core.records import render_csv
from core.rng import gaussian_increments, substream
from core.validators import ParameterValidator
from estimation.statistics import clopper_pearson
from heisenberg.group import norms_from_parts
from heisenberg.simulation import SimConfig, WalkState, default_chunk_steps
from spectra.bounds import chung_bounds, levy_area_rate

logger = logging.getLogger(__name__)

TRACE_CSV_HEADER = ("t", "phi", "stat", "running_min")
DEFAULT_T_MIN = 1e2
DEFAULT_T_MAX = 1e6
DEFAULT_RATIO = 1.2


def phi(t: float) -> float:
    if not (math.isfinite(t) and t > math.e):
        msg = f"phi(t) needs t > e, got {t!r}"
        raise ValidationError(msg)
    return math.sqrt(math.log(math.log(t)) / t)


@dataclass(frozen=True, eq=False)
class LILTrace:
    mode: TraceMode
    checkpoints: np.ndarray = field(repr=False)
    phi_values: np.ndarray = field(repr=False)
    stat_values: np.ndarray = field(repr=False)
    running_min: np.ndarray = field(repr=False)
    seed: int = 0
    path_index: int = 0

    @classmethod
    def from_sups(
        cls,
        mode: TraceMode,
        checkpoints: np.ndarray,
        sups: np.ndarray,
        seed: int = 0,
        path_index: int = 0,
    ) -> "LILTrace":
        """Build a trace from g*_t (group mode) or A*_t (area mode) at each checkpoint."""
        phi_values = np.array([phi(float(t)) for t in checkpoints])
        power = 1 if mode is TraceMode.GROUP else 2
        stat_values = phi_values**power * sups
        return cls(
            mode=mode,
            checkpoints=np.asarray(checkpoints, dtype=float),
            phi_values=phi_values,
            stat_values=stat_values,
            running_min=np.minimum.accumulate(stat_values),
            seed=seed,
            path_index=path_index,
        )

    @property
    def terminal_min(self) -> float:
        return float(self.running_min[-1])


def default_checkpoints(
    t_min: float = DEFAULT_T_MIN,
    t_max: float = DEFAULT_T_MAX,
    ratio: float = DEFAULT_RATIO,
) -> np.ndarray:
    """Geometric grid t_min * ratio^j below t_max, with t_max appended."""
    ParameterValidator.validate_positive("t_max", t_max)
    ParameterValidator.validate_positive("ratio", ratio)
    if not (math.isfinite(t_min) and t_min > math.e):
        msg = f"t_min must exceed e, got {t_min!r}"
        raise ValidationError(msg)
    if t_max <= t_min:
        msg = f"t_max must exceed t_min, got t_min={t_min} t_max={t_max}"
        raise ValidationError(msg)
    if ratio <= 1.0:
        msg = f"ratio must exceed 1, got {ratio}"
        raise ValidationError(msg)
    count = int(math.floor(math.log(t_max / t_min) / math.log(ratio))) + 1
    grid = t_min * ratio ** np.arange(count)
    return np.append(grid[grid < t_max], t_max)


def validate_checkpoints(checkpoints: np.ndarray, horizon: float) -> np.ndarray:
    checkpoints = np.asarray(checkpoints, dtype=float)
    if checkpoints.ndim != 1 or checkpoints.size == 0:
        msg = "At least one checkpoint is required"
        raise ValidationError(msg)
    if not np.all(np.isfinite(checkpoints)):
        msg = "Checkpoints must be finite"
        raise ValidationError(msg)
    ParameterValidator.validate_increasing("checkpoints", checkpoints.tolist())
    if checkpoints[0] <= math.e:
        msg = f"Checkpoints must exceed e, got {checkpoints[0]}"
        raise ValidationError(msg)
    if checkpoints[-1] > horizon:
        msg = f"Last checkpoint {checkpoints[-1]} lies beyond the horizon {horizon}"
        raise ValidationError(msg)
    return checkpoints


def checkpoint_sups(cfg: SimConfig, checkpoints: np.ndarray, mode: TraceMode) -> np.ndarray:
    """
    Running sup of |g| (or |A|) at each checkpoint. The sup is taken over
    every grid step, not only over the checkpoints.
    """
    step = cfg.step_size
    targets = np.clip(np.rint(checkpoints / step).astype(np.int64), 1, cfg.steps)
    rng = substream(cfg.seed, cfg.stream, cfg.path_index)
    chunk_steps = default_chunk_steps()
    state = WalkState.origin()
    sups = np.empty(targets.size)
    running = 0.0
    done = 0
    next_target = 0
    while next_target < targets.size:
        count = min(chunk_steps, int(targets[-1]) - done)
        planar, area = state.advance(gaussian_increments(rng, count, step))
        if mode is TraceMode.GROUP:
            values = norms_from_parts(planar, area)
        else:
            values = np.abs(area)
        chunk_sups = np.maximum(np.maximum.accumulate(values), running)
        while next_target < targets.size and targets[next_target] <= done + count:
            sups[next_target] = chunk_sups[targets[next_target] - done - 1]
            next_target += 1
        running = float(chunk_sups[-1])
        done += count
    return sups


def lil_trace(cfg: SimConfig, checkpoints: np.ndarray, mode: TraceMode) -> LILTrace:
    checkpoints = validate_checkpoints(checkpoints, cfg.horizon)
    ParameterValidator.validate_count("steps", cfg.steps)
    sups = checkpoint_sups(cfg, checkpoints, mode)
    return LILTrace.from_sups(mode, checkpoints, sups, cfg.seed, cfg.path_index)


def lil_block(
    seed: int,
    steps_per_unit: int,
    checkpoints: tuple[float, ...],
    mode: TraceMode,
    start: int,
    stop: int,
) -> np.ndarray:
    grid = np.asarray(checkpoints)
    rows = [
        checkpoint_sups(trace_config(seed, float(grid[-1]), steps_per_unit, index), grid, mode)
        for index in range(start, stop)
    ]
    return np.vstack(rows)


def trace_config(seed: int, horizon: float, steps_per_unit: int, path_index: int) -> SimConfig:
    """Configuration of trace ``path_index`` in a batch built by ``lil_traces``."""
    return SimConfig.at_density(
        seed, horizon, steps_per_unit, path_index=path_index, stream=Stream.LIL
    )


def lil_traces(
    n_seeds: int,
    mode: TraceMode,
    checkpoints: np.ndarray,
    steps_per_unit: int,
    seed: int = 0,
    threads: int | None = None,
) -> list[LILTrace]:
    """Independent traces 0 .. n_seeds - 1 on the LIL substreams, run in parallel."""
    ParameterValidator.validate_count("n_seeds", n_seeds)
    ParameterValidator.validate_count("steps_per_unit", steps_per_unit)
    ParameterValidator.validate_seed(seed)
    checkpoints = validate_checkpoints(checkpoints, math.inf)
    logger.info(
        "LIL traces: mode=%s n_seeds=%d horizon=%s steps_per_unit=%d seed=%d",
        mode.value,
        n_seeds,
        checkpoints[-1],
        steps_per_unit,
        seed,
    )
    block = partial(lil_block, seed, steps_per_unit, tuple(checkpoints.tolist()), mode)
    sups = map_blocks(block, n_seeds, threads=threads, block_size=1)
    sups = sups.reshape(n_seeds, checkpoints.size)
    return [
        LILTrace.from_sups(mode, checkpoints, row, seed, index) for index, row in enumerate(sups)
    ]


def default_band(mode: TraceMode) -> tuple[float, float]:
    """
    Acceptance band for terminal running minima: [0.5 c_lower, 1.5 c_upper]
    around the Chung interval, or [0.5, 2] times pi/4 for the area statistic.
    """
    if mode is TraceMode.GROUP:
        bounds = chung_bounds()
        return 0.5 * bounds.c_lower, 1.5 * bounds.c_upper
    rate = levy_area_rate()
    return 0.5 * rate, 2.0 * rate


@dataclass(frozen=True)
class BandSummary:
    mode: TraceMode
    band: tuple[float, float]
    fraction: float
    ci: tuple[float, float]
    n_seeds: int
    inside: int


def band_check(traces: list[LILTrace], band: tuple[float, float]) -> BandSummary:
    """Fraction of traces whose terminal running minimum lies in ``band``; lo > hi is empty."""
    if not traces:
        msg = "band_check needs at least one trace"
        raise ValidationError(msg)
    modes = {trace.mode for trace in traces}
    if len(modes) != 1:
        msg = "All traces in a band check must share one mode"
        raise ValidationError(msg)
    lo, hi = band
    ParameterValidator.validate_finite("band lower end", lo)
    ParameterValidator.validate_finite("band upper end", hi)
    terminal = np.array([trace.terminal_min for trace in traces])
    inside = 0 if lo > hi else int(np.count_nonzero((terminal >= lo) & (terminal <= hi)))
    n = len(traces)
    return BandSummary(
        mode=modes.pop(),
        band=(lo, hi),
        fraction=inside / n,
        ci=clopper_pearson(inside, n),
        n_seeds=n,
        inside=inside,
    )


def write_trace_csv(trace: LILTrace, stride: int = 1) -> str:
    """``t,phi,stat,running_min`` every ``stride`` checkpoints plus the last one."""
    ParameterValidator.validate_count("stride", stride)
    rows = list(range(0, trace.checkpoints.size, stride))
    if rows[-1] != trace.checkpoints.size - 1:
        rows.append(trace.checkpoints.size - 1)
    return render_csv(
        TRACE_CSV_HEADER,
        (
            (
                trace.checkpoints[k],
                trace.phi_values[k],
                trace.stat_values[k],
                trace.running_min[k],
            )
            for k in rows
        ),
    )
