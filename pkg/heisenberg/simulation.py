"""
Discretized hypoelliptic Brownian motion g_t = (W_t, A_t).

With h = T / n the scheme is

    W_{k+1} = W_k + sqrt(h) xi_k,        xi_k ~ N(0, I_2) independent,
    A_{k+1} = A_k + omega(W_k, W_{k+1} - W_k) / 2,

the Ito left-point rule for Levy's stochastic area. The simulated states are
exactly the horizontal lift of the polygonal Brownian interpolation, so a
path passes ``horizontality_defect`` up to rounding.

Path ``i`` of a configuration draws from ``substream(seed, stream, i)`` and
nothing else, so every sample set is a pure function of (seed, stream,
configuration) regardless of how paths are spread over workers.
"""

import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from django.conf import settings

from core.context import Stream
from core.parallel import map_blocks
from core.records import render_csv
from core.rng import gaussian_increments, substream
from core.validators import ParameterValidator

from .group import GroupElement, homogeneous_norms, symplectic
from .paths import PolygonalPath

logger = logging.getLogger(__name__)

PATH_CSV_HEADER = ("t", "x", "y", "z", "sup_norm")


def default_steps_per_unit() -> int:
    return int(settings.HEISLAB["STEPS_PER_UNIT"])


def default_chunk_steps() -> int:
    return max(1, int(settings.HEISLAB["CHUNK_STEPS"]))


def steps_for(horizon: float, steps_per_unit: int) -> int:
    """Number of grid steps covering [0, horizon] at a per-unit-time density."""
    return max(1, round(horizon * steps_per_unit))


@dataclass(frozen=True)
class SimConfig:
    seed: int
    horizon: float = 1.0
    steps: int = 10_000
    record_stride: int = 1
    path_index: int = 0
    stream: Stream = Stream.PATHS

    def __post_init__(self) -> None:
        ParameterValidator.validate_seed(self.seed)
        ParameterValidator.validate_positive("horizon", self.horizon)
        ParameterValidator.validate_count("steps", self.steps, minimum=0)
        ParameterValidator.validate_count("record_stride", self.record_stride)
        ParameterValidator.validate_count("path_index", self.path_index, minimum=0)

    @classmethod
    def at_density(
        cls,
        seed: int,
        horizon: float,
        steps_per_unit: int,
        **kwargs: object,
    ) -> "SimConfig":
        ParameterValidator.validate_positive("horizon", horizon)
        ParameterValidator.validate_count("steps_per_unit", steps_per_unit)
        return cls(seed=seed, horizon=horizon, steps=steps_for(horizon, steps_per_unit), **kwargs)

    @property
    def step_size(self) -> float:
        return self.horizon / self.steps if self.steps else 0.0

    @property
    def steps_per_unit(self) -> float:
        return self.steps / self.horizon


@dataclass(frozen=True)
class PathStats:
    g_star: float
    b_star: float
    a_star: float
    w_final: tuple[float, float]
    a_final: float


@dataclass(frozen=True, eq=False)
class HeisenbergPath:
    times: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    sup_norm: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def planar(self) -> np.ndarray:
        return self.points[:, :2]

    @property
    def area(self) -> np.ndarray:
        return self.points[:, 2]

    @property
    def states(self) -> list[GroupElement]:
        return [GroupElement.from_array(row) for row in self.points]

    def as_polygonal(self) -> PolygonalPath:
        return PolygonalPath(self.points, self.times)

    def stats(self) -> PathStats:
        return running_sup_norm(self)


def area_increments(w_prev: np.ndarray, dw: np.ndarray) -> np.ndarray:
    """Ito left-point increments omega(W_k, dW_k) / 2."""
    return 0.5 * symplectic(w_prev, dw)


def midpoint_area_increments(w_prev: np.ndarray, dw: np.ndarray) -> np.ndarray:
    """Stratonovich midpoint increments; equal to the left-point ones."""
    return 0.5 * symplectic(w_prev + 0.5 * dw, dw)


@dataclass
class WalkState:
    """Current (W, A) of a path being advanced chunk by chunk."""

    w: np.ndarray
    a: float = 0.0

    @classmethod
    def origin(cls) -> "WalkState":
        return cls(np.zeros(2))

    def advance(self, dw: np.ndarray, *, with_area: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """
        Apply the increments ``dw`` (shape (n, 2)) and return the planar
        positions and areas after each of them. Areas are zero when
        ``with_area`` is off.
        """
        planar = self.w + np.cumsum(dw, axis=0)
        if with_area:
            previous = np.vstack([self.w, planar[:-1]])
            area = self.a + np.cumsum(area_increments(previous, dw))
            self.a = float(area[-1])
        else:
            area = np.zeros(len(dw))
        self.w = planar[-1].copy()
        return planar, area


def simulate_path(cfg: SimConfig) -> HeisenbergPath:
    rng = substream(cfg.seed, cfg.stream, cfg.path_index)
    times = np.linspace(0.0, cfg.horizon, cfg.steps + 1) if cfg.steps else np.zeros(1)
    points = np.zeros((cfg.steps + 1, 3))
    if cfg.steps:
        dw = gaussian_increments(rng, cfg.steps, cfg.step_size)
        planar, area = WalkState.origin().advance(dw)
        points[1:, :2] = planar
        points[1:, 2] = area
    sup_norm = np.maximum.accumulate(homogeneous_norms(points))
    return HeisenbergPath(times, points, sup_norm)


def running_sup_norm(path: HeisenbergPath) -> PathStats:
    planar = path.planar
    return PathStats(
        g_star=float(np.max(homogeneous_norms(path.points))),
        b_star=float(np.max(np.hypot(planar[:, 0], planar[:, 1]))),
        a_star=float(np.max(np.abs(path.area))),
        w_final=(float(planar[-1, 0]), float(planar[-1, 1])),
        a_final=float(path.area[-1]),
    )


def terminal_points_block(
    seed: int,
    stream: Stream,
    horizon: float,
    steps: int,
    start: int,
    stop: int,
) -> np.ndarray:
    """g_T of paths ``start`` .. ``stop - 1``, shape (stop - start, 3)."""
    step = horizon / steps
    result = np.empty((stop - start, 3))
    for row, index in enumerate(range(start, stop)):
        dw = gaussian_increments(substream(seed, stream, index), steps, step)
        planar, area = WalkState.origin().advance(dw)
        result[row, :2] = planar[-1]
        result[row, 2] = area[-1]
    return result


def terminal_points(
    seed: int,
    stream: Stream,
    horizon: float,
    steps: int,
    n_samples: int,
    threads: int | None = None,
) -> np.ndarray:
    ParameterValidator.validate_count("n_samples", n_samples)
    ParameterValidator.validate_count("steps", steps)
    block = partial(terminal_points_block, seed, stream, horizon, steps)
    return map_blocks(block, n_samples, threads=threads)


@dataclass(frozen=True, eq=False)
class ScaledSamples:
    epsilon: float
    short: np.ndarray = field(repr=False)
    long: np.ndarray = field(repr=False)


def scaled_path_samples(
    cfg: SimConfig,
    epsilon: float,
    n_samples: int,
    threads: int | None = None,
) -> ScaledSamples:
    """
    Samples of |g_eps| and of sqrt(eps) |g_1|, equal in law by the dilation
    property of the process. Both arms use ``cfg.steps`` grid steps, so the
    identity also holds exactly for the discrete scheme. Each arm has its own
    substream tag.
    """
    ParameterValidator.validate_positive("epsilon", epsilon)
    ParameterValidator.validate_count("steps", cfg.steps)
    logger.info(
        "Sampling scaled paths: epsilon=%s n_samples=%d seed=%d", epsilon, n_samples, cfg.seed
    )
    short = terminal_points(cfg.seed, Stream.SCALED_SHORT, epsilon, cfg.steps, n_samples, threads)
    long = terminal_points(cfg.seed, Stream.SCALED_LONG, 1.0, cfg.steps, n_samples, threads)
    return ScaledSamples(
        epsilon=epsilon,
        short=homogeneous_norms(short),
        long=np.sqrt(epsilon) * homogeneous_norms(long),
    )


def write_path_csv(path: HeisenbergPath, stride: int = 1) -> str:
    """Path dump, one row every ``stride`` grid points plus the final point."""
    ParameterValidator.validate_count("stride", stride)
    rows = list(range(0, len(path), stride))
    if rows[-1] != len(path) - 1:
        rows.append(len(path) - 1)
    return render_csv(
        PATH_CSV_HEADER,
        (
            (path.times[k], path.points[k, 0], path.points[k, 1], path.points[k, 2], path.sup_norm[k])
            for k in rows
        ),
    )

