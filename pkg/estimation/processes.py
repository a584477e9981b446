"""
The four driving processes and the norm that defines each one's unit ball.

All kinds share one driving noise: path ``i`` draws the same planar
increments whatever its kind, and the kind only selects the functional

    BM1  |W^1|                   interval (-1, 1)
    BM2  |W|                     unit disc
    HEIS (|W|^4 + A^2)^(1/4)     unit rho-ball
    AREA sqrt|A|                 |A| < 1

Running the same (seed, stream, index) under two kinds therefore couples
them pathwise.

BM1 and BM2 are monitored between grid points as well: given the grid
values, each step of a Brownian path is a Brownian bridge, whose maximum is
sampled exactly from

    P(max >= m | a, b) = exp(-2 (m - a)(m - b) / h),    m >= max(a, b).

The uniforms for this come from a child substream of the path, so the
increments stay shared with the other kinds. The rho-ball has no such
formula and HEIS and AREA are monitored on the grid only.
"""

from collections.abc import Sequence

import numpy as np

from core.context import ProcessKind, Stream
from core.rng import bridge_substream, gaussian_increments, substream
from heisenberg.group import norms_from_parts
from heisenberg.simulation import WalkState
from spectra.bounds import lambda1, levy_area_rate

NEEDS_AREA = frozenset({ProcessKind.HEIS, ProcessKind.AREA})
BRIDGE_KINDS = frozenset({ProcessKind.BM1, ProcessKind.BM2})


def kind_norms(kind: ProcessKind, planar: np.ndarray, area: np.ndarray) -> np.ndarray:
    if kind is ProcessKind.BM1:
        return np.abs(planar[:, 0])
    if kind is ProcessKind.BM2:
        return np.hypot(planar[:, 0], planar[:, 1])
    if kind is ProcessKind.HEIS:
        return norms_from_parts(planar, area)
    return np.sqrt(np.abs(area))


def reference_rate(kind: ProcessKind) -> float | None:
    """
    Known exit-time tail rate of the unit ball (equal to the small-ball rate
    constant), or None for HEIS where only a bracket is known.
    """
    if kind is ProcessKind.BM1:
        return lambda1(1)
    if kind is ProcessKind.BM2:
        return lambda1(2)
    if kind is ProcessKind.AREA:
        return levy_area_rate()
    return None


def bridge_maxima(start: np.ndarray, end: np.ndarray, step: float, uniforms: np.ndarray) -> np.ndarray:
    """
    Maxima of Brownian bridges of variance ``step`` from ``start`` to ``end``,
    by inversion of the bridge's maximum law; ``uniforms`` lie in (0, 1].
    """
    return 0.5 * (start + end + np.sqrt((end - start) ** 2 - 2.0 * step * np.log(uniforms)))


def bridge_step_sups(
    kind: ProcessKind,
    previous: np.ndarray,
    planar: np.ndarray,
    step: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Sup of the kind's norm over each grid step, for a planar path that is a
    Brownian bridge between consecutive grid points ``previous[k]`` and
    ``planar[k]``.

    For BM1 the upward and downward maxima of W^1 are drawn independently;
    they interact only when one step spans both barriers. For BM2 the bridge
    is projected on the direction of the chord's midpoint, which treats the
    disc as its tangent half-plane within one step.
    """
    n = len(planar)
    if kind is ProcessKind.BM1:
        a, b = previous[:, 0], planar[:, 0]
        uniforms = 1.0 - rng.random((n, 2))
        return np.maximum(
            bridge_maxima(a, b, step, uniforms[:, 0]),
            bridge_maxima(-a, -b, step, uniforms[:, 1]),
        )
    middle = previous + planar
    length = np.hypot(middle[:, 0], middle[:, 1])
    direction = middle / np.where(length > 0.0, length, 1.0)[:, None]
    direction[length == 0.0] = (1.0, 0.0)
    projected = bridge_maxima(
        np.sum(previous * direction, axis=1),
        np.sum(planar * direction, axis=1),
        step,
        1.0 - rng.random(n),
    )
    ends = np.maximum(np.hypot(previous[:, 0], previous[:, 1]), np.hypot(planar[:, 0], planar[:, 1]))
    return np.maximum(projected, ends)


def step_sups(
    kind: ProcessKind,
    previous: np.ndarray,
    planar: np.ndarray,
    area: np.ndarray,
    step: float,
    bridge_rng: np.random.Generator | None,
) -> np.ndarray:
    """Per-step sup of the kind's norm: bridge-sampled when ``bridge_rng`` is given, else at the grid point."""
    if bridge_rng is not None and kind in BRIDGE_KINDS:
        return bridge_step_sups(kind, previous, planar, step, bridge_rng)
    return kind_norms(kind, planar, area)


def running_sups_block(
    kinds: Sequence[ProcessKind],
    seed: int,
    stream: Stream,
    horizon: float,
    steps: int,
    bridge: bool,
    start: int,
    stop: int,
) -> np.ndarray:
    """
    Running sup over [0, horizon] of each kind's norm, shape
    (stop - start, len(kinds)). With ``bridge`` off every kind is monitored
    on the grid only.
    """
    step = horizon / steps
    with_area = any(kind in NEEDS_AREA for kind in kinds)
    bridge = bridge and any(kind in BRIDGE_KINDS for kind in kinds)
    result = np.empty((stop - start, len(kinds)))
    for row, index in enumerate(range(start, stop)):
        dw = gaussian_increments(substream(seed, stream, index), steps, step)
        planar, area = WalkState.origin().advance(dw, with_area=with_area)
        previous = np.vstack([np.zeros((1, 2)), planar[:-1]])
        bridge_rng = bridge_substream(seed, stream, index) if bridge else None
        for column, kind in enumerate(kinds):
            result[row, column] = np.max(step_sups(kind, previous, planar, area, step, bridge_rng))
    return result


def exit_times_block(
    kind: ProcessKind,
    seed: int,
    stream: Stream,
    step: float,
    max_steps: int,
    chunk_steps: int,
    substeps: int,
    start: int,
    stop: int,
) -> np.ndarray:
    """
    First grid time at which each path's norm reaches 1, shape
    (stop - start, 2): column 0 is the time, column 1 is 1.0 for paths
    censored at ``max_steps * step``.

    Each grid increment is the sum of ``substeps`` draws of variance
    ``step / substeps``. A run with ``substeps=2`` and its twofold
    refinement with ``substeps=1`` therefore follow the same Brownian paths.
    """
    with_area = kind in NEEDS_AREA
    draw_step = step / substeps
    result = np.empty((stop - start, 2))
    for row, index in enumerate(range(start, stop)):
        rng = substream(seed, stream, index)
        bridge_rng = bridge_substream(seed, stream, index) if kind in BRIDGE_KINDS else None
        state = WalkState.origin()
        done = 0
        exit_step = -1
        while done < max_steps:
            count = min(chunk_steps, max_steps - done)
            dw = gaussian_increments(rng, count * substeps, draw_step)
            if substeps > 1:
                dw = dw.reshape(count, substeps, 2).sum(axis=1)
            start_point = state.w.copy()
            planar, area = state.advance(dw, with_area=with_area)
            previous = np.vstack([start_point, planar[:-1]])
            hits = np.flatnonzero(step_sups(kind, previous, planar, area, step, bridge_rng) >= 1.0)
            if hits.size:
                exit_step = done + int(hits[0]) + 1
                break
            done += count
        if exit_step < 0:
            result[row] = (max_steps * step, 1.0)
        else:
            result[row] = (exit_step * step, 0.0)
    return result
