"""
Order-preserving worker pool for path simulations.

Path indices are cut into blocks whose size does not depend on the number of
workers. Each block is computed by a module-level function from its index
range alone, and blocks are concatenated in index order, so the result is
identical for every thread count.
"""

import logging
import multiprocessing
from collections.abc import Callable
from functools import partial

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

BlockFunction = Callable[[int, int], np.ndarray]


def default_threads() -> int:
    return max(1, int(settings.HEISLAB["THREADS"]))


def default_block_size() -> int:
    return max(1, int(settings.HEISLAB["BLOCK_SIZE"]))


def block_ranges(total: int, block_size: int) -> list[tuple[int, int]]:
    return [
        (start, min(start + block_size, total)) for start in range(0, total, block_size)
    ]


def _call_block(func: BlockFunction, bounds: tuple[int, int]) -> np.ndarray:
    start, stop = bounds
    return func(start, stop)


def map_blocks(
    func: BlockFunction,
    total: int,
    threads: int | None = None,
    block_size: int | None = None,
) -> np.ndarray:
    """
    Evaluate ``func(start, stop)`` over all blocks of ``range(total)`` and
    concatenate the per-block arrays along axis 0 in index order.

    ``func`` must be picklable (a module-level function or a ``partial`` of
    one) when ``threads`` > 1.
    """
    threads = default_threads() if threads is None else max(1, threads)
    block_size = default_block_size() if block_size is None else block_size
    blocks = block_ranges(total, block_size)
    if not blocks:
        return np.empty(0)

    logger.debug("Mapping %d paths in %d blocks on %d workers", total, len(blocks), threads)
    worker = partial(_call_block, func)
    if threads == 1 or len(blocks) == 1:
        parts = [worker(bounds) for bounds in blocks]
    else:
        with multiprocessing.Pool(processes=min(threads, len(blocks))) as pool:
            parts = pool.map(worker, blocks)
    return np.concatenate(parts, axis=0)
