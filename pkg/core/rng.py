"""
Deterministic random substreams.

Path ``index`` of experiment arm ``stream`` under ``seed`` always draws from

    Generator(Philox(SeedSequence(entropy=seed, spawn_key=(stream, index))))

Philox is a counter-based bit generator and ``SeedSequence`` hashes the
(seed, stream, index) triple into its key, so substreams are independent of
one another and of how paths are scheduled across workers. Gaussians come
from ``Generator.standard_normal`` (ziggurat method, exact up to floating
point). Bit-reproducibility is promised for a fixed numpy version.
"""

import numpy as np

from .context import Stream
from .validators import ParameterValidator

BRIDGE_CHILD = 1


def substream(seed: int, stream: Stream, index: int) -> np.random.Generator:
    ParameterValidator.validate_seed(seed)
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.Philox(sequence))


def bridge_substream(seed: int, stream: Stream, index: int) -> np.random.Generator:
    """Child of path ``index``'s substream for between-grid monitoring draws."""
    ParameterValidator.validate_seed(seed)
    sequence = np.random.SeedSequence(
        entropy=int(seed), spawn_key=(int(stream), int(index), BRIDGE_CHILD)
    )
    return np.random.Generator(np.random.Philox(sequence))


def gaussian_increments(
    rng: np.random.Generator,
    steps: int,
    step: float,
    dimension: int = 2,
) -> np.ndarray:
    """``steps`` independent N(0, step * I) increments, shape (steps, dimension)."""
    return rng.standard_normal((steps, dimension)) * np.sqrt(step)
