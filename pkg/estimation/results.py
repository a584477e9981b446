import math
from dataclasses import dataclass, field

import numpy as np

from core.context import ProcessKind

from .statistics import binomial_stderr, standardized_difference


@dataclass(frozen=True)
class SmallBallEstimate:
    kind: ProcessKind
    epsilon: float
    p_hat: float
    ci_low: float
    ci_high: float
    n_paths: int
    steps: int
    seed: int
    successes: int
    horizon: float = 1.0

    @property
    def stderr(self) -> float:
        return binomial_stderr(self.p_hat, self.n_paths)

    @property
    def rate_estimate(self) -> float:
        """-eps^2 log p_hat, the finite-eps proxy for the small-ball constant."""
        if self.p_hat == 0.0:
            return math.inf
        return -(self.epsilon**2) * math.log(self.p_hat)


@dataclass(frozen=True)
class RateFit:
    kind: ProcessKind
    rate: float
    stderr: float
    intercept: float
    window: tuple[float, float]
    n_points: int
    seed: int


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    """
    Empirical survival of the first exit time. ``times`` are the sorted
    uncensored exit times and ``survival[i]`` = 1 - (i + 1) / n is the
    fraction of all n paths still inside just after ``times[i]``.
    """

    times: np.ndarray = field(repr=False)
    survival: np.ndarray = field(repr=False)
    n: int
    censored_at: float

    @classmethod
    def from_exit_times(
        cls,
        exit_times: np.ndarray,
        censored: np.ndarray,
        t_max: float,
    ) -> "SurvivalCurve":
        n = len(exit_times)
        times = np.sort(np.asarray(exit_times, dtype=float)[~np.asarray(censored, dtype=bool)])
        survival = 1.0 - np.arange(1, times.size + 1) / n
        return cls(times=times, survival=survival, n=n, censored_at=t_max)

    @property
    def exits(self) -> int:
        return int(self.times.size)

    @property
    def final_survival(self) -> float:
        """Fraction of paths still inside at the censoring time."""
        return 1.0 - self.exits / self.n

    def survival_at(self, t: float) -> float:
        return 1.0 - int(np.searchsorted(self.times, t, side="right")) / self.n


@dataclass(frozen=True)
class ScalingComparison:
    """Two estimates of the same probability and their standardized gap."""

    epsilon: float
    direct_p: float
    direct_ci: tuple[float, float]
    transformed_p: float
    transformed_ci: tuple[float, float]
    n_paths: int
    seed: int
    horizon: float = 1.0

    @property
    def z_score(self) -> float:
        return standardized_difference(
            self.direct_p,
            binomial_stderr(self.direct_p, self.n_paths),
            self.transformed_p,
            binomial_stderr(self.transformed_p, self.n_paths),
        )

    def agrees(self, sigmas: float = 2.0) -> bool:
        return abs(self.z_score) <= sigmas
