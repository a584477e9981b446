"""
Randomized structural checks of the group arithmetic and the simulator.

Each check draws its cases from its own substream, compares the two sides of
an identity and reports the number of violations together with the worst
discrepancy seen.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from core.context import Side, Stream
from core.rng import substream
from core.validators import ParameterValidator

from .group import (
    GroupElement,
    TangentVector,
    dilate_points,
    homogeneous_norms,
    invert_points,
    multiply_points,
    omega,
    symplectic,
    translation_differential,
)
from .paths import segment_defects
from .simulation import SimConfig, simulate_path

logger = logging.getLogger(__name__)

COORDINATE_BOUND = 10.0
RELATIVE_TOLERANCE = 1e-12
SYMPLECTIC_TOLERANCE = 1e-15
DILATIONS = (0.1, 1.0, 7.0)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    cases: int
    failures: int
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _result(name: str, excess: np.ndarray, worst: np.ndarray, tolerance: float) -> PropertyResult:
    """``excess`` > 0 marks a violation; ``worst`` is the reported discrepancy."""
    return PropertyResult(
        name=name,
        cases=len(excess),
        failures=int(np.count_nonzero(excess > 0)),
        worst=float(np.max(worst)) if len(worst) else 0.0,
        tolerance=tolerance,
    )


def _points(rng: np.random.Generator, cases: int) -> np.ndarray:
    return rng.uniform(-COORDINATE_BOUND, COORDINATE_BOUND, size=(cases, 3))


def check_associativity(rng: np.random.Generator, cases: int) -> PropertyResult:
    g, h, k = (_points(rng, cases) for _ in range(3))
    left = multiply_points(multiply_points(g, h), k)
    right = multiply_points(g, multiply_points(h, k))
    gap = np.max(np.abs(left - right), axis=1)
    scale = np.maximum(1.0, np.max(np.abs(np.stack([g, h, k])), axis=(0, 2)) ** 2)
    return _result("associativity", gap - RELATIVE_TOLERANCE * scale, gap / scale, RELATIVE_TOLERANCE)


def check_identity_inverse(rng: np.random.Generator, cases: int) -> PropertyResult:
    g = _points(rng, cases)
    identity = np.zeros_like(g)
    gap = np.maximum(
        np.max(np.abs(multiply_points(g, invert_points(g))), axis=1),
        np.max(np.abs(multiply_points(identity, g) - g), axis=1),
    )
    return _result("identity_inverse", gap, gap, 0.0)


def check_homogeneity(rng: np.random.Generator, cases: int) -> PropertyResult:
    g = _points(rng, cases)
    base = homogeneous_norms(g)
    relative = np.zeros(cases)
    for lam in DILATIONS:
        scaled = homogeneous_norms(dilate_points(lam, g))
        relative = np.maximum(relative, np.abs(scaled - lam * base) / (lam * base))
    return _result("norm_homogeneity", relative - RELATIVE_TOLERANCE, relative, RELATIVE_TOLERANCE)


def check_triangle_inequality(rng: np.random.Generator, cases: int) -> PropertyResult:
    g1, g2 = _points(rng, cases), _points(rng, cases)
    rho = homogeneous_norms(multiply_points(invert_points(g2), g1))
    bound = homogeneous_norms(g1) + homogeneous_norms(g2)
    excess = rho - bound * (1.0 + RELATIVE_TOLERANCE)
    return _result("triangle_inequality", excess, np.maximum(rho / bound - 1.0, 0.0), RELATIVE_TOLERANCE)


def check_left_invariance(rng: np.random.Generator, cases: int) -> PropertyResult:
    g1, g2, k = (_points(rng, cases) for _ in range(3))
    base = homogeneous_norms(multiply_points(invert_points(g2), g1))
    moved = homogeneous_norms(
        multiply_points(invert_points(multiply_points(k, g2)), multiply_points(k, g1))
    )
    gap = np.abs(moved - base) / np.maximum(base, 1.0)
    return _result("left_invariance", gap - RELATIVE_TOLERANCE, gap, RELATIVE_TOLERANCE)


def check_maurer_cartan(rng: np.random.Generator, cases: int) -> PropertyResult:
    curve = _points(rng, cases)
    velocity = _points(rng, cases)
    gaps = np.empty(cases)
    for i in range(cases):
        gamma = GroupElement.from_array(curve[i])
        tangent = TangentVector(gamma, *velocity[i].tolist())
        pulled = translation_differential(gamma, tangent, Side.LEFT)
        expected = (
            tangent.v1,
            tangent.v2,
            tangent.v3 - 0.5 * omega(gamma.horizontal, tangent.horizontal),
        )
        gaps[i] = max(
            max(abs(a - b) for a, b in zip(pulled.components, expected, strict=True)),
            abs(pulled.base.x),
            abs(pulled.base.y),
            abs(pulled.base.z),
        )
    scale = np.maximum(1.0, np.max(np.abs(curve), axis=1) * np.max(np.abs(velocity), axis=1))
    return _result("maurer_cartan", gaps - RELATIVE_TOLERANCE * scale, gaps / scale, RELATIVE_TOLERANCE)


def check_symplectic_antisymmetry(rng: np.random.Generator, cases: int) -> PropertyResult:
    v1, v2 = _points(rng, cases)[:, :2], _points(rng, cases)[:, :2]
    gap = np.maximum(
        np.abs(symplectic(v1, v2) + symplectic(v2, v1)),
        np.abs(symplectic(v1, v1)),
    )
    return _result("symplectic_antisymmetry", gap - SYMPLECTIC_TOLERANCE, gap, SYMPLECTIC_TOLERANCE)


def check_simulated_horizontality(
    seed: int,
    n_paths: int,
    steps: int,
) -> PropertyResult:
    """Left-point and midpoint defects of simulated paths, relative to max(1, max|z|)."""
    worst = np.empty(n_paths)
    for index in range(n_paths):
        path = simulate_path(
            SimConfig(seed=seed, steps=steps, path_index=index, stream=Stream.PATHS)
        )
        scale = max(1.0, float(np.max(np.abs(path.area))))
        polygon = path.as_polygonal()
        defect = max(
            float(np.max(segment_defects(polygon))),
            float(np.max(segment_defects(polygon, midpoint=True))),
        )
        worst[index] = defect / scale
    return _result(
        "simulated_horizontality", worst - RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE
    )


RandomCheck = Callable[[np.random.Generator, int], PropertyResult]

RANDOM_CHECKS: tuple[RandomCheck, ...] = (
    check_associativity,
    check_identity_inverse,
    check_homogeneity,
    check_triangle_inequality,
    check_left_invariance,
    check_maurer_cartan,
    check_symplectic_antisymmetry,
)


def run_property_suite(
    seed: int,
    cases: int = 100_000,
    n_paths: int = 20,
    steps: int = 10_000,
) -> list[PropertyResult]:
    ParameterValidator.validate_count("cases", cases)
    ParameterValidator.validate_count("n_paths", n_paths)
    ParameterValidator.validate_count("steps", steps)
    results = [
        check(substream(seed, Stream.CHECK, position), cases)
        for position, check in enumerate(RANDOM_CHECKS, start=1)
    ]
    results.append(check_simulated_horizontality(seed, n_paths, steps))
    for result in results:
        log = logger.info if result.passed else logger.warning
        log("%s: %d/%d failures, worst %.3g", result.name, result.failures, result.cases, result.worst)
    return results
