"""
Arithmetic of the Heisenberg group H = R^2 x R.

A point is g = (v, z) with v = (x, y). The product is

    (v1, z1) . (v2, z2) = (v1 + v2, z1 + z2 + omega(v1, v2) / 2),

where omega(v1, v2) = x1*y2 - x2*y1 is the standard symplectic form. The
identity is e = (0, 0, 0) and (v, z)^-1 = (-v, -z).

Left translation follows the convention L_k g = k^-1 g, so the pushforward
dL_k maps T_g H to T_{k^-1 g} H; right translation is R_k g = g k.

Scalar functions work on ``GroupElement`` values; the ``*_points`` functions
are their vectorized counterparts on arrays of shape (..., 3) and are what
the simulators use.
"""

import math
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from core.context import Side
from core.validators import ParameterValidator

Planar = tuple[float, float]


@dataclass(frozen=True, slots=True)
class GroupElement:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            ParameterValidator.validate_finite(name, getattr(self, name))

    @property
    def horizontal(self) -> Planar:
        return (self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "GroupElement":
        return cls(float(values[0]), float(values[1]), float(values[2]))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mul(self, other)


IDENTITY = GroupElement(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class SymplecticValue:
    value: float

    @classmethod
    def between(cls, v1: Planar, v2: Planar) -> "SymplecticValue":
        return cls(omega(v1, v2))

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True, slots=True)
class TangentVector:
    """A vector (v1, v2, v3) in the tangent space at ``base``."""

    base: GroupElement
    v1: float
    v2: float
    v3: float

    def __post_init__(self) -> None:
        for name in ("v1", "v2", "v3"):
            ParameterValidator.validate_finite(name, getattr(self, name))

    @property
    def horizontal(self) -> Planar:
        return (self.v1, self.v2)

    @property
    def components(self) -> tuple[float, float, float]:
        return (self.v1, self.v2, self.v3)


def omega(v1: Planar, v2: Planar) -> float:
    return v1[0] * v2[1] - v2[0] * v1[1]


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(
        g.x + h.x,
        g.y + h.y,
        g.z + h.z + 0.5 * omega(g.horizontal, h.horizontal),
    )


def inv(g: GroupElement) -> GroupElement:
    return GroupElement(-g.x, -g.y, -g.z)


def left_translate(k: GroupElement, g: GroupElement) -> GroupElement:
    """L_k g = k^-1 g."""
    return mul(inv(k), g)


def right_translate(k: GroupElement, g: GroupElement) -> GroupElement:
    """R_k g = g k."""
    return mul(g, k)


def homogeneous_norm(g: GroupElement) -> float:
    """
    |g| = (|v|^4 + z^2)^(1/4).

    Evaluated as sqrt(M) * ((|v|^2/M)^2 + (|z|/M)^2)^(1/4) with
    M = max(|v|^2, |z|), which stays finite for huge coordinates.
    """
    radius = math.hypot(g.x, g.y)
    scale = max(radius, math.sqrt(abs(g.z)))
    if scale == 0.0:
        return 0.0
    planar = radius / scale
    vertical = math.sqrt(abs(g.z)) / scale
    return scale * (planar**4 + vertical**4) ** 0.25


def distance(g1: GroupElement, g2: GroupElement) -> float:
    """Left-invariant homogeneous distance rho(g1, g2) = |g2^-1 g1|."""
    return homogeneous_norm(mul(inv(g2), g1))


def dilate(lam: float, g: GroupElement) -> GroupElement:
    """Anisotropic dilation (lam x, lam y, lam^2 z); |dilate(lam, g)| = lam |g|."""
    if not (math.isfinite(lam) and lam > 0):
        msg = f"Dilation factor must be positive, got {lam!r}"
        raise ValidationError(msg)
    return GroupElement(lam * g.x, lam * g.y, lam * lam * g.z)


def translation_differential(
    k: GroupElement,
    v: TangentVector,
    side: Side,
) -> TangentVector:
    """
    Pushforward of v in T_g H along L_k (to T_{k^-1 g} H) or R_k (to T_{g k} H).

    Both differentials act as (v1, v2, v3) -> (v1, v2, v3 + omega(v, k) / 2).
    """
    base = left_translate(k, v.base) if side is Side.LEFT else right_translate(k, v.base)
    return TangentVector(
        base,
        v.v1,
        v.v2,
        v.v3 + 0.5 * omega(v.horizontal, k.horizontal),
    )


def maurer_cartan(gamma: GroupElement, velocity: TangentVector) -> TangentVector:
    """dL_gamma(gamma') = (x', z' - omega(x, x') / 2), a vector at the identity."""
    return translation_differential(gamma, velocity, Side.LEFT)


def frame_at(p: GroupElement) -> tuple[TangentVector, TangentVector, TangentVector]:
    """Left-invariant frame X = d_x - y/2 d_z, Y = d_y + x/2 d_z, Z = d_z at p."""
    return (
        TangentVector(p, 1.0, 0.0, -0.5 * p.y),
        TangentVector(p, 0.0, 1.0, 0.5 * p.x),
        TangentVector(p, 0.0, 0.0, 1.0),
    )


def lie_bracket(
    a: tuple[float, float, float],
    b: tuple[float, float, float],
) -> tuple[float, float, float]:
    """Bracket of the Lie algebra: only [X, Y] = Z is nonzero."""
    return (0.0, 0.0, omega((a[0], a[1]), (b[0], b[1])))


# Vectorized forms on arrays of shape (..., 3) or (..., 2) for planar parts.


def symplectic(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    return v1[..., 0] * v2[..., 1] - v2[..., 0] * v1[..., 1]


def multiply_points(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    g, h = np.broadcast_arrays(np.asarray(g, dtype=float), np.asarray(h, dtype=float))
    product = g + h
    product[..., 2] += 0.5 * symplectic(g[..., :2], h[..., :2])
    return product


def invert_points(g: np.ndarray) -> np.ndarray:
    return -np.asarray(g, dtype=float)


def dilate_points(lam: float, g: np.ndarray) -> np.ndarray:
    if not (math.isfinite(lam) and lam > 0):
        msg = f"Dilation factor must be positive, got {lam!r}"
        raise ValidationError(msg)
    scaled = np.array(g, dtype=float)
    scaled[..., :2] *= lam
    scaled[..., 2] *= lam * lam
    return scaled


def homogeneous_norms(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    radius = np.hypot(points[..., 0], points[..., 1])
    root_z = np.sqrt(np.abs(points[..., 2]))
    scale = np.maximum(radius, root_z)
    safe = np.where(scale > 0.0, scale, 1.0)
    return scale * ((radius / safe) ** 4 + (root_z / safe) ** 4) ** 0.25


def norms_from_parts(planar: np.ndarray, area: np.ndarray) -> np.ndarray:
    """|g| for g = (planar, area) given as separate (n, 2) and (n,) arrays."""
    radius = np.hypot(planar[..., 0], planar[..., 1])
    root_z = np.sqrt(np.abs(area))
    scale = np.maximum(radius, root_z)
    safe = np.where(scale > 0.0, scale, 1.0)
    return scale * ((radius / safe) ** 4 + (root_z / safe) ** 4) ** 0.25
