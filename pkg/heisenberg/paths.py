"""
Polygonal paths in the Heisenberg group and their horizontal lifts.

A curve is horizontal iff z' = omega(x, x') / 2. For a polygonal path the
discrete counterpart, segment by segment, is

    z_{k+1} - z_k = omega(x_k, x_{k+1} - x_k) / 2,

and ``horizontality_defect`` measures the largest violation of it.
"""

from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from .group import GroupElement, symplectic

DEFECT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class PolygonalPath:
    vertices: np.ndarray = field(repr=False)
    times: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vertices = np.asarray(self.vertices, dtype=float)
        times = np.asarray(self.times, dtype=float)
        if vertices.ndim != 2 or vertices.shape[1] != 3:  # noqa: PLR2004
            msg = "Path vertices must be an array of shape (m, 3)"
            raise ValidationError(msg)
        if len(vertices) == 0:
            msg = "A path needs at least one vertex"
            raise ValidationError(msg)
        if times.shape != (len(vertices),):
            msg = "Path times must match the vertices one to one"
            raise ValidationError(msg)
        if not (np.all(np.isfinite(vertices)) and np.all(np.isfinite(times))):
            msg = "Path vertices and times must be finite"
            raise ValidationError(msg)
        if np.any(np.diff(times) <= 0):
            msg = "Path times must be strictly increasing"
            raise ValidationError(msg)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def planar(self) -> np.ndarray:
        return self.vertices[:, :2]

    @property
    def elements(self) -> list[GroupElement]:
        return [GroupElement.from_array(row) for row in self.vertices]

    @property
    def scale(self) -> float:
        """max(1, max|z|, max |x|^2): the magnitude rounding errors are relative to."""
        planar_sq = float(np.max(np.sum(self.planar**2, axis=1)))
        return max(1.0, float(np.max(np.abs(self.vertices[:, 2]))), planar_sq)


def segment_defects(path: PolygonalPath, *, midpoint: bool = False) -> np.ndarray:
    """
    Per-segment defects |dz_k - omega(p_k, dx_k) / 2|, with p_k the left end
    of the segment or, when ``midpoint`` is set, its midpoint. Both agree
    because omega(dx, dx) = 0.
    """
    if len(path) < 2:  # noqa: PLR2004
        msg = "Horizontality is undefined for a single-vertex path"
        raise ValidationError(msg)
    planar = path.planar
    dx = np.diff(planar, axis=0)
    anchor = planar[:-1] + 0.5 * dx if midpoint else planar[:-1]
    dz = np.diff(path.vertices[:, 2])
    return np.abs(dz - 0.5 * symplectic(anchor, dx))


def horizontality_defect(path: PolygonalPath) -> float:
    return float(np.max(segment_defects(path)))


def is_horizontal(path: PolygonalPath, tolerance: float = DEFECT_TOLERANCE) -> bool:
    return horizontality_defect(path) <= tolerance * path.scale


def polygonal_lift(
    planar: np.ndarray | list[tuple[float, float]],
    times: np.ndarray | None = None,
) -> PolygonalPath:
    """
    Horizontal lift of a planar polygon starting at z = 0.

    ``times`` defaults to 0, 1, ..., m - 1. The final z of a closed loop is
    the signed area it encloses.
    """
    planar = np.asarray(planar, dtype=float)
    if planar.size == 0:
        msg = "Cannot lift an empty polygon"
        raise ValidationError(msg)
    if planar.ndim != 2 or planar.shape[1] != 2:  # noqa: PLR2004
        msg = "Planar vertices must be an array of shape (m, 2)"
        raise ValidationError(msg)
    dx = np.diff(planar, axis=0)
    z = np.concatenate(([0.0], np.cumsum(0.5 * symplectic(planar[:-1], dx))))
    if times is None:
        times = np.arange(len(planar), dtype=float)
    return PolygonalPath(np.column_stack([planar, z]), np.asarray(times, dtype=float))


def horizontal_length(path: PolygonalPath, tolerance: float = DEFECT_TOLERANCE) -> float:
    """Sum of |dx_k|, or +inf if the path is not (numerically) horizontal."""
    if len(path) == 1:
        return 0.0
    if not is_horizontal(path, tolerance):
        return float("inf")
    return float(np.sum(np.hypot(*np.diff(path.planar, axis=0).T)))
