"""
Points, segments and plane frames in model units (cylinder radius = 1).

Scalar helpers wrap vectorised numpy kernels so that packings with many
thousands of axes can be queried without Python loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import DegenerateAxis, NonFinite, PreconditionError

Point3 = np.ndarray
Vector3 = np.ndarray
PointLike = Union[Sequence[float], np.ndarray]

# Squared lengths below this are treated as points.
_DEGENERATE_SQ = 1e-24
ON_AXIS_TOL = 1e-9
MIN_AXIS_LENGTH = 1e-12
FRAME_ORTHO_TOL = 1e-12


def as_point3(value: PointLike) -> Point3:
    """Coerce to a finite float64 3-vector."""
    arr = np.asarray(value, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"non-finite coordinates: {arr!r}")
    return arr


@dataclass(frozen=True)
class Segment:
    """Directed closed segment p0 -> p1"""

    p0: Point3
    p1: Point3

    def __post_init__(self):
        object.__setattr__(self, "p0", as_point3(self.p0))
        object.__setattr__(self, "p1", as_point3(self.p1))

    @property
    def vector(self) -> Vector3:
        return self.p1 - self.p0

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def direction(self) -> Vector3:
        length = self.length
        if length < MIN_AXIS_LENGTH:
            raise DegenerateAxis(f"axis length {length:.3e} is below {MIN_AXIS_LENGTH:.0e}")
        return self.vector / length

    @property
    def midpoint(self) -> Point3:
        return 0.5 * (self.p0 + self.p1)

    def point_at(self, s: float) -> Point3:
        """Point at fraction s of the way from p0 to p1."""
        return self.p0 + s * self.vector

    def to_dict(self) -> dict:
        return {"p0": self.p0.tolist(), "p1": self.p1.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Segment":
        return cls(np.asarray(data["p0"], dtype=float), np.asarray(data["p1"], dtype=float))


@dataclass(frozen=True)
class PlaneFrame:
    """Orthonormal frame of the plane through ``origin`` normal to an axis"""

    origin: Point3
    normal: Vector3
    u: Vector3
    v: Vector3

    def directions(self, theta: np.ndarray) -> np.ndarray:
        """Unit in-plane directions for an array of angles, shape (K, 3)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return np.cos(theta)[:, None] * self.u + np.sin(theta)[:, None] * self.v

    def points(self, radius: np.ndarray, theta: np.ndarray) -> np.ndarray:
        radius = np.atleast_1d(np.asarray(radius, dtype=float))
        return self.origin + radius[:, None] * self.directions(theta)

    def to_plane(self, points: np.ndarray) -> np.ndarray:
        """Project world points to (a, b) plane coordinates, shape (K, 2)."""
        rel = np.atleast_2d(points) - self.origin
        return np.stack([rel @ self.u, rel @ self.v], axis=1)

    def to_dict(self) -> dict:
        return {
            "origin": self.origin.tolist(),
            "normal": self.normal.tolist(),
            "u": self.u.tolist(),
            "v": self.v.tolist(),
        }


# ---------------------------------------------------------------------------
# Vectorised kernels


def points_segments_distance(
    points: np.ndarray, p0: np.ndarray, p1: np.ndarray, return_param: bool = False
):
    """Distances from K points to M segments, shape (K, M).

    With ``return_param`` also returns the clamped projection parameter in
    [0, 1] of the nearest point on every segment.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    p0 = np.atleast_2d(np.asarray(p0, dtype=float))
    p1 = np.atleast_2d(np.asarray(p1, dtype=float))
    seg = p1 - p0
    len_sq = np.einsum("ij,ij->i", seg, seg)
    rel = points[:, None, :] - p0[None, :, :]
    dots = np.einsum("kmj,mj->km", rel, seg)
    safe = np.where(len_sq > _DEGENERATE_SQ, len_sq, 1.0)
    s = np.where(len_sq > _DEGENERATE_SQ, np.clip(dots / safe, 0.0, 1.0), 0.0)
    closest = p0[None, :, :] + s[:, :, None] * seg[None, :, :]
    dist = np.linalg.norm(points[:, None, :] - closest, axis=2)
    if return_param:
        return dist, s
    return dist


def segments_segments_distance(
    a0: np.ndarray, a1: np.ndarray, b0: np.ndarray, b1: np.ndarray
) -> np.ndarray:
    """Pairwise closest distance between segments a[k] and b[k], shape (K,).

    Clamped closest-point parametrisation handling parallel, skew,
    intersecting and point-like segments.
    """
    a0 = np.atleast_2d(np.asarray(a0, dtype=float))
    a1 = np.atleast_2d(np.asarray(a1, dtype=float))
    b0 = np.atleast_2d(np.asarray(b0, dtype=float))
    b1 = np.atleast_2d(np.asarray(b1, dtype=float))
    d1 = a1 - a0
    d2 = b1 - b0
    r = a0 - b0
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)

    a_point = a <= _DEGENERATE_SQ
    e_point = e <= _DEGENERATE_SQ
    a_safe = np.where(a_point, 1.0, a)
    e_safe = np.where(e_point, 1.0, e)

    denom = a * e - b * b
    general = ~a_point & ~e_point
    parallel = denom <= 1e-14 * np.maximum(a * e, _DEGENERATE_SQ)
    denom_safe = np.where(parallel, 1.0, denom)
    s = np.where(general & ~parallel, np.clip((b * f - c * e) / denom_safe, 0.0, 1.0), 0.0)
    t = (b * s + f) / e_safe

    below = general & (t < 0.0)
    above = general & (t > 1.0)
    s = np.where(below, np.clip(-c / a_safe, 0.0, 1.0), s)
    s = np.where(above, np.clip((b - c) / a_safe, 0.0, 1.0), s)
    t = np.where(general, np.clip(t, 0.0, 1.0), t)

    # one or both segments collapse to a point
    only_a_point = a_point & ~e_point
    only_e_point = ~a_point & e_point
    both = a_point & e_point
    s = np.where(only_a_point | both, 0.0, s)
    t = np.where(only_a_point, np.clip(f / e_safe, 0.0, 1.0), t)
    t = np.where(only_e_point | both, 0.0, t)
    s = np.where(only_e_point, np.clip(-c / a_safe, 0.0, 1.0), s)

    closest_a = a0 + s[:, None] * d1
    closest_b = b0 + t[:, None] * d2
    return np.linalg.norm(closest_a - closest_b, axis=1)


# ---------------------------------------------------------------------------
# Scalar operations


def point_segment_distance(p: PointLike, s: Segment) -> float:
    """Distance from p to the closed segment s (exact clamped projection)."""
    p = as_point3(p)
    return float(points_segments_distance(p[None, :], s.p0[None, :], s.p1[None, :])[0, 0])


def segment_segment_distance(s1: Segment, s2: Segment) -> float:
    """Minimum distance between two closed segments."""
    return float(segments_segments_distance(s1.p0, s1.p1, s2.p0, s2.p1)[0])


def plane_frame(axis: Segment, x: PointLike, on_axis_tol: float = ON_AXIS_TOL) -> PlaneFrame:
    """Frame of the plane through x normal to ``axis``.

    u is built from the coordinate axis on which the normal has its smallest
    component, so the frame is reproducible for a given axis.
    """
    normal = axis.direction
    x = as_point3(x)
    offset = point_segment_distance(x, axis)
    if offset > on_axis_tol:
        raise PreconditionError(f"point is {offset:.3e} away from the axis")

    k = int(np.argmin(np.abs(normal)))
    seed = np.zeros(3)
    seed[k] = 1.0
    u = seed - np.dot(seed, normal) * normal
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    v /= np.linalg.norm(v)
    return PlaneFrame(origin=x, normal=normal, u=u, v=v)


def frame_is_orthonormal(frame: PlaneFrame, tol: float = FRAME_ORTHO_TOL) -> bool:
    basis = np.stack([frame.u, frame.v, frame.normal])
    return bool(np.allclose(basis @ basis.T, np.eye(3), atol=tol, rtol=0.0))


def chord_interval(
    p0: np.ndarray, p1: np.ndarray, center: np.ndarray, radius: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Arc-length interval of each segment lying inside a closed ball.

    Returns (start, end) arrays measured from p0; empty intervals have
    start >= end.
    """
    p0 = np.atleast_2d(p0)
    seg = np.atleast_2d(p1) - p0
    length = np.linalg.norm(seg, axis=1)
    unit = seg / np.where(length > 0.0, length, 1.0)[:, None]
    rel = np.asarray(center, dtype=float) - p0
    b = np.einsum("ij,ij->i", unit, rel)
    disc = b * b - np.einsum("ij,ij->i", rel, rel) + radius * radius
    root = np.sqrt(np.maximum(disc, 0.0))
    start = np.clip(b - root, 0.0, length)
    end = np.clip(b + root, 0.0, length)
    empty = disc < 0.0
    start = np.where(empty, 0.0, start)
    end = np.where(empty, 0.0, end)
    return start, end
