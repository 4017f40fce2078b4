"""Containment, restriction and density of packings in balls about the origin"""

from __future__ import annotations

import math

import numpy as np

from geometry import PreconditionError

from .models import CylinderSpec, Packing

CONTAIN_TOL = 1e-9


def _max_rim_radius(ends: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Largest distance from the origin to the unit rim circle around each end."""
    along = np.einsum("ij,ij->i", ends, directions)
    perp = np.linalg.norm(ends - along[:, None] * directions, axis=1)
    return np.sqrt(along * along + (perp + 1.0) ** 2)


def contained_mask(p: Packing, R: float, tol: float = CONTAIN_TOL) -> np.ndarray:
    """Boolean mask of the cylinders lying in the closed ball B(R)."""
    if p.n == 0:
        return np.zeros(0, dtype=bool)
    if p.capped:
        reach0 = np.linalg.norm(p.p0, axis=1) + 1.0
        reach1 = np.linalg.norm(p.p1, axis=1) + 1.0
    else:
        # a flat-ended cylinder is the convex hull of its two rim circles
        directions = p.directions
        reach0 = _max_rim_radius(p.p0, directions)
        reach1 = _max_rim_radius(p.p1, directions)
    return np.maximum(reach0, reach1) <= R + tol


def contains_in_ball(c: CylinderSpec, R: float, tol: float = CONTAIN_TOL) -> bool:
    """True iff the cylinder lies in the closed ball of radius R about the origin."""
    p0, p1 = c.ends
    if c.capped:
        return max(np.linalg.norm(p0), np.linalg.norm(p1)) + 1.0 <= R + tol
    direction = c.axis.direction
    reach = _max_rim_radius(np.stack([p0, p1]), np.stack([direction, direction]))
    return bool(reach.max() <= R + tol)


def restrict(p: Packing, R_inner: float) -> Packing:
    """Sub-packing of the cylinders contained in B(R_inner)."""
    if not 0.0 < R_inner <= p.R + CONTAIN_TOL:
        raise PreconditionError(f"need 0 < R_inner <= R, got R_inner={R_inner}, R={p.R}")
    return p.subset(contained_mask(p, R_inner), R_inner=R_inner)


def ball_volume(radius: float) -> float:
    return 4.0 / 3.0 * math.pi * radius ** 3


def density(p: Packing, R: float, Rp: float) -> float:
    """Volume of the cylinders inside B(R) divided by the volume of B(Rp)."""
    if not 0.0 < R <= Rp:
        raise PreconditionError(f"need 0 < R <= R', got R={R}, R'={Rp}")
    if p.n == 0:
        return 0.0
    mask = contained_mask(p, R)
    return float(p.volumes()[mask].sum() / ball_volume(Rp))
