"""Axis points whose 4/sqrt(3)-ball contains no cylinder end"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from geometry import PreconditionError

from .density import restrict
from .models import BOUND_PARAMS, Packing

END_TOL = 1e-12


def protected_restriction(p: Packing) -> Packing:
    """The restriction to B(R - 2/sqrt(3)) on which protected points live."""
    inner = p.R - BOUND_PARAMS.r_hex
    if inner <= 0.0:
        raise PreconditionError(f"container radius {p.R} is below 2/sqrt(3)")
    return restrict(p, inner)


def ends_near(p: Packing, points: np.ndarray, radius: float = BOUND_PARAMS.r_end) -> np.ndarray:
    """For each point, whether some axis end of ``p`` lies in the closed ball of ``radius``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if p.n == 0:
        return np.zeros(len(points), dtype=bool)
    tree = cKDTree(p.ends)
    dist, _ = tree.query(points, k=1)
    return dist <= radius + END_TOL


def sample_protected_points(
    p: Packing, n: int, seed: Optional[int] = None, max_tries: int = 200
) -> List[Tuple[int, np.ndarray]]:
    """Random points on axes of restrict(p, R - 2/sqrt(3)) with no end nearby.

    Indices refer to cylinders of that restriction. Fewer than ``n`` points
    come back when the axes offer no protected stretch.
    """
    star = protected_restriction(p)
    if star.n == 0:
        return []
    rng = np.random.default_rng(seed)
    inner = p.R - BOUND_PARAMS.r_hex
    found: List[Tuple[int, np.ndarray]] = []
    batch = max(4 * n, 16)
    for _ in range(max_tries):
        idx = rng.integers(star.n, size=batch)
        s = rng.uniform(0.0, 1.0, batch)
        xs = star.p0[idx] + s[:, None] * (star.p1[idx] - star.p0[idx])
        ok = ~ends_near(star, xs) & (np.linalg.norm(xs, axis=1) <= inner)
        for k in np.flatnonzero(ok):
            found.append((int(idx[k]), xs[k]))
            if len(found) == n:
                return found
    return found
