"""Equidistant points on S_x(2/sqrt(3)) and the angle they subtend at x"""

from __future__ import annotations

import math
from typing import List, Optional

import numpy as np

from geometry import as_point3, plane_frame, points_segments_distance
from packing import BOUND_PARAMS, Packing

TWO_PI = 2.0 * math.pi
SCAN_POINTS = 2880
ROOT_TOL = 1e-12


def equidistant_points(p: Packing, i: int, j: int, x, n_scan: int = SCAN_POINTS) -> List[float]:
    """Angles of points q on S_x(2/sqrt(3)) with |q - x| = dist(q, a_j).

    Sign changes of |q - x| - dist(q, a_j) on a uniform scan are refined by
    bisection in theta.
    """
    if i == j:
        raise ValueError("need two distinct cylinders")
    frame = plane_frame(p.segment(i), as_point3(x))
    r = BOUND_PARAMS.r_hex
    a0, a1 = p.p0[j][None, :], p.p1[j][None, :]

    def g(theta: np.ndarray) -> np.ndarray:
        return r - points_segments_distance(frame.points(np.full(len(theta), r), theta), a0, a1)[:, 0]

    theta = TWO_PI * np.arange(n_scan) / n_scan
    values = g(theta)
    nxt = np.roll(np.arange(n_scan), -1)
    positive = values > 0.0
    cells = np.flatnonzero(positive != positive[nxt])
    roots = list(theta[values == 0.0])
    if len(cells):
        lo = theta[cells]
        hi = lo + TWO_PI / n_scan
        left = positive[cells]
        while (hi - lo).max() > ROOT_TOL:
            mid = 0.5 * (lo + hi)
            same = (g(mid) > 0.0) == left
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        roots.extend(np.mod(0.5 * (lo + hi), TWO_PI))
    return sorted(float(t) for t in roots)


def equidistant_angle_max(p: Packing, i: int, j: int, x, n_scan: int = SCAN_POINTS) -> Optional[float]:
    """Largest angle at x between two equidistant points, or None if there are none."""
    roots = np.asarray(equidistant_points(p, i, j, x, n_scan))
    if len(roots) < 2:
        return None
    diff = np.abs(roots[:, None] - roots[None, :]) % TWO_PI
    return float(np.minimum(diff, TWO_PI - diff).max())
