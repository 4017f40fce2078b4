"""Validity checks: disjoint interiors and containment in the ball"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from geometry import segments_segments_distance

from .density import contained_mask
from .index import AxisIndex
from .models import Packing

logger = logging.getLogger(__name__)

PAIR_TOL = 1e-9
SURFACE_SAMPLES = 4000


@dataclass
class ValidationReport:
    valid: bool
    overlapping: List[Tuple[int, int, float]] = field(default_factory=list)
    uncontained: List[int] = field(default_factory=list)
    checked_pairs: int = 0
    sampled_pairs: int = 0

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "overlapping": [[i, j, d] for i, j, d in self.overlapping],
            "uncontained": list(self.uncontained),
            "checked_pairs": self.checked_pairs,
            "sampled_pairs": self.sampled_pairs,
        }


def _end_plane_separated(p: Packing, i: np.ndarray, j: np.ndarray, tol: float) -> np.ndarray:
    """True where a flat end plane of one cylinder separates it from the other."""
    dirs = p.directions
    separated = np.zeros(len(i), dtype=bool)
    for a, b in ((i, j), (j, i)):
        e = dirs[a]
        # support half-width of cylinder b along e: |e x e_b| for a unit disc
        spread = np.linalg.norm(np.cross(e, dirs[b]), axis=1)
        lo_a = np.einsum("ij,ij->i", p.p0[a], e)
        hi_a = np.einsum("ij,ij->i", p.p1[a], e)
        b0 = np.einsum("ij,ij->i", p.p0[b], e)
        b1 = np.einsum("ij,ij->i", p.p1[b], e)
        lo_b = np.minimum(b0, b1) - spread
        hi_b = np.maximum(b0, b1) + spread
        separated |= (lo_b >= hi_a - tol) | (hi_b <= lo_a + tol)
    return separated


def _surface_points(p0: np.ndarray, p1: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    axis = p1 - p0
    length = np.linalg.norm(axis)
    e = axis / length
    k = int(np.argmin(np.abs(e)))
    seed = np.zeros(3)
    seed[k] = 1.0
    u = seed - seed @ e * e
    u /= np.linalg.norm(u)
    v = np.cross(e, u)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    ring = np.cos(theta)[:, None] * u + np.sin(theta)[:, None] * v
    lateral_n = n // 2
    s = rng.uniform(0.0, 1.0, lateral_n)
    lateral = p0 + s[:, None] * axis + ring[:lateral_n]
    rad = np.sqrt(rng.uniform(0.0, 1.0, n - lateral_n))
    caps = np.where(rng.uniform(size=n - lateral_n)[:, None] < 0.5, p0, p1)
    discs = caps + rad[:, None] * ring[lateral_n:]
    return np.concatenate([lateral, discs])


def _penetrates(points: np.ndarray, p0: np.ndarray, p1: np.ndarray, tol: float) -> bool:
    axis = p1 - p0
    length = np.linalg.norm(axis)
    e = axis / length
    rel = points - p0
    along = rel @ e
    radial = np.linalg.norm(rel - along[:, None] * e, axis=1)
    inside = (radial < 1.0 - tol) & (along > tol) & (along < length - tol)
    return bool(inside.any())


def _sampled_clear(p: Packing, i: int, j: int, n: int, tol: float, seed: int) -> bool:
    rng = np.random.default_rng([seed, i, j])
    pts_i = _surface_points(p.p0[i], p.p1[i], n, rng)
    pts_j = _surface_points(p.p0[j], p.p1[j], n, rng)
    return not (
        _penetrates(pts_i, p.p0[j], p.p1[j], tol) or _penetrates(pts_j, p.p0[i], p.p1[i], tol)
    )


def is_valid_packing(
    p: Packing,
    surface_check: bool = False,
    tol: float = PAIR_TOL,
    surface_samples: int = SURFACE_SAMPLES,
    seed: int = 0,
) -> ValidationReport:
    """Check pairwise disjoint interiors and containment in B(R).

    Capped cylinders are unit neighbourhoods of their axes, so axis distance
    >= 2 is exact. For flat-ended cylinders a pair also passes when an end
    plane separates them; with ``surface_check`` the remaining pairs get a
    sampled surface-clearance test.
    """
    uncontained = np.flatnonzero(~contained_mask(p, p.R)).tolist() if p.n else []
    pairs = AxisIndex(p).candidate_pairs(2.0)
    overlapping: List[Tuple[int, int, float]] = []
    sampled = 0
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        dist = segments_segments_distance(p.p0[i], p.p1[i], p.p0[j], p.p1[j])
        bad = dist < 2.0 - tol
        if not p.capped and bad.any():
            bad &= ~_end_plane_separated(p, i, j, tol)
        for k in np.flatnonzero(bad):
            a, b, d = int(i[k]), int(j[k]), float(dist[k])
            if not p.capped and surface_check:
                sampled += 1
                if _sampled_clear(p, a, b, surface_samples, tol, seed):
                    continue
            overlapping.append((a, b, d))
    report = ValidationReport(
        valid=not overlapping and not uncontained,
        overlapping=overlapping,
        uncontained=uncontained,
        checked_pairs=int(len(pairs)),
        sampled_pairs=sampled,
    )
    if not report.valid:
        logger.debug(
            "packing invalid: %d overlapping pairs, %d uncontained",
            len(overlapping), len(uncontained),
        )
    return report
