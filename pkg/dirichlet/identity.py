"""
Cell volume identity and the certified density bound for a concrete packing
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from geometry import PreconditionError, QuadratureSettings, integrate_panels, points_segments_distance
from packing import BOUND_PARAMS, Box, Packing, density, mc_volume, nest_capped, nesting_volume_ratio, restrict

from .measures import _z_intervals, axis_measures
from .slice import SliceSettings, Slicer

logger = logging.getLogger(__name__)

BOX_PADDING = 1.25
REACH_SAMPLES = 33
REACH_THETA = 180


@dataclass
class IdentityResult:
    integral: float
    budget: float
    mc_value: float
    mc_stderr: float

    @property
    def difference(self) -> float:
        return abs(self.integral - self.mc_value)

    @property
    def allowed(self) -> float:
        return 4.0 * self.mc_stderr + self.budget

    @property
    def agrees(self) -> bool:
        return self.difference <= self.allowed

    def to_dict(self) -> dict:
        return {
            "integral": self.integral,
            "budget": self.budget,
            "mc_value": self.mc_value,
            "mc_stderr": self.mc_stderr,
            "difference": self.difference,
            "agrees": self.agrees,
        }


def _axis_edges(p: Packing, i: int) -> np.ndarray:
    """Panel edges on axis i: its ends plus the ends of its end-near intervals."""
    length = float(p.lengths[i])
    z = _z_intervals(p)[i] if p.n else np.zeros((0, 2))
    edges = np.unique(np.concatenate([[0.0, length], z.ravel()]))
    return edges[(edges >= 0.0) & (edges <= length)]


def _cell_member(p: Packing, i: int, reach: float):
    p0, p1 = p.p0[i], p.p1[i]
    e = p.directions[i]
    length = float(p.lengths[i])
    others = np.flatnonzero(np.arange(p.n) != i)
    if len(others):
        gap = points_segments_distance(
            np.linspace(p0, p1, max(int(length) + 2, 2)), p.p0[others], p.p1[others]
        ).min(axis=0)
        others = others[gap <= 2.0 * reach + 1.0]
    R2 = p.R ** 2

    def member(q: np.ndarray) -> np.ndarray:
        rel = q - p0
        along = rel @ e
        radial = np.linalg.norm(rel - along[:, None] * e, axis=1)
        inside = (along >= 0.0) & (along <= length) & (np.einsum("ij,ij->i", q, q) <= R2)
        if len(others):
            nearest = points_segments_distance(q, p.p0[others], p.p1[others]).min(axis=1)
            inside &= radial <= nearest
        return inside

    return member


def _cell_box(p: Packing, i: int, reach: float) -> Box:
    pts = np.stack([p.p0[i], p.p1[i]])
    lo = np.maximum(pts.min(axis=0) - reach, -p.R)
    hi = np.minimum(pts.max(axis=0) + reach, p.R)
    return Box(tuple(lo), tuple(hi))


def cell_volume_identity(
    p: Packing,
    i: int,
    n_mc: int = 1_000_000,
    seed: Optional[int] = None,
    settings: SliceSettings = SliceSettings(),
    quad_tol: float = 1e-5,
    jobs: int = 1,
) -> IdentityResult:
    """Integral of slice areas along axis i against a Monte Carlo cell volume.

    The Monte Carlo box is the axis bounding box grown by the largest slice
    radius seen on a coarse grid of axis points, padded by 25%.
    """
    slicer = Slicer(p, settings)
    seg = p.segment(i)
    length = seg.length
    direction = seg.direction

    def areas(s_values: np.ndarray) -> np.ndarray:
        return np.array([slicer.area(i, seg.p0 + s * direction) for s in s_values])

    value, budget, evaluations = integrate_panels(
        areas, _axis_edges(p, i), QuadratureSettings(rel_tol=quad_tol, max_depth=6)
    )
    logger.debug("axis integral %.8g (budget %.2e) from %d slices", value, budget, evaluations)

    theta = 2.0 * math.pi * np.arange(REACH_THETA) / REACH_THETA
    reach = max(
        float(slicer.radius(i, seg.p0 + s * direction, theta).max())
        for s in np.linspace(0.0, length, REACH_SAMPLES)
    ) * BOX_PADDING
    mc = mc_volume(_cell_member(p, i, reach), _cell_box(p, i, reach), n_mc, seed=seed, jobs=jobs)
    return IdentityResult(
        integral=value,
        budget=budget + quad_tol * abs(value),
        mc_value=mc.estimate,
        mc_stderr=mc.stderr,
    )


@dataclass
class CertifiedBound:
    bound: float
    measured: float
    n: int
    mu_y: float
    mu_z: float
    R_inner: float
    nested: bool = False

    @property
    def holds(self) -> bool:
        return self.measured <= self.bound + 1e-12

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "measured": self.measured,
            "holds": self.holds,
            "n": self.n,
            "mu_Y": self.mu_y,
            "mu_Z": self.mu_z,
            "R_inner": self.R_inner,
            "nested": self.nested,
        }


def certified_bound_for_packing(p: Packing, R_inner: Optional[float] = None) -> CertifiedBound:
    """Upper bound on rho(C, R_inner, R) from the measured Y and Z of the axes.

    Cell volumes are bounded below by sqrt(12) per unit of Y and pi per unit
    of Z, plus two unit half-balls of caps per cylinder. Flat-ended packings
    are bounded through their nested capped (t-2)-cylinders.
    """
    if not p.capped:
        inner = certified_bound_for_packing(nest_capped(p), R_inner)
        ratio = nesting_volume_ratio(float(p.lengths.min()))
        return replace(
            inner,
            bound=min(1.0, inner.bound / ratio),
            measured=density(p, inner.R_inner, p.R),
            nested=True,
        )
    limit = p.R - BOUND_PARAMS.r_hex
    R_inner = limit if R_inner is None else float(R_inner)
    if not 0.0 < R_inner <= limit + 1e-12:
        raise PreconditionError(f"need 0 < R_inner <= R - 2/sqrt(3) = {limit:.9g}, got {R_inner}")
    measure = axis_measures(p, R_inner)
    star = restrict(p, R_inner)
    caps = star.n * 4.0 * math.pi / 3.0
    bodies = math.pi * measure.mu_a
    if star.n == 0:
        bound = 0.0
    else:
        bound = (bodies + caps) / (BOUND_PARAMS.hex_area * measure.mu_y + math.pi * measure.mu_z + caps)
    return CertifiedBound(
        bound=float(bound),
        measured=density(p, R_inner, p.R),
        n=star.n,
        mu_y=measure.mu_y,
        mu_z=measure.mu_z,
        R_inner=R_inner,
    )
