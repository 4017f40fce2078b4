"""Axis measures: the end-near part Z and the protected part Y of the axes"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from geometry import VerificationFailure, as_point3, chord_interval
from packing import BOUND_PARAMS, AxisIndex, Packing, restrict

logger = logging.getLogger(__name__)

R_END = BOUND_PARAMS.r_end


def merge_intervals(intervals: np.ndarray) -> np.ndarray:
    """Union of closed intervals given as rows (start, end); empty rows dropped."""
    if not len(intervals):
        return np.zeros((0, 2))
    iv = intervals[intervals[:, 1] > intervals[:, 0]]
    if not len(iv):
        return np.zeros((0, 2))
    iv = iv[np.argsort(iv[:, 0], kind="stable")]
    merged = [iv[0].copy()]
    for lo, hi in iv[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append(np.array([lo, hi]))
    return np.array(merged)


def complement(intervals: np.ndarray, length: float) -> np.ndarray:
    edges = np.concatenate([[0.0], intervals.ravel(), [length]]).reshape(-1, 2)
    return edges[edges[:, 1] > edges[:, 0]]


@dataclass
class AxisMeasure:
    z_intervals: List[np.ndarray]
    y_intervals: List[np.ndarray]
    mu_z: float
    mu_y: float
    mu_a: float
    n: int
    R_inner: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "R_inner": self.R_inner,
            "mu_Y": self.mu_y,
            "mu_Z": self.mu_z,
            "mu_A": self.mu_a,
            "z_intervals": [iv.tolist() for iv in self.z_intervals],
        }


def _z_intervals(p: Packing) -> List[np.ndarray]:
    """Per axis, arc-length intervals within 4/sqrt(3) of some end of ``p``."""
    per_axis: List[list] = [[] for _ in range(p.n)]
    if p.n == 0:
        return []
    ends = p.ends
    index = AxisIndex(p)
    for end, axes in zip(ends, index.axes_near(ends, R_END)):
        if not len(axes):
            continue
        start, stop = chord_interval(p.p0[axes], p.p1[axes], end, R_END)
        for k, a, b in zip(axes, start, stop):
            if b > a:
                per_axis[k].append((a, b))
    return [merge_intervals(np.array(iv, dtype=float).reshape(-1, 2)) for iv in per_axis]


def axis_measures(p: Packing, R_inner: float, check: bool = True) -> AxisMeasure:
    """Measures of Y and Z on the axes of restrict(p, R_inner).

    Raises:
        VerificationFailure: If mu(Z) exceeds 2 n t0 and ``check`` is set.
    """
    star = restrict(p, R_inner)
    z = _z_intervals(star)
    lengths = star.lengths
    y = [complement(iv, float(length)) for iv, length in zip(z, lengths)]
    mu_z = float(sum(float((iv[:, 1] - iv[:, 0]).sum()) for iv in z))
    mu_a = float(lengths.sum())
    measure = AxisMeasure(
        z_intervals=z,
        y_intervals=y,
        mu_z=mu_z,
        mu_y=mu_a - mu_z,
        mu_a=mu_a,
        n=star.n,
        R_inner=R_inner,
    )
    if check and mu_z > 2.0 * star.n * BOUND_PARAMS.t0 + 1e-9:
        raise VerificationFailure(
            f"mu(Z) = {mu_z:.9g} exceeds 2 n t0 = {2.0 * star.n * BOUND_PARAMS.t0:.9g}",
            witness=measure.to_dict(),
        )
    return measure


def end_ball_axis_length(p: Packing, e) -> float:
    """Total axis length of ``p`` inside the closed ball of radius 4/sqrt(3) about ``e``."""
    if p.n == 0:
        return 0.0
    start, stop = chord_interval(p.p0, p.p1, as_point3(e), R_END)
    return float(np.maximum(stop - start, 0.0).sum())
