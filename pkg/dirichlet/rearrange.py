"""
Truncation of a slice to the disc of radius 2/sqrt(3) and its rearrangement
into chord and parabola pieces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from extremal.pieces import ALPHA0, SIXTY, PieceProfile, piece_profile
from geometry import AngleExceedsAlpha0, PreconditionError, QuadratureSettings, integrate_doubling
from packing import BOUND_PARAMS

from .slice import TWO_PI, DirichletSlice

logger = logging.getLogger(__name__)

R_HEX = BOUND_PARAMS.r_hex
MERGE_TOL = 1e-6
ANGLE_SLACK = 1e-9


@dataclass
class Rearrangement:
    area_dstar: float
    area_dstarstar: float
    pieces: List[PieceProfile]
    vertices: List[float] = field(default_factory=list)

    @property
    def angle_sum(self) -> float:
        return float(sum(p.beta for p in self.pieces))

    def to_dict(self) -> dict:
        return {
            "area_dstar": self.area_dstar,
            "area_dstarstar": self.area_dstarstar,
            "pieces": [p.to_dict() for p in self.pieces],
            "vertices": list(self.vertices),
        }


def _crossings(s: DirichletSlice, tol: float) -> List[float]:
    theta, radius = s.theta, s.radius
    sign = radius > R_HEX
    nxt = np.roll(np.arange(len(theta)), -1)
    cells = np.flatnonzero(sign != sign[nxt])
    if not len(cells):
        return []
    lo = theta[cells].copy()
    hi = theta[nxt[cells]].copy()
    hi = np.where(hi <= lo, hi + TWO_PI, hi)
    left = sign[cells]
    while (hi - lo).max() > tol:
        mid = 0.5 * (lo + hi)
        same = (s.radius_fn(mid) > R_HEX) == left
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return list(np.mod(0.5 * (lo + hi), TWO_PI))


def _merge(angles: List[float]) -> List[float]:
    if not angles:
        return []
    a = np.sort(np.mod(np.asarray(angles), TWO_PI))
    groups = [[a[0]]]
    for v in a[1:]:
        if v - groups[-1][-1] <= MERGE_TOL:
            groups[-1].append(v)
        else:
            groups.append([v])
    # wrap-around group
    if len(groups) > 1 and groups[0][0] + TWO_PI - groups[-1][-1] <= MERGE_TOL:
        groups[0] = [v - TWO_PI for v in groups.pop()] + groups[0]
    return sorted(float(np.mod(np.mean(g), TWO_PI)) for g in groups)


def _arc_pieces(beta: float) -> List[PieceProfile]:
    m = max(int(math.ceil(beta / SIXTY - 1e-12)), 1)
    return [piece_profile(beta / m)] * m


def truncate_rearrange(s: DirichletSlice, contact_tol: float = 1e-7, event_tol: float = 1e-9, area_tol: float = 1e-6) -> Rearrangement:
    """Truncate to S_x(2/sqrt(3)), subdivide outer arcs, replace sectors by pieces.

    Vertices are the points where the boundary meets the circle of radius
    2/sqrt(3). A sector between vertices whose boundary runs outside the
    circle is an arc of the truncated slice and is split into equal chords
    of at most 60 degrees. A sector whose boundary runs inside becomes a
    chord (up to 60 degrees) or an apex-tangent parabola (up to alpha0).

    Raises:
        AngleExceedsAlpha0: An inner sector is wider than alpha0.
    """
    if s.radius_fn is None:
        raise PreconditionError("slice has no radius function attached")
    events = [e.theta for e in s.events if abs(e.radius - R_HEX) <= contact_tol]
    vertices = _merge(_crossings(s, event_tol) + events)

    pieces: List[PieceProfile] = []
    if not vertices:
        if s.radius.min() < R_HEX - contact_tol:
            raise PreconditionError("slice boundary never reaches S_x(2/sqrt(3))")
        pieces = _arc_pieces(TWO_PI)
    else:
        edges = vertices + [vertices[0] + TWO_PI]
        starts = np.array(edges[:-1])
        ends = np.array(edges[1:])
        mids = 0.5 * (starts + ends)
        outside = s.radius_fn(np.mod(mids, TWO_PI)) >= R_HEX - contact_tol
        for a, b, out in zip(starts, ends, outside):
            beta = float(b - a)
            if out:
                pieces.extend(_arc_pieces(beta))
                continue
            if beta > ALPHA0 + ANGLE_SLACK:
                raise AngleExceedsAlpha0(beta, ALPHA0)
            pieces.append(piece_profile(min(beta, ALPHA0)))

    breakpoints = sorted(set(vertices) | set(float(t) for t in s.event_thetas))
    settings = QuadratureSettings(rel_tol=area_tol)
    area_dstar, _ = integrate_doubling(
        lambda th: 0.5 * np.minimum(s.radius_fn(th), R_HEX) ** 2, 0.0, TWO_PI, breakpoints, settings
    )
    area_dstarstar = float(sum(p.area for p in pieces))
    logger.debug(
        "rearranged %d vertices into %d pieces: d*=%.9f d**=%.9f",
        len(vertices), len(pieces), area_dstar, area_dstarstar,
    )
    return Rearrangement(area_dstar, area_dstarstar, pieces, vertices)
