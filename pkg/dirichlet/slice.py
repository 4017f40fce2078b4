"""
Dirichlet slices: the part of a cylinder's Dirichlet cell in the plane
normal to its axis at a point x.

A slice is convex and contains x, so it is described by its radius
function r(theta) about x. The radius is found by bisection on the
membership predicate |q - x| <= dist(q, a_j) for every other axis a_j,
capped exactly by the container sphere. Boundary events (points where the
active constraint changes) are located by bisection in theta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.spatial import ConvexHull

from geometry import (
    PlaneFrame,
    QuadratureSettings,
    as_point3,
    integrate_doubling,
    plane_frame,
    points_segments_distance,
)
from packing import BOUND_PARAMS, Packing, ends_near, restrict

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
CONTAINER = -1
FEATURES = ("p0-end", "interior", "p1-end")
INITIAL_REACH = 4.0
PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class SliceSettings:
    membership_tol: float = 1e-10
    area_tol: float = 1e-6
    event_tol: float = 1e-9
    n_theta: int = 720
    contact_tol: float = 1e-7
    convexity_tol: float = 1e-6
    subsamples: int = 8


@dataclass(frozen=True)
class BoundaryEvent:
    theta: float
    kind: str
    radius: float
    left: int
    right: int

    def to_dict(self) -> dict:
        return {"theta": self.theta, "kind": self.kind, "radius": self.radius}


@dataclass(frozen=True)
class BoundaryArc:
    start: float
    end: float
    kind: str
    label: int

    @property
    def source(self) -> Optional[int]:
        return None if self.label == CONTAINER else self.label // 3

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "kind": self.kind, "source": self.source}


@dataclass
class DirichletSlice:
    frame: PlaneFrame
    owner: int
    theta: np.ndarray
    radius: np.ndarray
    events: List[BoundaryEvent]
    arcs: List[BoundaryArc]
    container_radius: float
    area: Optional[float] = None
    contains_unit_disc: Optional[bool] = None
    radius_fn: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def x(self) -> np.ndarray:
        return self.frame.origin

    @property
    def event_thetas(self) -> np.ndarray:
        return np.array([e.theta for e in self.events])

    def boundary_points(self) -> np.ndarray:
        """Sampled boundary in plane coordinates, shape (K, 2)."""
        return np.stack([self.radius * np.cos(self.theta), self.radius * np.sin(self.theta)], axis=1)

    def convexity_defect(self) -> float:
        """Depth of the deepest sampled boundary point below its convex hull boundary (<= 0)."""
        pts = self.boundary_points()
        hull = ConvexHull(pts)
        # facet equations are normalised: n . p + b <= 0 inside
        offsets = pts @ hull.equations[:, :2].T + hull.equations[:, 2]
        return float(offsets.max(axis=1).min())

    def is_convex(self, tol: float = 1e-6) -> bool:
        """Every sampled boundary point lies within ``tol`` of the convex hull boundary."""
        return self.convexity_defect() >= -tol

    def min_radius(self) -> float:
        return float(self.radius.min())

    def to_dict(self) -> dict:
        return {
            "owner": self.owner,
            "frame": self.frame.to_dict(),
            "area": self.area,
            "contains_unit_disc": self.contains_unit_disc,
            "samples": np.column_stack([self.theta, self.radius]).tolist(),
            "events": [e.to_dict() for e in self.events],
            "arcs": [a.to_dict() for a in self.arcs],
        }


@dataclass
class _State:
    owner: int
    frame: PlaneFrame
    others: np.ndarray
    reach: np.ndarray


class Slicer:
    """Computes slices of one packing; reuse it for many points."""

    def __init__(self, packing: Packing, settings: SliceSettings = SliceSettings()):
        self.packing = packing
        self.settings = settings

    # -- setup ---------------------------------------------------------------

    def _state(self, i: int, x) -> _State:
        p = self.packing
        frame = plane_frame(p.segment(i), as_point3(x))
        others = np.flatnonzero(np.arange(p.n) != i)
        if len(others):
            reach = points_segments_distance(frame.origin[None, :], p.p0[others], p.p1[others])[0]
        else:
            reach = np.zeros(0)
        return _State(owner=i, frame=frame, others=others, reach=reach)

    def _container_cap(self, state: _State, dirs: np.ndarray) -> np.ndarray:
        x = state.frame.origin
        b = dirs @ x
        disc = b * b - x @ x + self.packing.R ** 2
        return np.maximum(-b + np.sqrt(np.maximum(disc, 0.0)), 0.0)

    # -- radius --------------------------------------------------------------

    def _bisect(self, state: _State, dirs: np.ndarray, cap: np.ndarray, axes: np.ndarray) -> np.ndarray:
        p = self.packing
        x = state.frame.origin
        if not len(axes):
            return cap.copy()
        p0, p1 = p.p0[axes], p.p1[axes]

        def member(r: np.ndarray, rows: np.ndarray) -> np.ndarray:
            q = x + r[:, None] * dirs[rows]
            return r <= points_segments_distance(q, p0, p1).min(axis=1)

        all_rows = np.arange(len(cap))
        out = cap.copy()
        open_rows = all_rows[~member(cap, all_rows)]
        lo = np.zeros(len(open_rows))
        hi = cap[open_rows]
        tol = self.settings.membership_tol
        while len(open_rows) and (hi - lo).max() > tol:
            mid = 0.5 * (lo + hi)
            inside = member(mid, open_rows)
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        out[open_rows] = 0.5 * (lo + hi)
        return out

    def _radius(self, state: _State, theta: np.ndarray) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        dirs = state.frame.directions(theta)
        container = self._container_cap(state, dirs)
        limit = float(container.max()) if len(container) else 0.0
        reach = INITIAL_REACH
        while True:
            # an axis farther than 2*reach from x cannot cut the slice within reach
            near = state.others[state.reach <= 2.0 * reach]
            cap = np.minimum(container, reach)
            r = self._bisect(state, dirs, cap, near)
            unresolved = (r >= reach - self.settings.membership_tol) & (container > reach)
            if not unresolved.any() or reach >= limit:
                return r
            reach *= 2.0

    def radius(self, i: int, x, theta) -> np.ndarray:
        return self._radius(self._state(i, x), theta)

    # -- labels and events ---------------------------------------------------

    def _labels(self, state: _State, theta: np.ndarray, r: np.ndarray) -> np.ndarray:
        p = self.packing
        dirs = state.frame.directions(theta)
        container = self._container_cap(state, dirs)
        labels = np.full(len(theta), CONTAINER, dtype=int)
        axis_side = container - r > 10.0 * self.settings.membership_tol
        if not axis_side.any() or not len(state.others):
            return labels
        near = state.others[state.reach <= 2.0 * float(r.max()) + 1e-9]
        if not len(near):
            return labels
        q = state.frame.origin + r[axis_side, None] * dirs[axis_side]
        dist, s = points_segments_distance(q, p.p0[near], p.p1[near], return_param=True)
        k = np.argmin(dist - r[axis_side, None], axis=1)
        rows = np.arange(len(k))
        param = s[rows, k]
        feature = np.where(param <= 0.0, 0, np.where(param >= 1.0, 2, 1))
        labels[axis_side] = 3 * near[k] + feature
        return labels

    def _event_kind(self, left: int, right: int) -> str:
        if left == CONTAINER or right == CONTAINER:
            return "type2"
        if left // 3 == right // 3:
            return "type1"
        return "type3"

    def _arc_kind(self, state: _State, label: int) -> str:
        if label == CONTAINER:
            return "container-circle"
        j, feature = divmod(label, 3)
        if feature != 1:
            return "line"
        direction = self.packing.directions[j]
        if abs(abs(float(direction @ state.frame.normal)) - 1.0) <= PARALLEL_TOL:
            return "line"
        return "parabolic-arc"

    def _locate_events(self, state: _State, theta: np.ndarray, labels: np.ndarray):
        n = len(theta)
        step = TWO_PI / n
        change = np.flatnonzero(labels != np.roll(labels, -1))
        if not len(change):
            return []
        # split every changing cell so close events are separated
        m = self.settings.subsamples
        starts = theta[change][:, None] + step * np.arange(m + 1)[None, :] / m
        flat = starts.ravel()
        sub_labels = self._labels(state, flat, self._radius(state, flat)).reshape(len(change), m + 1)
        lo_list, hi_list, left_list = [], [], []
        for row, grid in zip(sub_labels, starts):
            for k in np.flatnonzero(row[:-1] != row[1:]):
                lo_list.append(grid[k])
                hi_list.append(grid[k + 1])
                left_list.append(row[k])
        lo = np.array(lo_list)
        hi = np.array(hi_list)
        left = np.array(left_list, dtype=int)
        while len(lo) and (hi - lo).max() > self.settings.event_tol:
            mid = 0.5 * (lo + hi)
            same = self._labels(state, mid, self._radius(state, mid)) == left
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        right = self._labels(state, hi, self._radius(state, hi))
        at = np.mod(0.5 * (lo + hi), TWO_PI)
        radii = self._radius(state, at)
        events = [
            BoundaryEvent(float(a), self._event_kind(int(l), int(r)), float(rad), int(l), int(r))
            for a, l, r, rad in zip(at, left, right, radii)
        ]
        return sorted(events, key=lambda e: e.theta)

    def _arcs(self, state: _State, events: List[BoundaryEvent]) -> List[BoundaryArc]:
        if not events:
            label = int(self._labels(state, np.zeros(1), self._radius(state, np.zeros(1)))[0])
            return [BoundaryArc(0.0, TWO_PI, self._arc_kind(state, label), label)]
        edges = [e.theta for e in events] + [events[0].theta + TWO_PI]
        mids = np.mod(0.5 * (np.array(edges[:-1]) + np.array(edges[1:])), TWO_PI)
        labels = self._labels(state, mids, self._radius(state, mids))
        return [
            BoundaryArc(float(a), float(b), self._arc_kind(state, int(lab)), int(lab))
            for a, b, lab in zip(edges[:-1], edges[1:], labels)
        ]

    # -- public --------------------------------------------------------------

    def area(self, i: int, x, tol: Optional[float] = None, breakpoints=None) -> float:
        state = self._state(i, x)
        if breakpoints is None:
            breakpoints = self._slice_from_state(state, with_area=False).event_thetas
        return self._area(state, breakpoints, tol)

    def _area(self, state: _State, breakpoints, tol: Optional[float]) -> float:
        settings = QuadratureSettings(rel_tol=tol or self.settings.area_tol)
        value, evaluations = integrate_doubling(
            lambda th: 0.5 * self._radius(state, th) ** 2, 0.0, TWO_PI, breakpoints, settings
        )
        logger.debug("slice area %.10g from %d radius evaluations", value, evaluations)
        return value

    def compute(self, i: int, x, with_area: bool = True) -> DirichletSlice:
        return self._slice_from_state(self._state(i, x), with_area)

    def _slice_from_state(self, state: _State, with_area: bool) -> DirichletSlice:
        p = self.packing
        n = self.settings.n_theta
        grid = TWO_PI * np.arange(n) / n
        r = self._radius(state, grid)
        labels = self._labels(state, grid, r)
        events = self._locate_events(state, grid, labels)
        arcs = self._arcs(state, events)

        theta = np.concatenate([grid, [e.theta for e in events]])
        radius = np.concatenate([r, [e.radius for e in events]])
        order = np.argsort(theta, kind="stable")
        theta, radius = theta[order], radius[order]

        seg = p.segment(state.owner)
        along = float((state.frame.origin - seg.p0) @ state.frame.normal)
        hypothesis = p.capped or min(along, seg.length - along) >= 1.0
        contains = bool(radius.min() >= 1.0 - 1e-9) if hypothesis else None

        x = state.frame.origin
        slice_ = DirichletSlice(
            frame=state.frame,
            owner=state.owner,
            theta=theta,
            radius=radius,
            events=events,
            arcs=arcs,
            container_radius=math.sqrt(max(p.R ** 2 - float(x @ x), 0.0)),
            contains_unit_disc=contains,
            radius_fn=lambda th: self._radius(state, th),
        )
        if with_area:
            slice_.area = self._area(state, slice_.event_thetas, None)
        return slice_


# -- functional surface -------------------------------------------------------


def slice_radius(p: Packing, i: int, x, theta, settings: SliceSettings = SliceSettings()):
    """Distance from x to the slice boundary in direction theta (scalar or array)."""
    r = Slicer(p, settings).radius(i, x, theta)
    return float(r[0]) if np.ndim(theta) == 0 else r


def compute_slice(p: Packing, i: int, x, settings: SliceSettings = SliceSettings()) -> DirichletSlice:
    return Slicer(p, settings).compute(i, x)


def slice_area(p: Packing, i: int, x, tol: Optional[float] = None, settings: SliceSettings = SliceSettings()) -> float:
    return Slicer(p, settings).area(i, x, tol)


def slice_export(s: DirichletSlice) -> dict:
    return s.to_dict()


def has_end_near(p: Packing, x, R_inner: Optional[float] = None) -> bool:
    """Whether the closed ball of radius 4/sqrt(3) about x holds an axis end.

    Pass ``R_inner`` to restrict the packing first; otherwise ``p`` is taken
    as already restricted.
    """
    target = restrict(p, R_inner) if R_inner is not None else p
    return bool(ends_near(target, as_point3(x)[None, :], BOUND_PARAMS.r_end)[0])


def is_qualified(p: Packing, i: int, x, tol: Optional[float] = None, settings: SliceSettings = SliceSettings()) -> bool:
    """Slice area greater than sqrt(12), by more than the relative tolerance."""
    tol = tol or settings.area_tol
    area = slice_area(p, i, x, tol, settings)
    return area - BOUND_PARAMS.hex_area > tol * BOUND_PARAMS.hex_area
