"""
Quadrature helpers: parabolic segments, star-shaped areas, axis integrals.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NonFinite, PreconditionError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances for the area and axis integrators"""

    rel_tol: float = 1e-6
    abs_floor: float = ABS_FLOOR
    min_level: int = 2
    max_level: int = 18
    gl_order: int = 6
    max_depth: int = 8


def parabola_segment_area(chord: float, sagitta: float) -> float:
    """Area between a chord and a parabolic arc whose axis is perpendicular to it.

    Archimedes: two thirds of the enclosing rectangle.
    """
    if chord <= 0.0 or sagitta < 0.0:
        raise PreconditionError(f"need chord > 0 and sagitta >= 0, got ({chord}, {sagitta})")
    return 2.0 / 3.0 * chord * sagitta


def _evaluate(r: Callable[[np.ndarray], np.ndarray], theta: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(r(theta), dtype=float), theta.shape).copy()
    if not np.all(np.isfinite(values)):
        bad = theta[~np.isfinite(values)][0]
        raise NonFinite(f"radius function is not finite at theta={bad!r}")
    return values


def _interval_edges(breakpoints: Optional[Sequence[float]], lo: float, hi: float) -> np.ndarray:
    edges = [lo, hi]
    if breakpoints is not None:
        for b in breakpoints:
            b = float(b)
            if lo < b < hi:
                edges.append(b)
    edges = np.unique(np.asarray(edges, dtype=float))
    # drop slivers that would only produce round-off
    keep = np.concatenate([[True], np.diff(edges) > 1e-13])
    edges = edges[keep]
    edges[-1] = hi
    return edges


def integrate_doubling(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    breakpoints: Optional[Sequence[float]] = None,
    settings: QuadratureSettings = QuadratureSettings(),
) -> Tuple[float, int]:
    """Composite Simpson on every sub-interval with interval doubling.

    ``f`` is called with 1-D arrays of abscissae; all unconverged
    sub-intervals are refined together so each level costs one call.
    Returns (integral, number of evaluations).
    """
    edges = _interval_edges(breakpoints, lo, hi)
    a = edges[:-1]
    width = np.diff(edges)
    m = len(a)

    # level 0: two panels per interval
    n = np.full(m, 2, dtype=int)
    nodes = [a[k] + width[k] * np.linspace(0.0, 1.0, 3) for k in range(m)]
    flat = _evaluate(f, np.concatenate(nodes))
    values = [flat[3 * k : 3 * k + 3] for k in range(m)]
    evaluations = 3 * m

    def simpson(y: np.ndarray, h: float) -> float:
        return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())

    estimate = np.array([simpson(values[k], width[k] / n[k]) for k in range(m)])
    active = np.ones(m, dtype=bool)
    level = 0
    while active.any():
        level += 1
        idx = np.flatnonzero(active)
        mids = []
        for k in idx:
            h = width[k] / n[k]
            mids.append(a[k] + h * (np.arange(n[k]) + 0.5))
        flat = _evaluate(f, np.concatenate(mids))
        evaluations += flat.size
        offset = 0
        total = float(estimate.sum())
        for k, mid_nodes in zip(idx, mids):
            new = flat[offset : offset + mid_nodes.size]
            offset += mid_nodes.size
            merged = np.empty(2 * n[k] + 1)
            merged[0::2] = values[k]
            merged[1::2] = new
            values[k] = merged
            n[k] *= 2
            refined = simpson(merged, width[k] / n[k])
            change = abs(refined - estimate[k])
            estimate[k] = refined
            threshold = 15.0 * max(
                settings.rel_tol * abs(total) * width[k] / (hi - lo), settings.abs_floor
            )
            if level >= settings.min_level and change <= threshold:
                active[k] = False
            elif level >= settings.max_level:
                logger.warning(
                    "quadrature cap reached on [%.6g, %.6g] (last change %.3e)",
                    a[k], a[k] + width[k], change,
                )
                active[k] = False
    return float(estimate.sum()), evaluations


def area_from_radius_fn(
    r: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-6,
    breakpoints: Optional[Sequence[float]] = None,
) -> float:
    """Area of a star-shaped region about the origin, 1/2 * integral of r(theta)^2.

    ``r`` receives an array of angles in [0, 2*pi]; a function returning a
    scalar is broadcast. ``breakpoints`` are angles where r is only piecewise
    smooth.
    """
    if tol <= 0.0:
        raise PreconditionError("tol must be positive")
    settings = QuadratureSettings(rel_tol=tol)
    value, _ = integrate_doubling(
        lambda th: 0.5 * _evaluate(r, th) ** 2, 0.0, TWO_PI, breakpoints, settings
    )
    return value


def _gauss_panel(f_values: np.ndarray, weights: np.ndarray, half_width: float) -> float:
    return float(half_width * np.dot(weights, f_values))


def integrate_panels(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    settings: QuadratureSettings = QuadratureSettings(),
) -> Tuple[float, float, int]:
    """Adaptive Gauss-Legendre panels over consecutive ``edges``.

    A panel is accepted when its estimate agrees with the sum over its two
    halves. Panels are processed in a fixed order so the reduction is
    deterministic. Returns (integral, error budget, evaluations).
    """
    nodes, weights = np.polynomial.legendre.leggauss(settings.gl_order)

    def panel(lo: float, hi: float) -> Tuple[float, int]:
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xs = mid + half * nodes
        return _gauss_panel(np.asarray(f(xs), dtype=float), weights, half), len(xs)

    edges = [float(e) for e in edges]
    total = 0.0
    budget = 0.0
    evaluations = 0
    stack: List[Tuple[float, float, float, int]] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0.0:
            continue
        whole, count = panel(lo, hi)
        evaluations += count
        stack.append((lo, hi, whole, 0))
        while stack:
            lo_k, hi_k, whole_k, depth = stack.pop()
            mid = 0.5 * (lo_k + hi_k)
            left, c1 = panel(lo_k, mid)
            right, c2 = panel(mid, hi_k)
            evaluations += c1 + c2
            diff = abs(left + right - whole_k)
            scale = max(abs(left + right), settings.abs_floor)
            if diff <= settings.rel_tol * scale or depth >= settings.max_depth:
                total += left + right
                budget += diff
            else:
                # right pushed first so the left half is finished first
                stack.append((mid, hi_k, right, depth + 1))
                stack.append((lo_k, mid, left, depth + 1))
    return total, budget, evaluations
