"""
Closed-form upper bounds on the density of packings of long cylinders.

All constants are computed from their definitions at import time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Iterable, Optional, Sequence

import numpy as np

from geometry import DomainError, PreconditionError
from packing import BOUND_PARAMS

T0 = BOUND_PARAMS.t0
PLANAR = math.pi / math.sqrt(12.0)
INV_PLANAR = math.sqrt(12.0) / math.pi
CAP_VOLUME_RATIO = 4.0 / 3.0
CAPPED_THRESHOLD = 2.0 * T0
UNCAPPED_THRESHOLD = 2.0 * T0 + 2.0
DOMINANCE_TOP = 1e6
DOMINANCE_POINTS = 10_000


@dataclass(frozen=True)
class BoundResult:
    t: float
    shape: str
    bound: float
    formula_id: str
    trivial: bool
    raw: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _check_t(t: float) -> None:
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be positive and finite, got {t!r}")


def capped_denominator(t: float) -> float:
    return INV_PLANAR * (t - 2.0 * T0) + 2.0 * T0 + CAP_VOLUME_RATIO


def capped_raw(t: float) -> float:
    return (t + CAP_VOLUME_RATIO) / capped_denominator(t)


def uncapped_raw(t: float) -> float:
    return t / (INV_PLANAR * (t - 2.0 - 2.0 * T0) + 2.0 * T0 + CAP_VOLUME_RATIO)


def _clamped(t: float, shape: str, formula_id: str, raw: Optional[float], threshold: float) -> BoundResult:
    if t < threshold or raw is None:
        return BoundResult(t, shape, 1.0, formula_id, True, raw)
    if raw > 1.0:
        return BoundResult(t, shape, 1.0, formula_id, True, raw)
    return BoundResult(t, shape, raw, formula_id, False, raw)


def capped_bound(t: float) -> BoundResult:
    """Bound for capped t-cylinders; trivial below t = 2 t0."""
    _check_t(t)
    raw = capped_raw(t) if t >= CAPPED_THRESHOLD else None
    return _clamped(t, "capped", "capped", raw, CAPPED_THRESHOLD)


def uncapped_bound(t: float) -> BoundResult:
    """Bound for flat-ended t-cylinders via nested capped (t-2)-cylinders."""
    _check_t(t)
    raw = uncapped_raw(t) if t >= UNCAPPED_THRESHOLD else None
    return _clamped(t, "uncapped", "uncapped", raw, UNCAPPED_THRESHOLD)


def rule_of_thumb(t: float) -> float:
    _check_t(t)
    return PLANAR + 10.0 / t


def conjectured_density(t: float) -> float:
    """Density of stretched close-packed spheres, for comparison only."""
    if t < 0.0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    return PLANAR * (t + CAP_VOLUME_RATIO) / (t + 2.0 * math.sqrt(6.0) / 3.0)


@dataclass
class DominanceResult:
    passed: bool
    worst_margin: float
    worst_t: float
    points: int

    def to_dict(self) -> dict:
        return asdict(self)


def default_grid(shape: str, points: int = DOMINANCE_POINTS, top: float = DOMINANCE_TOP) -> np.ndarray:
    start = CAPPED_THRESHOLD if shape == "capped" else UNCAPPED_THRESHOLD
    return np.geomspace(start, top, points)


def dominance_check(t_grid: Optional[Iterable[float]] = None, shape: str = "capped") -> DominanceResult:
    """min(1, bound(t)) <= rule_of_thumb(t) on every grid point."""
    if shape not in ("capped", "uncapped"):
        raise DomainError(f"unknown shape {shape!r}")
    grid = default_grid(shape) if t_grid is None else np.asarray(list(t_grid), dtype=float)
    fn = capped_bound if shape == "capped" else uncapped_bound
    margins = np.array([rule_of_thumb(t) - min(1.0, fn(t).bound) for t in grid])
    k = int(np.argmin(margins))
    return DominanceResult(bool(margins.min() >= 0.0), float(margins[k]), float(grid[k]), len(grid))


@dataclass
class HalfInfiniteResult:
    value: float
    monotone: bool
    infimum: float
    gap: float

    def to_dict(self) -> dict:
        return asdict(self)


def half_infinite_bound(top: float = 1e12, points: int = 2000) -> HalfInfiniteResult:
    """pi/sqrt(12) with a numeric witness from the flat-ended bound.

    The flat-ended bound is strictly decreasing on its nontrivial domain and
    its infimum over a geometric grid up to ``top`` approaches pi/sqrt(12).
    """
    grid = np.geomspace(UNCAPPED_THRESHOLD * 1.01, top, points)
    raw = np.array([uncapped_raw(t) for t in grid])
    monotone = bool(np.all(np.diff(raw) < 0.0))
    infimum = float(raw.min())
    return HalfInfiniteResult(PLANAR, monotone, infimum, infimum - PLANAR)


def mixed_length_bound(t_avg: float) -> BoundResult:
    """Capped bound evaluated at the average length of a mixed-length packing."""
    _check_t(t_avg)
    if t_avg < CAPPED_THRESHOLD:
        raise PreconditionError(f"average length must be at least 2 t0 = {CAPPED_THRESHOLD:.6f}")
    result = capped_bound(t_avg)
    return BoundResult(t_avg, "mixed-average", result.bound, "mixed-average", result.trivial, result.raw)


def mixed_length_bound_from_lengths(lengths: Sequence[float], variant: str = "average") -> BoundResult:
    """Mixed-length bound from explicit lengths (each at least 2 t0).

    ``average`` uses the mean length; ``infimum`` uses the shortest, which is
    valid because the bound decreases in t.
    """
    values = np.asarray(list(lengths), dtype=float)
    if not len(values):
        raise PreconditionError("no lengths given")
    if values.min() < CAPPED_THRESHOLD:
        raise PreconditionError(f"every length must be at least 2 t0 = {CAPPED_THRESHOLD:.6f}")
    if variant == "average":
        return mixed_length_bound(float(values.mean()))
    if variant == "infimum":
        result = capped_bound(float(values.min()))
        return BoundResult(result.t, "mixed-infimum", result.bound, "mixed-infimum", result.trivial, result.raw)
    raise DomainError(f"unknown variant {variant!r}")


def asymptotic_coefficient(shape: str = "capped", lo: float = 1e4, hi: float = 1e7, points: int = 200) -> float:
    """Fitted c in bound(t) ~ pi/sqrt(12) + c/t + d/t^2."""
    fn = capped_raw if shape == "capped" else uncapped_raw
    t = np.geomspace(lo, hi, points)
    excess = np.array([fn(v) for v in t]) - PLANAR
    design = np.column_stack([1.0 / t, 1.0 / t ** 2])
    coef, *_ = np.linalg.lstsq(design, excess, rcond=None)
    return float(coef[0])


def nesting_identity_residual(t_grid: Optional[Iterable[float]] = None) -> float:
    """Largest |(t - 2/3)/t * uncapped(t) - (t - 2 + 4/3)/capped_denominator(t - 2)|."""
    grid = np.geomspace(UNCAPPED_THRESHOLD, 1e9, 500) if t_grid is None else np.asarray(list(t_grid))
    residual = 0.0
    for t in grid:
        left = (t - 2.0 / 3.0) / t * uncapped_raw(t)
        right = (t - 2.0 + CAP_VOLUME_RATIO) / capped_denominator(t - 2.0)
        residual = max(residual, abs(left - right))
    return residual
