"""
Constrained optimisation checks of the extremal area and three-ball bounds
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from geometry import PreconditionError

from .pieces import ALPHA0, R_HEX, SIXTY, piece_area, piece_area_array, piece_area_derivative

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OptimizerSettings:
    starts: int = 32
    min_pieces: int = 5
    max_pieces: int = 64
    ftol: float = 1e-12
    constraint_tol: float = 1e-10
    maxiter: int = 500
    grid_per_sixty: int = 600
    seed: int = 0
    jobs: int = 1


@dataclass
class ExtremalResult:
    min_area: float
    composition: List[float]
    pieces: int
    evaluated: int
    worst_gap: float
    grid_min: float
    per_count: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "min_area": self.min_area,
            "composition_deg": [math.degrees(b) for b in self.composition],
            "pieces": self.pieces,
            "evaluated": self.evaluated,
            "worst_gap": self.worst_gap,
            "grid_min": self.grid_min,
        }


def total_area(betas: np.ndarray) -> float:
    return float(piece_area_array(betas).sum())


def _feasible(betas: np.ndarray, tol: float) -> bool:
    return (
        abs(float(betas.sum()) - TWO_PI) <= tol
        and float(betas.min()) >= -tol
        and float(betas.max()) <= ALPHA0 + tol
    )


def _project(betas: np.ndarray) -> np.ndarray:
    """Nearest-ish point of {sum = 2*pi, 0 <= beta <= alpha0} by clip-and-rescale."""
    b = np.clip(betas, 0.0, ALPHA0)
    for _ in range(100):
        gap = TWO_PI - b.sum()
        if abs(gap) < 1e-14:
            break
        free = (b < ALPHA0) if gap > 0 else (b > 0.0)
        if not free.any():
            break
        b[free] += gap / free.sum()
        b = np.clip(b, 0.0, ALPHA0)
    return b


def _starts(n: int, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    starts = [np.full(n, TWO_PI / n)]
    # boundary starts: k pieces pinned at alpha0 or at 60 degrees
    for pinned in (ALPHA0, SIXTY):
        for k in range(1, n):
            rest = TWO_PI - k * pinned
            if rest < 0.0 or rest > (n - k) * ALPHA0:
                continue
            starts.append(np.concatenate([np.full(k, pinned), np.full(n - k, rest / (n - k))]))
            if len(starts) >= count // 2:
                break
    while len(starts) < count:
        starts.append(_project(rng.dirichlet(np.ones(n)) * TWO_PI))
    return starts[:count]


class _Tracker:
    """Records the least total over every feasible composition evaluated."""

    def __init__(self, tol: float):
        self.tol = tol
        self.best = math.inf
        self.best_x: Optional[np.ndarray] = None
        self.count = 0

    def objective(self, x: np.ndarray) -> float:
        value = total_area(x)
        if _feasible(x, self.tol):
            self.count += 1
            if value < self.best:
                self.best, self.best_x = value, x.copy()
        return value


def _solve_count(n: int, settings: OptimizerSettings) -> Tuple[float, Optional[np.ndarray], int]:
    rng = np.random.default_rng([settings.seed, n])
    tracker = _Tracker(settings.constraint_tol)
    constraint = {
        "type": "eq",
        "fun": lambda x: np.array([x.sum() - TWO_PI]),
        "jac": lambda x: np.ones((1, len(x))),
    }
    bounds = [(0.0, ALPHA0)] * n
    for x0 in _starts(n, settings.starts, rng):
        tracker.objective(x0)
        res = minimize(
            tracker.objective,
            x0,
            jac=piece_area_derivative,
            bounds=bounds,
            constraints=[constraint],
            method="SLSQP",
            options={"ftol": settings.ftol, "maxiter": settings.maxiter},
        )
        tracker.objective(_project(np.asarray(res.x, dtype=float)))
    return tracker.best, tracker.best_x, tracker.count


def grid_minimum(grid_per_sixty: int) -> Tuple[float, List[float]]:
    """Exact minimum over compositions whose angles are multiples of 60deg/grid_per_sixty."""
    step = SIXTY / grid_per_sixty
    total_steps = 6 * grid_per_sixty
    max_steps = int(math.floor(ALPHA0 / step + 1e-12))
    sizes = np.arange(1, max_steps + 1)
    piece = piece_area_array(sizes * step)
    best = np.full(total_steps + 1, math.inf)
    choice = np.zeros(total_steps + 1, dtype=int)
    best[0] = 0.0
    for s in range(1, total_steps + 1):
        usable = sizes[sizes <= s]
        cand = best[s - usable] + piece[: len(usable)]
        k = int(np.argmin(cand))
        best[s], choice[s] = cand[k], usable[k]
    parts: List[float] = []
    s = total_steps
    while s > 0:
        parts.append(choice[s] * step)
        s -= choice[s]
    return float(best[total_steps]), sorted(parts, reverse=True)


def min_total_area(settings: OptimizerSettings = OptimizerSettings()) -> ExtremalResult:
    """Least total piece area over compositions of 2*pi into pieces of at most alpha0.

    Runs multi-start SLSQP for every piece count in [min_pieces, max_pieces]
    and an exact dynamic programme on an angle grid that contains 60 degrees.
    """
    counts = list(range(settings.min_pieces, settings.max_pieces + 1))
    if settings.min_pieces * ALPHA0 < TWO_PI:
        raise PreconditionError(f"{settings.min_pieces} pieces of at most alpha0 cannot close up")

    with ThreadPoolExecutor(max_workers=max(settings.jobs, 1)) as pool:
        results = list(pool.map(lambda n: _solve_count(n, settings), counts))

    grid_value, grid_parts = grid_minimum(settings.grid_per_sixty)
    candidates = []
    evaluated = 0
    per_count = {}
    for n, (value, x, count) in zip(counts, results):
        evaluated += count
        per_count[n] = value
        if x is not None:
            comp = sorted((float(b) for b in x if b > 1e-9), reverse=True)
            candidates.append((value, comp))
    candidates.append((grid_value, grid_parts))
    # deterministic: least value, ties broken by the composition itself
    best_value, best_comp = min(candidates, key=lambda c: (round(c[0], 12), c[1]))
    worst_gap = min(v for v, _ in candidates) - best_value
    logger.info("min total area %.12f over %d feasible evaluations", best_value, evaluated)
    return ExtremalResult(
        min_area=best_value,
        composition=best_comp,
        pieces=len(best_comp),
        evaluated=evaluated,
        worst_gap=worst_gap,
        grid_min=grid_value,
        per_count=per_count,
    )


# -- three balls --------------------------------------------------------------


@dataclass
class ThreeBallResult:
    radius: float
    centres: np.ndarray
    starts: int
    spread: float

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "centres": self.centres.tolist(),
            "starts": self.starts,
            "spread": self.spread,
        }


def _three_ball_constraints():
    pairs = [(0, 1), (0, 2), (1, 2)]

    def fun(z: np.ndarray) -> np.ndarray:
        c = z[:9].reshape(3, 3)
        ell = z[9]
        sep = [np.dot(c[a] - c[b], c[a] - c[b]) - 4.0 for a, b in pairs]
        reach = [(1.0 + ell) ** 2 - np.dot(c[k], c[k]) for k in range(3)]
        return np.array(sep + reach)

    def jac(z: np.ndarray) -> np.ndarray:
        c = z[:9].reshape(3, 3)
        ell = z[9]
        rows = []
        for a, b in pairs:
            row = np.zeros(10)
            d = c[a] - c[b]
            row[3 * a : 3 * a + 3] = 2.0 * d
            row[3 * b : 3 * b + 3] = -2.0 * d
            rows.append(row)
        for k in range(3):
            row = np.zeros(10)
            row[3 * k : 3 * k + 3] = -2.0 * c[k]
            row[9] = 2.0 * (1.0 + ell)
            rows.append(row)
        return np.array(rows)

    return {"type": "ineq", "fun": fun, "jac": jac}


def _three_ball_starts(count: int, rng: np.random.Generator) -> List[np.ndarray]:
    angles = 2.0 * math.pi * np.arange(3) / 3.0
    ring = np.stack([np.cos(angles), np.sin(angles), np.zeros(3)], axis=1)
    starts = []
    for side in (2.0, 2.5):
        c = ring * side / math.sqrt(3.0)
        starts.append(np.concatenate([c.ravel(), [side / math.sqrt(3.0) - 1.0]]))
    while len(starts) < count:
        dirs = rng.normal(size=(3, 3))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        c = dirs * rng.uniform(1.0, 3.0, size=(3, 1))
        starts.append(np.concatenate([c.ravel(), [np.linalg.norm(c, axis=1).max() - 1.0 + 0.5]]))
    return starts


def three_ball_min_radius(seed: int = 0, starts: int = 20, tol: float = 1e-10) -> ThreeBallResult:
    """Least l such that some ball of radius l meets three non-overlapping unit balls.

    The ball is centred at the origin; variables are the three unit-ball
    centres and l, with |c_a - c_b| >= 2 and |c_k| <= 1 + l.
    """
    rng = np.random.default_rng(seed)
    cons = [_three_ball_constraints()]
    objective = lambda z: z[9]  # noqa: E731
    gradient = lambda z: np.eye(10)[9]  # noqa: E731
    values = []
    best = None
    for z0 in _three_ball_starts(starts, rng):
        res = minimize(
            objective, z0, jac=gradient, constraints=cons, method="SLSQP",
            options={"ftol": 1e-14, "maxiter": 1000},
        )
        z = np.asarray(res.x, dtype=float)
        violation = -min(cons[0]["fun"](z).min(), 0.0)
        if violation > 1e-8:
            continue
        # repair tiny violations so the reported radius is feasible
        c = z[:9].reshape(3, 3)
        ell = max(z[9], np.linalg.norm(c, axis=1).max() - 1.0)
        values.append(ell)
        if best is None or ell < best[0]:
            best = (ell, c)
    if best is None:
        raise PreconditionError("no start converged to a feasible configuration")
    logger.debug("three-ball radii over %d starts: min %.12f", len(values), best[0])
    return ThreeBallResult(
        radius=float(best[0]),
        centres=best[1],
        starts=len(values),
        spread=float(np.percentile(values, 25) - best[0]),
    )


# -- parabola family ----------------------------------------------------------


@dataclass
class SweepResult:
    beta: float
    min_area: float
    argmin_tilt: float
    apex_area: float
    tilts: np.ndarray
    areas: np.ndarray

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "min_area": self.min_area,
            "argmin_tilt": self.argmin_tilt,
            "apex_area": self.apex_area,
        }


def _tilted_min_area(beta: float, tilt: float, samples: int) -> float:
    """Least area of x-y-arc-z over parabolas with axis turned by ``tilt`` that avoid S_x(1)."""
    half = 0.5 * beta
    y = np.array([R_HEX * math.cos(half), R_HEX * math.sin(half)])
    z = np.array([y[0], -y[1]])
    axis = np.array([math.cos(tilt), math.sin(tilt)])
    perp = np.array([-axis[1], axis[0]])
    ay, az = y @ axis, z @ axis
    wy, wz = y @ perp, z @ perp
    w = np.linspace(wz, wy, samples)
    w_span = wy - wz

    slope = (ay - az) / (wy - wz)

    def arc(k: float) -> np.ndarray:
        # chord through y and z plus k times a bump vanishing at both
        a = ay - slope * (wy - w) + k * (wy - w) * (w - wz)
        return a[:, None] * axis + w[:, None] * perp

    def clear(k: float) -> bool:
        return float(np.linalg.norm(arc(k), axis=1).min()) >= 1.0

    lo, hi = 1e-9, 1.0
    while not clear(hi):
        hi *= 2.0
        if hi > 1e9:
            return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if clear(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13 * hi:
            break
    triangle = 2.0 / 3.0 * math.sin(beta)
    return triangle + hi * abs(w_span) ** 3 / 6.0


def apex_tangent_sweep(beta: float, n_axes: int = 41, max_tilt: float = math.pi / 6.0, samples: int = 4001) -> SweepResult:
    """Sweep parabola axis directions and compare with the apex-tangent piece.

    For each tilt the least admissible parabola through y and z is found by
    bisection on its curvature; the apex-tangent parabola is the zero tilt.
    """
    if not SIXTY < beta <= ALPHA0:
        raise PreconditionError("parabola pieces need 60 degrees < beta <= alpha0")
    tilts = np.linspace(-max_tilt, max_tilt, n_axes)
    areas = np.array([_tilted_min_area(beta, float(a), samples) for a in tilts])
    k = int(np.argmin(areas))
    return SweepResult(
        beta=beta,
        min_area=float(areas[k]),
        argmin_tilt=float(tilts[k]),
        apex_area=piece_area(beta),
        tilts=tilts,
        areas=areas,
    )
