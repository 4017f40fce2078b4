"""Verification suites behind the `verify` command"""

from __future__ import annotations

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from bounds import (
    asymptotic_coefficient,
    capped_bound,
    conjectured_density,
    dominance_check,
    half_infinite_bound,
    nesting_identity_residual,
)
from dirichlet import (
    SliceSettings,
    Slicer,
    axis_measures,
    cell_volume_identity,
    certified_bound_for_packing,
    end_ball_axis_length,
    equidistant_angle_max,
    has_end_near,
    truncate_rearrange,
)
from extremal import (
    ALPHA0,
    OptimizerSettings,
    apex_tangent_sweep,
    min_total_area,
    parabola_piece_numeric,
    piece_area,
    three_ball_min_radius,
)
from geometry import AngleExceedsAlpha0
from packing import (
    BOUND_PARAMS,
    Packing,
    gen_hexagonal_parallel,
    gen_random_bundle,
    protected_restriction,
    sample_protected_points,
)

from .models import CheckResult, SuiteReport

logger = logging.getLogger(__name__)

SUITES = ("extremal", "three-ball", "qualified", "angle", "identity", "dominance")
DEFAULT_CASES = {"three-ball": 20, "qualified": 200, "angle": 500, "identity": 3}
SALT = {name: k for k, name in enumerate(SUITES)}

POINTS_PER_PACKING = 10
AREA_SLACK = 1e-6
HEX_SLACK = 1e-5
EVENT_SLACK = 1e-6
ANGLE_SLACK = 1e-6
SUM_SLACK = 1e-9
PARTITION_SLACK = 1e-9
ANGLE_AXIS_LENGTH = 40.0
IDENTITY_SAMPLES = 10_000_000

Row = Tuple[str, float, Optional[float], Optional[dict]]


def case_seeds(seed: int, suite: str, count: int) -> List[int]:
    """Independent per-case seeds; the list for a suite depends only on ``seed``."""
    children = np.random.SeedSequence([int(seed), SALT.get(suite, len(SALT))]).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def two_cylinder_configuration(rng: np.random.Generator, length: float = ANGLE_AXIS_LENGTH) -> Tuple[Packing, np.ndarray]:
    """Axis 0 along z through the origin and a second axis at distance >= 2 from it.

    The second axis crosses the common perpendicular at height |z| <= 2 and
    distance h in [2, 4/sqrt(3)]; both axes are long enough that no end lies
    within 4/sqrt(3) of the origin.
    """
    half = 0.5 * length
    zc = rng.uniform(-2.0, 2.0)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    psi = rng.uniform(0.0, math.pi)
    h = rng.uniform(2.0, BOUND_PARAMS.r_end)
    u = np.array([math.cos(phi), math.sin(phi), 0.0])
    w = np.cross([0.0, 0.0, 1.0], u)
    d = math.cos(psi) * np.array([0.0, 0.0, 1.0]) + math.sin(psi) * w
    centre = np.array([0.0, 0.0, zc]) + h * u + rng.uniform(-3.0, 3.0) * d
    p0 = np.array([[0.0, 0.0, -half], centre - half * d])
    p1 = np.array([[0.0, 0.0, half], centre + half * d])
    return Packing(p0=p0, p1=p1, capped=True, R=2.0 * length, t=length), np.zeros(3)


def identity_configurations() -> List[Tuple[str, Packing, int]]:
    """Isolated cylinder, tangent pair and the hexagonal 7-cylinder cluster, all t = 4."""
    half = 2.0
    ring = [(2.0 * math.cos(a), 2.0 * math.sin(a)) for a in np.arange(6) * math.pi / 3.0]
    cluster = [(0.0, 0.0)] + ring

    def column(xy, R):
        xy = np.asarray(xy, dtype=float)
        p0 = np.column_stack([xy, np.full(len(xy), -half)])
        p1 = np.column_stack([xy, np.full(len(xy), half)])
        return Packing(p0=p0, p1=p1, capped=True, R=R, t=2.0 * half)

    return [
        ("isolated", column([(0.0, 0.0)], 4.0), 0),
        ("tangent-pair", column([(-1.0, 0.0), (1.0, 0.0)], 5.0), 0),
        ("hex-cluster", column(cluster, 6.0), 0),
    ]


class _Reducer:
    """Keeps the worst margin per check name, in submission order."""

    def __init__(self):
        self._checks: Dict[str, CheckResult] = {}

    def add(self, name: str, margin: float, value: Optional[float] = None, witness: Optional[dict] = None):
        current = self._checks.get(name)
        if current is None:
            self._checks[name] = CheckResult(name, float(margin), value, 1, witness)
            return
        current.cases += 1
        if margin < current.margin:
            current.margin, current.value, current.witness = float(margin), value, witness

    def extend(self, rows: List[Row]):
        for name, margin, value, witness in rows:
            self.add(name, margin, value, witness)

    def results(self) -> List[CheckResult]:
        return list(self._checks.values())


class VerifyService:
    """Runs the named property suites with deterministic seeds"""

    def __init__(
        self,
        seed: int = 0,
        jobs: int = 1,
        cases: Optional[int] = None,
        progress: bool = True,
        slice_settings: SliceSettings = SliceSettings(),
        identity_samples: int = IDENTITY_SAMPLES,
    ):
        self.seed = int(seed)
        self.jobs = max(int(jobs), 1)
        self.cases = cases
        self.progress = progress
        self.slice_settings = slice_settings
        self.identity_samples = int(identity_samples)
        self._suites: Dict[str, Callable[[], List[CheckResult]]] = {
            "extremal": self._extremal,
            "three-ball": self._three_ball,
            "qualified": self._qualified,
            "angle": self._angle,
            "identity": self._identity,
            "dominance": self._dominance,
        }

    def suites(self, name: str) -> List[str]:
        if name == "all":
            return list(SUITES)
        if name not in self._suites:
            raise ValueError(f"Unknown suite '{name}'. Available: {', '.join(SUITES)}, all")
        return [name]

    def run(self, name: str) -> SuiteReport:
        report = SuiteReport(suite=name, seed=self.seed)
        for suite in self.suites(name):
            logger.info("running suite %s (seed %d, jobs %d)", suite, self.seed, self.jobs)
            for check in self._suites[suite]():
                check.name = f"{suite}.{check.name}"
                report.checks.append(check)
        report.completed_at = datetime.now()
        return report

    # -- helpers -------------------------------------------------------------

    def _count(self, suite: str) -> int:
        return self.cases if self.cases is not None else DEFAULT_CASES[suite]

    def _map_cases(self, suite: str, fn: Callable[[int, int], List[Row]]) -> List[CheckResult]:
        seeds = case_seeds(self.seed, suite, self._count(suite))
        reducer = _Reducer()
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            rows = pool.map(fn, range(len(seeds)), seeds)
            for case_rows in tqdm(
                rows, total=len(seeds), desc=suite, unit="case",
                disable=not self.progress, file=sys.stderr, leave=False,
            ):
                reducer.extend(case_rows)
        return reducer.results()

    # -- suites --------------------------------------------------------------

    def _extremal(self) -> List[CheckResult]:
        reducer = _Reducer()
        result = min_total_area(OptimizerSettings(seed=self.seed, jobs=self.jobs))
        sixty = math.pi / 3.0
        reducer.add(
            "min_area", AREA_SLACK - abs(result.min_area - BOUND_PARAMS.hex_area),
            result.min_area, result.to_dict(),
        )
        spread = max(abs(b - sixty) for b in result.composition)
        reducer.add(
            "six_chords", 1e-4 - spread if result.pieces == 6 else -abs(result.pieces - 6),
            float(result.pieces), result.to_dict(),
        )
        for beta in np.linspace(math.radians(61.0), ALPHA0, 5):
            numeric = parabola_piece_numeric(float(beta))
            exact = piece_area(float(beta))
            reducer.add("parabola_oracle", 1e-8 - abs(numeric - exact), exact, {"beta": float(beta), "numeric": numeric})
        for beta in (math.radians(70.0), math.radians(80.0), ALPHA0):
            sweep = apex_tangent_sweep(beta)
            reducer.add("apex_tangent_minimal", sweep.min_area - sweep.apex_area + AREA_SLACK, sweep.apex_area, sweep.to_dict())
        return reducer.results()

    def _three_ball(self) -> List[CheckResult]:
        target = BOUND_PARAMS.three_ball_radius

        def run(case: int, case_seed: int) -> List[Row]:
            result = three_ball_min_radius(seed=case_seed)
            witness = {"case": case, "seed": case_seed, **result.to_dict()}
            return [("radius", AREA_SLACK - abs(result.radius - target), result.radius, witness)]

        return self._map_cases("three-ball", run)

    def _qualified(self) -> List[CheckResult]:
        settings = self.slice_settings
        floor = BOUND_PARAMS.hex_area - AREA_SLACK

        def run(case: int, case_seed: int) -> List[Row]:
            p = gen_random_bundle(seed=case_seed)
            base = {"case": case, "seed": case_seed}
            rows: List[Row] = []

            measure = axis_measures(p, p.R, check=False)
            gap = abs(measure.mu_y + measure.mu_z - p.n * p.t)
            rows.append(("partition", PARTITION_SLACK - gap, gap, {**base, **measure.to_dict()}))
            longest = max(end_ball_axis_length(p, e) for e in p.ends)
            rows.append(("end_ball", BOUND_PARAMS.t0 - longest, longest, base))
            cert = certified_bound_for_packing(p)
            rows.append(("certified_bound", cert.bound - cert.measured, cert.bound, {**base, **cert.to_dict()}))

            star = protected_restriction(p)
            slicer = Slicer(star, settings)
            for i, x in sample_protected_points(p, POINTS_PER_PACKING, seed=case_seed):
                point = {**base, "cylinder": i, "x": x.tolist()}
                s = slicer.compute(i, x)
                rows.append(("area", s.area - floor, s.area, {**point, "packing": star.to_dict()}))
                radii = [e.radius for e in s.events]
                if radii:
                    rows.append(("event_radius", min(radii) - (BOUND_PARAMS.r_hex - EVENT_SLACK), min(radii), point))
                rows.append(("convexity", s.convexity_defect() + settings.convexity_tol, None, point))
                try:
                    r = truncate_rearrange(s, settings.contact_tol, settings.event_tol, settings.area_tol)
                except AngleExceedsAlpha0 as exc:
                    rows.append(("rearranged_area", ALPHA0 - exc.beta, exc.beta, {**point, "packing": star.to_dict()}))
                    continue
                rows.append(("rearranged_area", r.area_dstarstar - floor, r.area_dstarstar, {**point, **r.to_dict()}))
                rows.append(("monotone", min(r.area_dstar - r.area_dstarstar, s.area - r.area_dstar) + AREA_SLACK, None, point))
                rows.append(("angle_sum", SUM_SLACK - abs(r.angle_sum - 2.0 * math.pi), r.angle_sum, point))
            return rows

        checks = self._map_cases("qualified", run)

        hexagonal = gen_hexagonal_parallel(10.0, 12.0, capped=False)
        centre = int(np.argmin(np.linalg.norm(hexagonal.midpoints, axis=1)))
        area = Slicer(hexagonal, settings).area(centre, hexagonal.midpoints[centre])
        checks.append(CheckResult("hex_interior", HEX_SLACK - abs(area - BOUND_PARAMS.hex_area), area, 1, {"t": 10.0, "R": 12.0}))
        return checks

    def _angle(self) -> List[CheckResult]:
        limit = ALPHA0 + ANGLE_SLACK

        def run(case: int, case_seed: int) -> List[Row]:
            p, x = two_cylinder_configuration(np.random.default_rng(case_seed))
            witness = {"case": case, "seed": case_seed, "packing": p.to_dict(), "x": x.tolist()}
            rows: List[Row] = [("no_end_near", 0.0 if not has_end_near(p, x) else -1.0, None, witness)]
            angle = equidistant_angle_max(p, 0, 1, x)
            rows.append(("alpha0", limit - (angle or 0.0), angle, witness))
            return rows

        checks = self._map_cases("angle", run)

        pair = Packing(
            p0=np.array([[0.0, 0.0, -20.0], [2.0, 0.0, -20.0]]),
            p1=np.array([[0.0, 0.0, 20.0], [2.0, 0.0, 20.0]]),
            capped=True, R=80.0, t=40.0,
        )
        angle = equidistant_angle_max(pair, 0, 1, np.zeros(3))
        value = angle if angle is not None else 0.0
        checks.append(CheckResult("parallel_tangent", ANGLE_SLACK - abs(value - math.pi / 3.0), angle))
        return checks

    def _identity(self) -> List[CheckResult]:
        reducer = _Reducer()
        configs = identity_configurations()[: self._count("identity")]
        for name, p, i in tqdm(configs, desc="identity", disable=not self.progress, file=sys.stderr, leave=False):
            result = cell_volume_identity(
                p, i, n_mc=self.identity_samples, seed=self.seed,
                settings=self.slice_settings, jobs=self.jobs,
            )
            reducer.add(name, result.allowed - result.difference, result.integral, {"config": name, **result.to_dict()})
        return reducer.results()

    def _dominance(self) -> List[CheckResult]:
        reducer = _Reducer()
        for shape in ("capped", "uncapped"):
            result = dominance_check(shape=shape)
            reducer.add(f"rule_of_thumb_{shape}", result.worst_margin, result.worst_t, result.to_dict())
        at_threshold = capped_bound(2.0 * BOUND_PARAMS.t0).bound
        reducer.add("capped_at_2t0", -abs(at_threshold - 1.0), at_threshold)
        half = half_infinite_bound()
        reducer.add("half_infinite", half.gap if half.monotone else -1.0, half.infimum, half.to_dict())
        residual = nesting_identity_residual()
        reducer.add("nesting_identity", 1e-12 - residual, residual)
        zero = conjectured_density(0.0)
        reducer.add("conjectured_at_0", 1e-12 - abs(zero - math.pi / math.sqrt(18.0)), zero)
        capped_c = asymptotic_coefficient("capped")
        reducer.add("asymptotic_capped", min(capped_c - 8.2, 8.4 - capped_c), capped_c)
        uncapped_c = asymptotic_coefficient("uncapped")
        reducer.add("asymptotic_uncapped", min(uncapped_c - 8.8, 8.95 - uncapped_c), uncapped_c)
        return reducer.results()
