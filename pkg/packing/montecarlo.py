"""
Hit-or-miss Monte Carlo volume estimation.

Sampling is split into partitions, each with its own stream spawned from one
``SeedSequence``. Hits are reduced as integers in partition order, so the
estimate is the same whether partitions run serially or on a thread pool.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from geometry import PreconditionError

logger = logging.getLogger(__name__)

CHUNK = 1 << 18
Member = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Box:
    lo: Tuple[float, float, float]
    hi: Tuple[float, float, float]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if any(b <= a for a, b in zip(lo, hi)):
            raise PreconditionError(f"empty box {lo} .. {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    @classmethod
    def cube(cls, half: float, centre: Sequence[float] = (0.0, 0.0, 0.0)) -> "Box":
        c = np.asarray(centre, dtype=float)
        return cls(tuple(c - half), tuple(c + half))


@dataclass
class MCResult:
    estimate: float
    stderr: float
    hits: int
    samples: int

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "hits": self.hits,
            "samples": self.samples,
        }


def _count_hits(member: Member, lo: np.ndarray, hi: np.ndarray, n: int, rng: np.random.Generator) -> int:
    hits = 0
    remaining = n
    while remaining > 0:
        m = min(remaining, CHUNK)
        pts = lo + (hi - lo) * rng.random((m, 3))
        hits += int(np.count_nonzero(member(pts)))
        remaining -= m
    return hits


def _split(n: int, parts: int) -> List[int]:
    base, extra = divmod(n, parts)
    return [base + (1 if k < extra else 0) for k in range(parts)]


def _strata(box: Box, per_axis: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    lo = np.asarray(box.lo)
    step = (np.asarray(box.hi) - lo) / per_axis
    cells = []
    for i in range(per_axis):
        for j in range(per_axis):
            for k in range(per_axis):
                a = lo + step * np.array([i, j, k])
                cells.append((a, a + step))
    return cells


def mc_volume(
    member: Member,
    box: Box,
    n: int,
    seed: Optional[int] = None,
    stratified: bool = False,
    strata_per_axis: int = 4,
    partitions: int = 8,
    jobs: int = 1,
) -> MCResult:
    """Estimate the volume of {q in box : member(q)}.

    ``member`` maps an (N, 3) array to N booleans. With ``stratified`` the box
    is cut into strata_per_axis**3 equal cells sampled in proportion to their
    volume; the standard error then combines the per-cell variances.
    """
    if n < 1:
        raise PreconditionError(f"need at least one sample, got {n}")
    streams = np.random.SeedSequence(seed).spawn(partitions)

    if not stratified:
        counts = _split(n, partitions)
        lo, hi = np.asarray(box.lo), np.asarray(box.hi)

        def run(k: int) -> int:
            return _count_hits(member, lo, hi, counts[k], np.random.default_rng(streams[k]))

        with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
            hits = sum(pool.map(run, range(partitions)))
        frac = hits / n
        volume = box.volume
        stderr = volume * np.sqrt(frac * (1.0 - frac) / n)
        return MCResult(volume * frac, float(stderr), int(hits), n)

    cells = _strata(box, strata_per_axis)
    counts = _split(n, len(cells))
    if min(counts) < 2:
        raise PreconditionError(f"{n} samples cannot fill {len(cells)} strata")
    owner = [c % partitions for c in range(len(cells))]

    def run_partition(k: int) -> List[int]:
        rng = np.random.default_rng(streams[k])
        return [
            _count_hits(member, cells[c][0], cells[c][1], counts[c], rng)
            for c in range(len(cells))
            if owner[c] == k
        ]

    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        per_partition = list(pool.map(run_partition, range(partitions)))

    cell_volume = box.volume / len(cells)
    estimate = 0.0
    variance = 0.0
    total_hits = 0
    cursor = [0] * partitions
    for c in range(len(cells)):
        k = owner[c]
        h = per_partition[k][cursor[k]]
        cursor[k] += 1
        frac = h / counts[c]
        estimate += cell_volume * frac
        variance += cell_volume ** 2 * frac * (1.0 - frac) / counts[c]
        total_hits += h
    logger.debug("stratified estimate over %d cells: %.6g", len(cells), estimate)
    return MCResult(float(estimate), float(np.sqrt(variance)), int(total_hits), n)
