"""
Randomised bundles of nearly parallel capped cylinders
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Tuple

import numpy as np

from geometry import segments_segments_distance

from .base_generator import BaseGenerator

logger = logging.getLogger(__name__)

N_RANGE = (5, 20)
T_RANGE = (10.0, 60.0)
R_FACTOR_RANGE = (1.0, 2.0)
MAX_TILT = 0.3
ATTEMPTS_PER_CYLINDER = 200


class RandomBundleGenerator(BaseGenerator):
    """Random sequential addition of cylinders next to already placed ones.

    Unset ``n``, ``t`` and ``R`` are drawn from the default ranges
    (5-20 cylinders, t in [10, 60], R in [t, 2t]). A proposal is kept only if
    it is contained in B(R) and its axis is at distance >= 2 from every axis
    placed before it, so the result is valid by construction.
    """

    def __init__(
        self,
        t: Optional[float] = None,
        R: Optional[float] = None,
        capped: bool = True,
        seed: Optional[int] = None,
        n: Optional[int] = None,
    ):
        draws = np.random.default_rng(seed)
        if t is None:
            t = float(draws.uniform(*T_RANGE))
        if R is None:
            R = float(t * draws.uniform(*R_FACTOR_RANGE))
        if n is None:
            n = int(draws.integers(N_RANGE[0], N_RANGE[1] + 1))
        super().__init__(t, R, capped, seed)
        self.n_target = int(n)
        # placement stream, rebuilt on every generate() call
        self.entropy = seed if seed is not None else np.random.SeedSequence().entropy

    @property
    def generator_name(self) -> str:
        return "random"

    @property
    def supported_shapes(self):
        return ["capped"]

    def extra_params(self) -> Dict[str, Any]:
        return {"n": self.n_target}

    def _reach(self, mid: np.ndarray, direction: np.ndarray) -> float:
        half = 0.5 * self.t * direction
        return max(np.linalg.norm(mid - half), np.linalg.norm(mid + half)) + 1.0

    def _tilted(self, base: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        d = base + rng.normal(scale=MAX_TILT / np.sqrt(3.0), size=3)
        return d / np.linalg.norm(d)

    def _axes(self) -> Tuple[np.ndarray, np.ndarray]:
        rng = np.random.default_rng([self.entropy, 1])
        base = rng.normal(size=3)
        base /= np.linalg.norm(base)
        slack = max(self.R - 0.5 * self.t - 1.0, 0.0)
        mids = [rng.uniform(-1.0, 1.0, 3) * slack / np.sqrt(3.0) * 0.5]
        dirs = [self._tilted(base, rng)]
        attempts = 0
        while len(mids) < self.n_target and attempts < ATTEMPTS_PER_CYLINDER * self.n_target:
            attempts += 1
            anchor = int(rng.integers(len(mids)))
            direction = self._tilted(base, rng)
            offset = rng.normal(size=3)
            offset -= offset @ dirs[anchor] * dirs[anchor]
            norm = np.linalg.norm(offset)
            if norm < 1e-9:
                continue
            offset *= (2.0 + rng.uniform(0.0, 0.5)) / norm
            shift = rng.uniform(-0.25, 0.25) * self.t * dirs[anchor]
            mid = mids[anchor] + offset + shift
            if self._reach(mid, direction) > self.R:
                continue
            m = np.array(mids)
            d = np.array(dirs)
            half = 0.5 * self.t
            dist = segments_segments_distance(
                np.repeat((mid - half * direction)[None, :], len(m), axis=0),
                np.repeat((mid + half * direction)[None, :], len(m), axis=0),
                m - half * d,
                m + half * d,
            )
            if dist.min() < 2.0:
                continue
            mids.append(mid)
            dirs.append(direction)
        if len(mids) < self.n_target:
            logger.debug("random bundle: placed %d of %d cylinders", len(mids), self.n_target)
        m = np.array(mids)
        d = np.array(dirs)
        return m - 0.5 * self.t * d, m + 0.5 * self.t * d


def gen_random_bundle(seed: Optional[int] = None, n: Optional[int] = None, t: Optional[float] = None, R: Optional[float] = None):
    """Random valid capped bundle; deterministic for a fixed seed."""
    return RandomBundleGenerator(t=t, R=R, capped=True, seed=seed, n=n).generate()
