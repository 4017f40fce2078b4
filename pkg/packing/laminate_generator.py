"""
Laminated packing: cubes of parallel cylinders in three alternating directions
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from geometry import ContainerTooSmall, PreconditionError

from .base_generator import BaseGenerator, triangular_lattice
from .hexagonal_generator import EPS_GAP

logger = logging.getLogger(__name__)

BLOCK_FACTOR = 2.0


class LaminateGenerator(BaseGenerator):
    """Cubic blocks of side ``block_factor * (t + 2)`` tiling space around the origin.

    Block (i, j, k) holds cylinders parallel to coordinate axis (i + j + k) mod 3,
    on a triangular lattice of spacing 2 + 2*eps with axial period padded by
    2*eps. Each block is then turned rigidly about its centre by an angle of
    at most eps. Only cylinders that stay inside their own block are kept, so
    blocks never interact.
    """

    def __init__(
        self,
        t: float,
        R: float,
        capped: bool = True,
        seed: Optional[int] = None,
        eps: float = 0.0,
        block_factor: float = BLOCK_FACTOR,
    ):
        super().__init__(t, R, capped, seed)
        if eps < 0.0:
            raise PreconditionError(f"eps must be non-negative, got {eps}")
        self.eps = float(eps)
        self.block = float(block_factor) * (self.t + 2.0)
        if self.R < 0.5 * self.block:
            raise ContainerTooSmall(
                f"container radius {self.R} cannot hold a laminate block of side {self.block:.4g}"
            )

    @property
    def generator_name(self) -> str:
        return "laminate"

    def extra_params(self) -> Dict[str, Any]:
        return {"eps": self.eps, "block": self.block}

    @property
    def spacing(self) -> float:
        return 2.0 + 2.0 * self.eps

    @property
    def axial_period(self) -> float:
        base = self.t + 2.0 if self.capped else self.t + EPS_GAP
        return base + 2.0 * self.eps

    def _block_axes(self, centre: np.ndarray, orientation: int, rng: np.random.Generator):
        half = 0.5 * self.block
        # a turn by angle eps moves points at most eps * |p - centre|
        margin = 1.0 + self.eps * half * np.sqrt(3.0)
        columns = triangular_lattice(self.spacing, half * np.sqrt(2.0))
        period = self.axial_period
        k = int(np.ceil(half / period)) + 1
        centres_axial = period * np.arange(-k, k + 1)

        across = np.repeat(columns, len(centres_axial), axis=0)
        along = np.tile(centres_axial, len(columns))
        keep = (
            (np.abs(across) <= half - margin).all(axis=1)
            & (np.abs(along) + 0.5 * self.t <= half - margin)
        )
        across, along = across[keep], along[keep]

        others = [d for d in range(3) if d != orientation]
        p0 = np.zeros((len(along), 3))
        p1 = np.zeros((len(along), 3))
        p0[:, others] = across
        p1[:, others] = across
        p0[:, orientation] = along - 0.5 * self.t
        p1[:, orientation] = along + 0.5 * self.t

        if self.eps > 0.0:
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            angle = self.eps * rng.uniform()
            turn = Rotation.from_rotvec(angle * axis)
            p0 = turn.apply(p0)
            p1 = turn.apply(p1)
        return p0 + centre, p1 + centre

    def _block_rng(self, entropy: int, i: int, j: int, k: int) -> np.random.Generator:
        offset = 1 << 20
        return np.random.default_rng([entropy, i + offset, j + offset, k + offset])

    def _axes(self) -> Tuple[np.ndarray, np.ndarray]:
        entropy = self.seed if self.seed is not None else np.random.SeedSequence().entropy
        n_blocks = int(np.ceil(self.R / self.block + 0.5))
        starts: List[np.ndarray] = []
        ends: List[np.ndarray] = []
        reach = self.R + 0.5 * self.block * np.sqrt(3.0)
        for i in range(-n_blocks, n_blocks + 1):
            for j in range(-n_blocks, n_blocks + 1):
                for k in range(-n_blocks, n_blocks + 1):
                    centre = self.block * np.array([i, j, k], dtype=float)
                    if np.linalg.norm(centre) > reach:
                        continue
                    rng = self._block_rng(entropy, i, j, k)
                    a, b = self._block_axes(centre, (i + j + k) % 3, rng)
                    starts.append(a)
                    ends.append(b)
        logger.debug("laminate: %d blocks intersect B(%g)", len(starts), self.R)
        return np.concatenate(starts), np.concatenate(ends)


def gen_laminated_perturbed(t: float, R: float, eps: float = 0.0, seed: Optional[int] = None, capped: bool = True):
    """Laminated packing with per-block turns of at most ``eps``."""
    return LaminateGenerator(t, R, capped=capped, seed=seed, eps=eps).generate()
