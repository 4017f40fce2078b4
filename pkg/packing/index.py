"""Spatial index over axis samples for neighbour queries"""

from __future__ import annotations

from typing import List

import numpy as np
from scipy.spatial import cKDTree

from .models import Packing

DEFAULT_SPACING = 1.0


class AxisIndex:
    """k-d tree over points sampled along every axis.

    Each axis is sampled with spacing at most ``spacing``, so any point
    within distance d of an axis is within d + spacing/2 of one of its
    samples; queries widen their radius accordingly.
    """

    def __init__(self, packing: Packing, spacing: float = DEFAULT_SPACING):
        self.packing = packing
        self.spacing = spacing
        counts = np.maximum(np.ceil(packing.lengths / spacing).astype(int), 1) + 1
        owners = np.repeat(np.arange(packing.n), counts)
        fractions = np.concatenate([np.linspace(0.0, 1.0, c) for c in counts]) if packing.n else np.zeros(0)
        seg = packing.p1 - packing.p0
        samples = packing.p0[owners] + fractions[:, None] * seg[owners] if packing.n else np.zeros((0, 3))
        self.owners = owners
        self.samples = samples
        self.tree = cKDTree(samples) if len(samples) else None

    def candidate_pairs(self, radius: float) -> np.ndarray:
        """Index pairs (i < j) whose axes may be closer than ``radius``."""
        if self.tree is None:
            return np.zeros((0, 2), dtype=int)
        raw = self.tree.query_pairs(radius + self.spacing, output_type="ndarray")
        if not len(raw):
            return np.zeros((0, 2), dtype=int)
        pairs = self.owners[raw]
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        pairs.sort(axis=1)
        return np.unique(pairs, axis=0)

    def axes_near(self, points: np.ndarray, radius: float) -> List[np.ndarray]:
        """For every query point, the axes that may come within ``radius``."""
        points = np.atleast_2d(points)
        if self.tree is None:
            return [np.zeros(0, dtype=int) for _ in range(len(points))]
        hits = self.tree.query_ball_point(points, radius + 0.5 * self.spacing)
        return [np.unique(self.owners[np.asarray(h, dtype=int)]) for h in hits]
