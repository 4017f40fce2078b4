"""
Parallel hexagonal packing: columns on a triangular lattice, stacked along z
"""

from __future__ import annotations

from typing import Any, Dict, Tuple

import numpy as np

from geometry import ContainerTooSmall

from .base_generator import BaseGenerator, triangular_lattice

EPS_GAP = 1e-9
LATTICE_SPACING = 2.0


class HexagonalGenerator(BaseGenerator):
    """All axes parallel to z with centres on a triangular lattice of spacing 2.

    Capped columns repeat with axial period t + 2 so neighbouring caps touch;
    flat-ended columns repeat with period t + EPS_GAP. One cylinder is centred
    at the origin.
    """

    def __init__(self, t: float, R: float, capped: bool = True, seed=None, eps_gap: float = EPS_GAP):
        super().__init__(t, R, capped, seed)
        if self.R <= self.t / 2.0 + 1.0:
            raise ContainerTooSmall(f"need R > t/2 + 1, got t={self.t}, R={self.R}")
        self.eps_gap = float(eps_gap)

    @property
    def generator_name(self) -> str:
        return "hex"

    @property
    def axial_period(self) -> float:
        return self.t + 2.0 if self.capped else self.t + self.eps_gap

    def extra_params(self) -> Dict[str, Any]:
        return {"eps_gap": self.eps_gap} if not self.capped else {}

    def _axes(self) -> Tuple[np.ndarray, np.ndarray]:
        columns = triangular_lattice(LATTICE_SPACING, self.R - 1.0)
        period = self.axial_period
        k = int(np.ceil(self.R / period)) + 1
        centres_z = period * np.arange(-k, k + 1)
        xy = np.repeat(columns, len(centres_z), axis=0)
        z = np.tile(centres_z, len(columns))
        half = 0.5 * self.t
        p0 = np.column_stack([xy, z - half])
        p1 = np.column_stack([xy, z + half])
        return p0, p1


def gen_hexagonal_parallel(t: float, R: float, capped: bool = True):
    """Hexagonal parallel packing of t-cylinders in B(R)."""
    return HexagonalGenerator(t, R, capped).generate()


def lattice_density(t: float, capped: bool = True) -> float:
    """Density of the infinite hexagonal stacking the generator truncates."""
    body = np.pi * t + (4.0 * np.pi / 3.0 if capped else 0.0)
    period = t + 2.0 if capped else t + EPS_GAP
    return float(body / (np.sqrt(12.0) * period))
