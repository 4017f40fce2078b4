"""
Abstract base class for packing generators
Defines the interface that all generator implementations must follow
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from geometry import ContainerTooSmall, PreconditionError

from .density import contained_mask
from .models import Packing

logger = logging.getLogger(__name__)


class BaseGenerator(ABC):
    """Abstract base class for generators of cylinder packings in B(R)"""

    def __init__(self, t: float, R: float, capped: bool = True, seed: Optional[int] = None):
        """
        Initialize the generator

        Args:
            t: Cylinder length (axis length)
            R: Radius of the container ball centred at the origin
            capped: Whether cylinders carry hemispherical caps
            seed: Seed for generators that use randomness
        """
        if t <= 0.0:
            raise PreconditionError(f"cylinder length must be positive, got {t}")
        if R <= 0.0:
            raise PreconditionError(f"container radius must be positive, got {R}")
        self.t = float(t)
        self.R = float(R)
        self.capped = bool(capped)
        self.seed = seed

    @abstractmethod
    def _axes(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Candidate axes before the containment filter

        Returns:
            Tuple (p0, p1) of (n, 3) endpoint arrays
        """
        pass

    def generate(self) -> Packing:
        """
        Build the packing: candidate axes filtered to those contained in B(R)

        Returns:
            Packing of congruent cylinders

        Raises:
            ContainerTooSmall: If no cylinder fits in the container
        """
        p0, p1 = self._axes()
        candidates = Packing(p0=p0, p1=p1, capped=self.capped, R=self.R, t=self.t)
        packing = candidates.subset(contained_mask(candidates, self.R))
        if packing.n == 0:
            raise ContainerTooSmall(
                f"{self.generator_name}: no cylinder of length {self.t} fits in B({self.R})"
            )
        logger.info(
            "%s generated %d of %d candidate cylinders (t=%g, R=%g)",
            self.generator_name, packing.n, candidates.n, self.t, self.R,
        )
        return packing

    def describe(self) -> Dict[str, Any]:
        return {
            "generator": self.generator_name,
            "t": self.t,
            "R": self.R,
            "capped": self.capped,
            "seed": self.seed,
            **self.extra_params(),
        }

    def extra_params(self) -> Dict[str, Any]:
        return {}

    @property
    @abstractmethod
    def generator_name(self) -> str:
        """Return the registry name of this generator"""
        pass

    @property
    def supported_shapes(self) -> List[str]:
        return ["capped", "uncapped"]


def triangular_lattice(spacing: float, extent: float) -> np.ndarray:
    """Points of the triangular lattice with the given spacing inside the disc of radius ``extent``.

    Shape (m, 2); the origin is a lattice point.
    """
    k = int(np.ceil(extent / spacing)) + 2
    a, b = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1), indexing="ij")
    a = a.ravel().astype(float)
    b = b.ravel().astype(float)
    pts = np.stack([spacing * (a + 0.5 * b), spacing * (np.sqrt(3.0) / 2.0) * b], axis=1)
    return pts[np.einsum("ij,ij->i", pts, pts) <= extent * extent]
