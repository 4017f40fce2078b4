"""Data models for packings of unit-radius cylinders"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from geometry import PreconditionError, Segment

LENGTH_TOL = 1e-9
FORMAT_VERSION = 1


@dataclass(frozen=True)
class BoundParams:
    """Constants of the density argument, computed from their definitions"""

    r_hex: float = 2.0 / math.sqrt(3.0)
    r_end: float = 4.0 / math.sqrt(3.0)
    hex_area: float = math.sqrt(12.0)
    t0: float = 4.0 / 3.0 * (4.0 / math.sqrt(3.0) + 1.0) ** 3
    alpha0: float = 2.0 * math.acos(math.sqrt(3.0) - 1.0)
    planar_density: float = math.pi / math.sqrt(12.0)

    @property
    def alpha0_degrees(self) -> float:
        return math.degrees(self.alpha0)

    @property
    def three_ball_radius(self) -> float:
        return self.r_hex - 1.0

    def to_dict(self) -> dict:
        return {
            "t0": self.t0,
            "alpha0": self.alpha0,
            "r_hex": self.r_hex,
            "r_end": self.r_end,
            "hex_area": self.hex_area,
        }


BOUND_PARAMS = BoundParams()


def cylinder_volume(t: float, capped: bool) -> float:
    """Volume of a unit-radius t-cylinder, with two hemispherical caps if capped."""
    if t < 0.0:
        raise PreconditionError(f"length must be non-negative, got {t}")
    body = math.pi * t
    return body + 4.0 * math.pi / 3.0 if capped else body


@dataclass(frozen=True)
class CylinderSpec:
    axis: Segment
    capped: bool
    t: float

    def __post_init__(self):
        if self.t <= 0.0 and not (self.capped and self.t == 0.0):
            raise PreconditionError(f"cylinder length must be positive, got {self.t}")
        if abs(self.axis.length - self.t) > LENGTH_TOL:
            raise PreconditionError(
                f"axis length {self.axis.length:.12g} does not match t={self.t:.12g}"
            )

    @property
    def volume(self) -> float:
        return cylinder_volume(self.t, self.capped)

    @property
    def ends(self) -> tuple:
        return self.axis.p0, self.axis.p1


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float).reshape(-1, 3)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Packing:
    """Finite family of unit-radius cylinders inside the ball B(R) about the origin.

    Axes are stored as two flat (n, 3) endpoint arrays. ``R_inner`` is set on
    restrictions and records the radius the family was restricted to.
    """

    p0: np.ndarray
    p1: np.ndarray
    capped: bool
    R: float
    t: Optional[float] = None
    mixed: bool = False
    R_inner: Optional[float] = None
    lengths: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p0, p1 = _frozen(self.p0), _frozen(self.p1)
        if p0.shape != p1.shape:
            raise PreconditionError("endpoint arrays differ in shape")
        if not (np.all(np.isfinite(p0)) and np.all(np.isfinite(p1))):
            raise PreconditionError("endpoint coordinates must be finite")
        if self.R <= 0.0:
            raise PreconditionError(f"container radius must be positive, got {self.R}")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)
        lengths = np.linalg.norm(p1 - p0, axis=1)
        lengths.setflags(write=False)
        object.__setattr__(self, "lengths", lengths)

        if self.mixed:
            if self.t is None:
                object.__setattr__(self, "t", float(lengths.mean()) if len(lengths) else 0.0)
            return
        if self.t is None:
            if not len(lengths):
                raise PreconditionError("an empty packing needs an explicit t")
            object.__setattr__(self, "t", float(lengths[0]))
        if len(lengths) and np.max(np.abs(lengths - self.t)) > LENGTH_TOL:
            raise PreconditionError("cylinder lengths are not congruent; set mixed=True")

    # -- shape ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return int(self.p0.shape[0])

    def __len__(self) -> int:
        return self.n

    @property
    def directions(self) -> np.ndarray:
        safe = np.where(self.lengths > 0.0, self.lengths, 1.0)
        return (self.p1 - self.p0) / safe[:, None]

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.p0 + self.p1)

    @property
    def ends(self) -> np.ndarray:
        """All axis endpoints, shape (2n, 3): p0 rows first, then p1 rows."""
        return np.concatenate([self.p0, self.p1], axis=0)

    def segment(self, i: int) -> Segment:
        return Segment(self.p0[i], self.p1[i])

    def cylinder(self, i: int) -> CylinderSpec:
        return CylinderSpec(self.segment(i), self.capped, float(self.lengths[i]))

    @property
    def cylinders(self) -> List[CylinderSpec]:
        return [self.cylinder(i) for i in range(self.n)]

    def volumes(self) -> np.ndarray:
        body = math.pi * self.lengths
        return body + 4.0 * math.pi / 3.0 if self.capped else body

    def total_axis_length(self) -> float:
        return float(self.lengths.sum())

    def average_length(self) -> float:
        return float(self.lengths.mean()) if self.n else 0.0

    # -- derivation ----------------------------------------------------------

    def subset(self, mask_or_index, R_inner: Optional[float] = None) -> "Packing":
        return Packing(
            p0=self.p0[mask_or_index],
            p1=self.p1[mask_or_index],
            capped=self.capped,
            R=self.R,
            t=self.t,
            mixed=self.mixed,
            R_inner=self.R_inner if R_inner is None else R_inner,
        )

    def with_cylinders(self, p0: np.ndarray, p1: np.ndarray, capped: bool, t: float) -> "Packing":
        return Packing(p0=p0, p1=p1, capped=capped, R=self.R, t=t, mixed=self.mixed)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        data = {
            "version": FORMAT_VERSION,
            "capped": bool(self.capped),
            "t": float(self.t),
            "R": float(self.R),
            "cylinders": [
                {"p0": a.tolist(), "p1": b.tolist()} for a, b in zip(self.p0, self.p1)
            ],
        }
        if self.mixed:
            data["mixed"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Packing":
        cylinders = data.get("cylinders", [])
        p0 = np.array([c["p0"] for c in cylinders], dtype=float).reshape(-1, 3)
        p1 = np.array([c["p1"] for c in cylinders], dtype=float).reshape(-1, 3)
        return cls(
            p0=p0,
            p1=p1,
            capped=bool(data["capped"]),
            R=float(data["R"]),
            t=float(data["t"]),
            mixed=bool(data.get("mixed", False)),
        )
