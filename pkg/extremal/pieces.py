"""
Areas of the pieces of a rearranged slice.

A piece is the region between two rays from x that meet S_x(2/sqrt(3)) at y
and z, an angle beta apart. Up to 60 degrees the outer side is the chord yz;
beyond that it is the parabola through y and z whose apex touches S_x(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from geometry import DomainError, parabola_segment_area
from packing.models import BOUND_PARAMS

SIXTY = math.pi / 3.0
R_HEX = BOUND_PARAMS.r_hex
ALPHA0 = BOUND_PARAMS.alpha0


@dataclass(frozen=True)
class PieceProfile:
    beta: float
    kind: str
    area: float

    def to_dict(self) -> dict:
        return {"beta": self.beta, "kind": self.kind, "area": self.area}


def piece_kind(beta: float) -> str:
    return "chord" if beta <= SIXTY else "parabola"


def _check(beta: float) -> None:
    if not 0.0 < beta <= ALPHA0:
        raise DomainError(f"piece angle must lie in (0, alpha0], got {beta!r}")


def chord_geometry(beta: float):
    """(chord length, distance from x to the chord) for sector angle beta."""
    half = 0.5 * beta
    return 2.0 * R_HEX * math.sin(half), R_HEX * math.cos(half)


def piece_area(beta: float) -> float:
    _check(beta)
    triangle = 2.0 / 3.0 * math.sin(beta)
    if beta <= SIXTY:
        return triangle
    chord, height = chord_geometry(beta)
    return triangle + parabola_segment_area(chord, 1.0 - height)


def piece_profile(beta: float) -> PieceProfile:
    return PieceProfile(beta=beta, kind=piece_kind(beta), area=piece_area(beta))


def piece_area_array(beta: np.ndarray) -> np.ndarray:
    """Vectorised piece_area for arrays in [0, alpha0]; beta = 0 gives 0."""
    beta = np.asarray(beta, dtype=float)
    half = 0.5 * beta
    triangle = 2.0 / 3.0 * np.sin(beta)
    sagitta = 1.0 - R_HEX * np.cos(half)
    segment = 2.0 / 3.0 * (2.0 * R_HEX * np.sin(half)) * sagitta
    return np.where(beta <= SIXTY, triangle, triangle + segment)


def piece_area_derivative(beta: np.ndarray) -> np.ndarray:
    """Derivative in beta; one-sided from the left at exactly 60 degrees."""
    beta = np.asarray(beta, dtype=float)
    chord = 2.0 / 3.0 * np.cos(beta)
    extra = 4.0 / (3.0 * math.sqrt(3.0)) * (np.cos(0.5 * beta) - R_HEX * np.cos(beta))
    return np.where(beta <= SIXTY, chord, chord + extra)


def parabola_piece_numeric(beta: float) -> float:
    """Piece area from quadrature of the explicit apex-tangent parabola.

    Places x at the origin with the bisector along +X. The parabola has its
    apex at (1, 0) and passes through y and z; the area is the polar integral
    of the region x-y-arc-z.
    """
    _check(beta)
    half = 0.5 * beta
    y = np.array([R_HEX * math.cos(half), R_HEX * math.sin(half)])
    if beta <= SIXTY:
        return float(0.5 * abs(y[0] * (-y[1]) - y[1] * y[0]))
    # X = 1 - k * Y^2 through y
    k = (1.0 - y[0]) / (y[1] ** 2)
    # region = {(X, Y): |Y| <= y1, ray-bounded below, parabola above}
    # split at the chord: triangle below X = y0 plus the cap above it
    def cap_width(X: float) -> float:
        return 2.0 * math.sqrt(max((1.0 - X) / k, 0.0))

    cap, _ = quad(cap_width, y[0], 1.0, epsabs=1e-13, epsrel=1e-12)
    triangle, _ = quad(lambda X: 2.0 * X * math.tan(half), 0.0, y[0], epsabs=1e-13, epsrel=1e-12)
    return float(triangle + cap)
