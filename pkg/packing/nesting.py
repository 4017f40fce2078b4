"""Nesting capped (t-2)-cylinders inside flat-ended t-cylinders"""

from __future__ import annotations

import numpy as np

from geometry import PreconditionError

from .models import Packing


def nest_capped(p: Packing) -> Packing:
    """Shrink every axis by 1 at each end and put caps on.

    A capped (t-2)-cylinder on the shortened axis lies inside the original
    t-cylinder, so validity is inherited. Volume ratio is (t - 2/3)/t.
    """
    if p.capped:
        raise PreconditionError("nesting expects a packing of flat-ended cylinders")
    if p.n and p.lengths.min() < 2.0 - 1e-12:
        raise PreconditionError(f"nesting needs t >= 2, got t={p.lengths.min():.6g}")
    if not p.n and (p.t or 0.0) < 2.0:
        raise PreconditionError(f"nesting needs t >= 2, got t={p.t}")

    directions = p.directions
    p0 = p.p0 + directions
    p1 = p.p1 - directions
    if p.n:
        # collapse round-off for t == 2 onto the midpoint
        short = p.lengths <= 2.0
        mid = p.midpoints
        p0 = np.where(short[:, None], mid, p0)
        p1 = np.where(short[:, None], mid, p1)
    return Packing(
        p0=p0,
        p1=p1,
        capped=True,
        R=p.R,
        t=max(float(p.t) - 2.0, 0.0) if not p.mixed else None,
        mixed=p.mixed,
        R_inner=p.R_inner,
    )


def nesting_volume_ratio(t: float) -> float:
    return (t - 2.0 / 3.0) / t
