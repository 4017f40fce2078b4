import math

import numpy as np
import pytest

from packing import Packing


def columns(xy, t: float, R: float, capped: bool = True, z: float = 0.0) -> Packing:
    """Parallel z-axis cylinders of length t centred at height z over the given (x, y)."""
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    p0 = np.column_stack([xy, np.full(len(xy), z - 0.5 * t)])
    p1 = np.column_stack([xy, np.full(len(xy), z + 0.5 * t)])
    return Packing(p0=p0, p1=p1, capped=capped, R=R, t=t)


HEX_RING = [(2.0 * math.cos(a), 2.0 * math.sin(a)) for a in np.arange(6) * math.pi / 3.0]


@pytest.fixture
def make_columns():
    return columns


@pytest.fixture
def single():
    return columns([(0.0, 0.0)], t=10.0, R=20.0)


@pytest.fixture
def tangent_pair():
    return columns([(-1.0, 0.0), (1.0, 0.0)], t=10.0, R=20.0)


@pytest.fixture
def hex_cluster():
    return columns([(0.0, 0.0)] + HEX_RING, t=10.0, R=20.0)
