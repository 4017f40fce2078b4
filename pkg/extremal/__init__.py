"""
Extremal area checks: rearranged-slice pieces, their least total, three balls
"""

from .optimize import (
    ExtremalResult,
    OptimizerSettings,
    SweepResult,
    ThreeBallResult,
    grid_minimum,
    apex_tangent_sweep,
    min_total_area,
    three_ball_min_radius,
    total_area,
)
from .pieces import (
    ALPHA0,
    PieceProfile,
    parabola_piece_numeric,
    piece_area,
    piece_area_array,
    piece_area_derivative,
    piece_kind,
    piece_profile,
)

__all__ = [
    'ExtremalResult', 'OptimizerSettings', 'SweepResult', 'ThreeBallResult',
    'grid_minimum', 'apex_tangent_sweep', 'min_total_area', 'three_ball_min_radius',
    'total_area', 'ALPHA0', 'PieceProfile', 'parabola_piece_numeric', 'piece_area',
    'piece_area_array', 'piece_area_derivative', 'piece_kind', 'piece_profile',
]
