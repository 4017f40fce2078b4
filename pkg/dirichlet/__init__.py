"""
Dirichlet slices, their rearrangement, axis measures and the certified bound
"""

from .angles import equidistant_angle_max, equidistant_points
from .identity import CertifiedBound, IdentityResult, cell_volume_identity, certified_bound_for_packing
from .measures import AxisMeasure, axis_measures, end_ball_axis_length, merge_intervals
from .rearrange import Rearrangement, truncate_rearrange
from .slice import (
    BoundaryArc,
    BoundaryEvent,
    DirichletSlice,
    SliceSettings,
    Slicer,
    compute_slice,
    has_end_near,
    is_qualified,
    slice_area,
    slice_export,
    slice_radius,
)

__all__ = [
    'equidistant_angle_max', 'equidistant_points',
    'CertifiedBound', 'IdentityResult', 'cell_volume_identity', 'certified_bound_for_packing',
    'AxisMeasure', 'axis_measures', 'end_ball_axis_length', 'merge_intervals',
    'Rearrangement', 'truncate_rearrange',
    'BoundaryArc', 'BoundaryEvent', 'DirichletSlice', 'SliceSettings', 'Slicer',
    'compute_slice', 'has_end_near', 'is_qualified', 'slice_area', 'slice_export',
    'slice_radius',
]
