"""
Core geometry: points, segments, plane frames and quadrature in model units
"""

from .errors import (
    AngleExceedsAlpha0,
    ConfigError,
    ContainerTooSmall,
    CylpackError,
    DegenerateAxis,
    DomainError,
    NonFinite,
    PackingFormatError,
    PreconditionError,
    VerificationFailure,
)
from .primitives import (
    PlaneFrame,
    Segment,
    as_point3,
    chord_interval,
    frame_is_orthonormal,
    plane_frame,
    point_segment_distance,
    points_segments_distance,
    segment_segment_distance,
    segments_segments_distance,
)
from .quadrature import (
    QuadratureSettings,
    area_from_radius_fn,
    integrate_doubling,
    integrate_panels,
    parabola_segment_area,
)

__all__ = [
    'AngleExceedsAlpha0', 'ConfigError', 'ContainerTooSmall', 'CylpackError',
    'DegenerateAxis', 'DomainError', 'NonFinite', 'PackingFormatError',
    'PreconditionError', 'VerificationFailure',
    'PlaneFrame', 'Segment', 'as_point3', 'chord_interval', 'frame_is_orthonormal',
    'plane_frame', 'point_segment_distance', 'points_segments_distance',
    'segment_segment_distance', 'segments_segments_distance',
    'QuadratureSettings', 'area_from_radius_fn', 'integrate_doubling',
    'integrate_panels', 'parabola_segment_area',
]
