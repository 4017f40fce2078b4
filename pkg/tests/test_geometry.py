"""Tests for segment distances, plane frames and quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geometry import (
    DegenerateAxis,
    NonFinite,
    PreconditionError,
    QuadratureSettings,
    Segment,
    area_from_radius_fn,
    as_point3,
    chord_interval,
    frame_is_orthonormal,
    integrate_doubling,
    integrate_panels,
    parabola_segment_area,
    plane_frame,
    point_segment_distance,
    points_segments_distance,
    segment_segment_distance,
    segments_segments_distance,
)


@st.composite
def segment_strategy(draw, scale=5.0):
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    return Segment(rng.uniform(-scale, scale, 3), rng.uniform(-scale, scale, 3))


def brute_segment_distance(s1: Segment, s2: Segment, n: int = 801) -> float:
    u = np.linspace(0.0, 1.0, n)
    a = s1.p0 + u[:, None] * (s1.p1 - s1.p0)
    return float(points_segments_distance(a, s2.p0, s2.p1).min())


class TestPointSegment:
    def test_projection_inside(self):
        s = Segment([0, 0, 0], [10, 0, 0])
        assert point_segment_distance([3, 4, 0], s) == pytest.approx(4.0)

    def test_projection_clamped_to_end(self):
        s = Segment([0, 0, 0], [10, 0, 0])
        assert point_segment_distance([13, 4, 0], s) == pytest.approx(5.0)

    def test_point_like_segment(self):
        s = Segment([1, 1, 1], [1, 1, 1])
        assert point_segment_distance([1, 1, 3], s) == pytest.approx(2.0)

    def test_non_finite_point(self):
        with pytest.raises(NonFinite):
            as_point3([0.0, math.nan, 1.0])

    def test_vectorised_shape(self):
        pts = np.zeros((4, 3))
        p0 = np.array([[1.0, 0, 0], [0, 2.0, 0]])
        p1 = p0 + np.array([0, 0, 1.0])
        d, s = points_segments_distance(pts, p0, p1, return_param=True)
        assert d.shape == (4, 2)
        np.testing.assert_allclose(d[0], [1.0, 2.0])
        np.testing.assert_allclose(s[0], [0.0, 0.0])


class TestSegmentSegment:
    def test_parallel_offset(self):
        a = Segment([0, 0, 0], [0, 0, 10])
        b = Segment([2, 0, 0], [2, 0, 10])
        assert segment_segment_distance(a, b) == pytest.approx(2.0)

    def test_skew_perpendicular(self):
        a = Segment([-5, 0, 0], [5, 0, 0])
        b = Segment([0, -5, 3], [0, 5, 3])
        assert segment_segment_distance(a, b) == pytest.approx(3.0)

    def test_collinear_gap(self):
        a = Segment([0, 0, 0], [0, 0, 1])
        b = Segment([0, 0, 3], [0, 0, 4])
        assert segment_segment_distance(a, b) == pytest.approx(2.0)

    def test_intersecting(self):
        a = Segment([-1, 0, 0], [1, 0, 0])
        b = Segment([0, -1, 0], [0, 1, 0])
        assert segment_segment_distance(a, b) == pytest.approx(0.0, abs=1e-12)

    @given(segment_strategy(), segment_strategy())
    @settings(max_examples=60, deadline=None)
    def test_matches_dense_sampling(self, s1, s2):
        exact = segment_segment_distance(s1, s2)
        sampled = brute_segment_distance(s1, s2)
        # sampling can only overestimate the distance
        assert exact <= sampled + 1e-9
        assert sampled - exact <= 0.05

    @given(segment_strategy(), segment_strategy())
    @settings(max_examples=40, deadline=None)
    def test_symmetric(self, s1, s2):
        d12 = segments_segments_distance(s1.p0, s1.p1, s2.p0, s2.p1)[0]
        d21 = segments_segments_distance(s2.p0, s2.p1, s1.p0, s1.p1)[0]
        assert d12 == pytest.approx(d21, abs=1e-9)


class TestPlaneFrame:
    def test_orthonormal_for_z_axis(self):
        frame = plane_frame(Segment([0, 0, -1], [0, 0, 1]), [0, 0, 0.5])
        assert frame_is_orthonormal(frame)
        np.testing.assert_allclose(frame.normal, [0, 0, 1])

    @given(segment_strategy(), st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=50, deadline=None)
    def test_orthonormal_random(self, s, frac):
        if s.length < 1e-3:
            return
        frame = plane_frame(s, s.point_at(frac))
        assert frame_is_orthonormal(frame, tol=1e-10)
        pts = frame.points(np.ones(8), np.linspace(0, 2 * np.pi, 8, endpoint=False))
        np.testing.assert_allclose((pts - frame.origin) @ frame.normal, 0.0, atol=1e-12)

    def test_off_axis_point(self):
        with pytest.raises(PreconditionError):
            plane_frame(Segment([0, 0, 0], [0, 0, 1]), [1, 0, 0.5])

    def test_degenerate_axis(self):
        with pytest.raises(DegenerateAxis):
            plane_frame(Segment([0, 0, 0], [0, 0, 0]), [0, 0, 0])

    def test_to_plane_round_trip(self):
        frame = plane_frame(Segment([1, 2, 3], [4, 6, 3]), [1, 2, 3])
        theta = np.array([0.3, 2.0])
        pts = frame.points(np.array([1.5, 0.5]), theta)
        ab = frame.to_plane(pts)
        np.testing.assert_allclose(np.hypot(ab[:, 0], ab[:, 1]), [1.5, 0.5])


class TestChordInterval:
    def test_through_centre(self):
        start, end = chord_interval(np.array([[-5.0, 0, 0]]), np.array([[5.0, 0, 0]]), np.zeros(3), 2.0)
        assert start[0] == pytest.approx(3.0)
        assert end[0] == pytest.approx(7.0)

    def test_miss(self):
        start, end = chord_interval(np.array([[-5.0, 3, 0]]), np.array([[5.0, 3, 0]]), np.zeros(3), 2.0)
        assert end[0] - start[0] == 0.0

    def test_clamped_at_segment_end(self):
        start, end = chord_interval(np.array([[0.0, 0, 0]]), np.array([[10.0, 0, 0]]), np.zeros(3), 1.0)
        assert start[0] == 0.0
        assert end[0] == pytest.approx(1.0)


class TestQuadrature:
    def test_parabola_segment_area(self):
        # y = 1 - x^2 over [-1, 1] has area 4/3
        assert parabola_segment_area(2.0, 1.0) == pytest.approx(4.0 / 3.0)

    def test_parabola_segment_rejects_bad_chord(self):
        with pytest.raises(PreconditionError):
            parabola_segment_area(0.0, 1.0)

    def test_disc_area(self):
        assert area_from_radius_fn(lambda th: np.full_like(th, 5.0)) == pytest.approx(25.0 * math.pi, rel=1e-9)

    def test_scalar_radius_broadcast(self):
        assert area_from_radius_fn(lambda th: 2.0) == pytest.approx(4.0 * math.pi, rel=1e-9)

    def test_hexagon_area_with_breakpoints(self):
        # regular hexagon with inradius 1 has area sqrt(12)
        def r(theta):
            local = np.mod(theta, np.pi / 3.0) - np.pi / 6.0
            return 1.0 / np.cos(local)

        corners = np.arange(6) * np.pi / 3.0
        assert area_from_radius_fn(r, 1e-10, corners) == pytest.approx(math.sqrt(12.0), rel=1e-8)

    def test_non_finite_radius(self):
        with pytest.raises(NonFinite):
            area_from_radius_fn(lambda th: np.full_like(th, np.nan))

    def test_doubling_counts_evaluations(self):
        value, evals = integrate_doubling(lambda x: x ** 2, 0.0, 3.0)
        assert value == pytest.approx(9.0, rel=1e-12)
        assert evals >= 3

    def test_panels_polynomial_exact(self):
        total, budget, _ = integrate_panels(lambda x: x ** 5 - x, [0.0, 1.0, 2.0])
        assert total == pytest.approx(64.0 / 6.0 - 2.0, rel=1e-12)
        assert budget < 1e-10

    def test_panels_kink(self):
        settings_ = QuadratureSettings(rel_tol=1e-9, max_depth=12)
        total, _, _ = integrate_panels(lambda x: np.abs(x - 0.3), [0.0, 1.0], settings_)
        assert total == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-6)


@st.composite
def convex_polygon(draw):
    """Vertices on a circle about a point near the origin, counter-clockwise, origin inside."""
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    k = int(rng.integers(4, 10))
    spacing = 2.0 * np.pi / k
    angles = np.arange(k) * spacing + rng.uniform(-0.4, 0.4, k) * spacing
    scale = rng.uniform(0.5, 3.0)
    shift = rng.uniform(-0.05, 0.05, 2) * scale
    return scale * np.column_stack([np.cos(angles), np.sin(angles)]) + shift


def polygon_radius_fn(vertices):
    edges = np.roll(vertices, -1, axis=0) - vertices
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    offsets = np.einsum("ij,ij->i", normals, vertices)

    def r(theta):
        d = np.column_stack([np.cos(theta), np.sin(theta)])
        nd = d @ normals.T
        with np.errstate(divide="ignore"):
            ratio = np.where(nd > 1e-15, offsets[None, :] / nd, np.inf)
        return ratio.min(axis=1)

    return r


def shoelace(vertices):
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


class TestProperties:
    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=50, deadline=None)
    def test_point_segment_matches_sampling(self, seed):
        rng = np.random.default_rng(seed)
        s = Segment(rng.uniform(-5, 5, 3), rng.uniform(-5, 5, 3))
        p = rng.uniform(-6, 6, 3)
        u = np.linspace(0.0, 1.0, 10_000)
        sampled = float(np.linalg.norm(s.p0 + u[:, None] * (s.p1 - s.p0) - p, axis=1).min())
        exact = point_segment_distance(p, s)
        assert exact <= sampled + 1e-12
        # the sample spacing bounds how far the nearest sample can sit from the foot point
        half_step = 0.5 * s.length / (len(u) - 1)
        slack = 1e-6 if exact > 0.5 else half_step
        assert sampled - exact <= slack

    @given(st.floats(min_value=1e-3, max_value=10.0), st.floats(min_value=0.0, max_value=5.0))
    @settings(max_examples=100, deadline=None)
    def test_parabola_segment_matches_integration(self, chord, sagitta):
        half = 0.5 * chord
        numeric, _ = integrate_doubling(lambda x: sagitta * (1.0 - (x / half) ** 2), -half, half)
        assert parabola_segment_area(chord, sagitta) == pytest.approx(numeric, abs=1e-8)

    @given(convex_polygon())
    @settings(max_examples=40, deadline=None)
    def test_convex_polygon_matches_shoelace(self, vertices):
        corners = np.mod(np.arctan2(vertices[:, 1], vertices[:, 0]), 2.0 * np.pi)
        area = area_from_radius_fn(polygon_radius_fn(vertices), 1e-10, corners)
        assert area == pytest.approx(shoelace(vertices), rel=1e-8)
