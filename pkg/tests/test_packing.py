"""Packing model, validity, density, generators, nesting, Monte Carlo and storage."""

import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from geometry import (
    ContainerTooSmall,
    PackingFormatError,
    PreconditionError,
    points_segments_distance,
    segments_segments_distance,
)
from packing import (
    BOUND_PARAMS,
    AxisIndex,
    BaseGenerator,
    Box,
    GeneratorFactory,
    HexagonalGenerator,
    LaminateGenerator,
    Packing,
    RandomBundleGenerator,
    ball_volume,
    contained_mask,
    contains_in_ball,
    cylinder_volume,
    density,
    ends_near,
    gen_hexagonal_parallel,
    gen_laminated_perturbed,
    gen_random_bundle,
    is_valid_packing,
    lattice_density,
    load_packing,
    mc_volume,
    nest_capped,
    nesting_volume_ratio,
    packing_from_payload,
    restrict,
    sample_protected_points,
    save_packing,
)

from conftest import columns


class TestPackingModel:
    def test_lengths_must_be_congruent(self):
        with pytest.raises(PreconditionError):
            Packing(
                p0=np.array([[0, 0, 0], [5, 0, 0]]),
                p1=np.array([[0, 0, 4], [5, 0, 6]]),
                capped=True, R=20.0,
            )

    def test_mixed_lengths(self):
        p = Packing(
            p0=np.array([[0, 0, 0], [5, 0, 0]]),
            p1=np.array([[0, 0, 4], [5, 0, 6]]),
            capped=True, R=20.0, mixed=True,
        )
        assert p.t == pytest.approx(5.0)
        assert p.total_axis_length() == pytest.approx(10.0)
        assert p.average_length() == pytest.approx(5.0)

    def test_volumes(self, single):
        assert single.volumes()[0] == pytest.approx(10.0 * math.pi + 4.0 * math.pi / 3.0)
        flat = columns([(0.0, 0.0)], t=10.0, R=20.0, capped=False)
        assert flat.volumes()[0] == pytest.approx(10.0 * math.pi)
        assert cylinder_volume(0.0, True) == pytest.approx(4.0 * math.pi / 3.0)
        with pytest.raises(PreconditionError):
            cylinder_volume(-1.0, False)

    def test_dict_round_trip(self, tangent_pair):
        again = Packing.from_dict(tangent_pair.to_dict())
        np.testing.assert_array_equal(again.p0, tangent_pair.p0)
        assert again.capped and again.t == tangent_pair.t

    def test_frozen_arrays(self, single):
        with pytest.raises(ValueError):
            single.p0[0, 0] = 3.0

    def test_bound_params(self):
        assert BOUND_PARAMS.t0 == pytest.approx(48.3266786, abs=1e-4)
        assert BOUND_PARAMS.alpha0_degrees == pytest.approx(85.88, abs=0.01)
        assert BOUND_PARAMS.three_ball_radius == pytest.approx(0.1547005, abs=1e-7)


class TestContainmentAndDensity:
    def test_capped_containment_is_closed(self):
        p = columns([(0.0, 0.0)], t=4.0, R=3.0)
        assert contained_mask(p, 3.0)[0]
        assert not contained_mask(p, 2.9)[0]

    def test_flat_containment_uses_rim(self):
        p = columns([(0.0, 0.0)], t=4.0, R=3.0, capped=False)
        assert contained_mask(p, math.sqrt(5.0))[0]
        assert not contained_mask(p, 2.2)[0]

    def test_single_cylinder_containment_matches_mask(self):
        for capped in (True, False):
            p = columns([(1.0, 0.5)], t=4.0, R=6.0, capped=capped)
            for R in (3.0, 3.5, 4.0, 6.0):
                assert contains_in_ball(p.cylinder(0), R) == bool(contained_mask(p, R)[0])

    def test_single_cylinder_density(self):
        p = columns([(0.0, 0.0)], t=4.0, R=3.0)
        expected = (4.0 * math.pi + 4.0 * math.pi / 3.0) / ball_volume(3.0)
        assert density(p, 3.0, 3.0) == pytest.approx(expected)

    def test_density_requires_ordered_radii(self, single):
        with pytest.raises(PreconditionError):
            density(single, 10.0, 5.0)

    def test_restrict_keeps_container(self, hex_cluster):
        star = restrict(hex_cluster, 8.0)
        assert star.R == hex_cluster.R
        assert star.R_inner == 8.0
        assert star.n == 7


class TestValidation:
    def test_tangent_pair_valid(self, tangent_pair):
        report = is_valid_packing(tangent_pair)
        assert report
        assert report.checked_pairs == 1

    def test_overlap_reported(self):
        p = columns([(0.0, 0.0), (1.5, 0.0)], t=10.0, R=20.0)
        report = is_valid_packing(p)
        assert not report
        (i, j, d), = report.overlapping
        assert (i, j) == (0, 1)
        assert d == pytest.approx(1.5)

    def test_uncontained_reported(self):
        p = columns([(0.0, 0.0), (8.0, 0.0)], t=10.0, R=9.0)
        report = is_valid_packing(p)
        assert report.uncontained == [1]

    def test_flat_stacked_columns_valid(self):
        p = Packing(
            p0=np.array([[0, 0, -5.0], [0, 0, 0.0]]),
            p1=np.array([[0, 0, 0.0], [0, 0, 5.0]]),
            capped=False, R=20.0,
        )
        assert is_valid_packing(p)

    def test_flat_crossing_invalid(self):
        p = Packing(
            p0=np.array([[-5.0, 0, 0], [0, -5.0, 1.5]]),
            p1=np.array([[5.0, 0, 0], [0, 5.0, 1.5]]),
            capped=False, R=20.0,
        )
        assert not is_valid_packing(p, surface_check=True)

    def test_index_finds_tangent_pair(self, tangent_pair):
        pairs = AxisIndex(tangent_pair).candidate_pairs(2.0)
        assert pairs.tolist() == [[0, 1]]


class TestHexagonal:
    def test_valid_and_centred(self):
        p = gen_hexagonal_parallel(10.0, 20.0)
        assert is_valid_packing(p)
        assert np.min(np.linalg.norm(p.midpoints, axis=1)) == pytest.approx(0.0, abs=1e-12)

    def test_flat_valid(self):
        p = gen_hexagonal_parallel(10.0, 14.0, capped=False)
        assert is_valid_packing(p)

    def test_container_too_small(self):
        with pytest.raises(ContainerTooSmall):
            HexagonalGenerator(100.0, 10.0)

    def test_density_grows_with_container(self):
        values = [density(gen_hexagonal_parallel(10.0, R), R, R) for R in (30.0, 60.0, 120.0)]
        assert values[0] < values[1] < values[2] < lattice_density(10.0)

    def test_density_matches_lattice_fraction(self):
        # a capped column counts iff its mid lies in two balls of radius R - 1 offset by -+t/2
        t, R = 10.0, 60.0
        r = R - 1.0
        region = math.pi / 12.0 * (4.0 * r + t) * (2.0 * r - t) ** 2
        expected = lattice_density(t) * region / ball_volume(R)
        assert density(gen_hexagonal_parallel(t, R), R, R) == pytest.approx(expected, rel=0.04)

    def test_large_container_close_to_lattice(self):
        value = density(gen_hexagonal_parallel(10.0, 120.0), 120.0, 120.0)
        assert value == pytest.approx(lattice_density(10.0), rel=0.15)

    def test_lattice_density(self):
        expected = (10.0 * math.pi + 4.0 * math.pi / 3.0) / (math.sqrt(12.0) * 12.0)
        assert lattice_density(10.0) == pytest.approx(expected)
        assert lattice_density(1e9, capped=False) == pytest.approx(math.pi / math.sqrt(12.0), rel=1e-8)


class TestLaminate:
    def test_deterministic(self):
        a = gen_laminated_perturbed(4.0, 16.0, eps=0.01, seed=7)
        b = gen_laminated_perturbed(4.0, 16.0, eps=0.01, seed=7)
        np.testing.assert_array_equal(a.p0, b.p0)
        np.testing.assert_array_equal(a.p1, b.p1)

    def test_seed_changes_turns(self):
        a = gen_laminated_perturbed(4.0, 16.0, eps=0.01, seed=7)
        b = gen_laminated_perturbed(4.0, 16.0, eps=0.01, seed=8)
        assert a.n != b.n or not np.array_equal(a.p0, b.p0)

    def test_valid(self):
        assert is_valid_packing(gen_laminated_perturbed(4.0, 16.0, eps=0.01, seed=3))

    def test_three_directions(self):
        p = gen_laminated_perturbed(4.0, 16.0)
        dominant = np.argmax(np.abs(p.directions), axis=1)
        assert set(dominant.tolist()) == {0, 1, 2}

    def test_turns_lower_density(self):
        flat = gen_laminated_perturbed(4.0, 30.0, eps=0.0)
        turned = gen_laminated_perturbed(4.0, 30.0, eps=0.01, seed=1)
        assert density(turned, 30.0, 30.0) < density(flat, 30.0, 30.0)

    def test_negative_eps(self):
        with pytest.raises(PreconditionError):
            LaminateGenerator(4.0, 16.0, eps=-0.1)

    def test_too_small(self):
        with pytest.raises(ContainerTooSmall):
            LaminateGenerator(40.0, 10.0)


class TestRandomBundle:
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_valid_and_in_range(self, seed):
        p = gen_random_bundle(seed=seed)
        assert p.capped
        assert 10.0 <= p.t <= 60.0
        assert p.t <= p.R <= 2.0 * p.t
        assert 1 <= p.n <= 20
        assert is_valid_packing(p)

    def test_deterministic(self):
        a = gen_random_bundle(seed=11)
        b = gen_random_bundle(seed=11)
        np.testing.assert_array_equal(a.p0, b.p0)

    def test_generate_is_repeatable(self):
        gen = RandomBundleGenerator(seed=11)
        a = gen.generate()
        b = gen.generate()
        np.testing.assert_array_equal(a.p0, b.p0)
        np.testing.assert_array_equal(a.p1, b.p1)
        np.testing.assert_array_equal(a.p0, gen_random_bundle(seed=11).p0)

    def test_fixed_parameters(self):
        p = gen_random_bundle(seed=2, n=6, t=12.0, R=20.0)
        assert p.t == 12.0 and p.R == 20.0
        assert p.n <= 6


class TestFactory:
    def test_supported(self):
        assert GeneratorFactory.supported() == ["hex", "laminate", "random"]

    def test_create(self):
        gen = GeneratorFactory.create("HEX", t=10.0, R=20.0)
        assert isinstance(gen, HexagonalGenerator)
        assert gen.describe()["generator"] == "hex"

    def test_unknown(self):
        with pytest.raises(ValueError, match="Available"):
            GeneratorFactory.create("fcc", t=1.0, R=2.0)

    def test_register_requires_base_class(self):
        with pytest.raises(ValueError):
            GeneratorFactory.register("bogus", dict)

    def test_register(self):
        class Single(BaseGenerator):
            generator_name = "single"

            def _axes(self):
                return np.array([[0.0, 0.0, -0.5 * self.t]]), np.array([[0.0, 0.0, 0.5 * self.t]])

        GeneratorFactory.register("single", Single)
        try:
            p = GeneratorFactory.create("single", t=4.0, R=4.0).generate()
            assert p.n == 1
        finally:
            GeneratorFactory._generators.pop("single")


class TestNesting:
    def test_nested_flat_hex(self):
        flat = gen_hexagonal_parallel(10.0, 14.0, capped=False)
        nested = nest_capped(flat)
        assert nested.capped
        assert nested.t == pytest.approx(8.0)
        assert nested.n == flat.n
        assert is_valid_packing(nested)
        ratio = nested.volumes().sum() / flat.volumes().sum()
        assert ratio == pytest.approx(nesting_volume_ratio(10.0))

    def test_t_two_collapses_to_point(self):
        flat = columns([(0.0, 0.0)], t=2.0, R=5.0, capped=False)
        nested = nest_capped(flat)
        assert nested.lengths[0] == 0.0
        assert nested.volumes()[0] == pytest.approx(4.0 * math.pi / 3.0)

    def test_rejects_capped(self, single):
        with pytest.raises(PreconditionError):
            nest_capped(single)

    def test_rejects_short(self):
        with pytest.raises(PreconditionError):
            nest_capped(columns([(0.0, 0.0)], t=1.0, R=5.0, capped=False))


class TestProtectedPoints:
    def test_closed_ball(self, single):
        # the p1 end sits at (0, 0, 5)
        on_sphere = np.array([[0.0, 0.0, 5.0 - BOUND_PARAMS.r_end]])
        assert ends_near(single, on_sphere)[0]
        assert not ends_near(single, np.zeros((1, 3)))[0]

    def test_samples_are_protected(self, hex_cluster):
        points = sample_protected_points(hex_cluster, 20, seed=1)
        assert len(points) == 20
        inner = hex_cluster.R - BOUND_PARAMS.r_hex
        for i, x in points:
            assert 0 <= i < hex_cluster.n
            assert np.linalg.norm(x) <= inner
            assert not ends_near(hex_cluster, x[None, :])[0]

    def test_short_cylinders_have_none(self):
        p = columns([(0.0, 0.0)], t=4.0, R=10.0)
        assert sample_protected_points(p, 5, seed=0) == []


class TestMonteCarlo:
    @staticmethod
    def unit_ball(q):
        return np.einsum("ij,ij->i", q, q) <= 1.0

    def test_unit_ball(self):
        result = mc_volume(self.unit_ball, Box.cube(1.0), 200_000, seed=5)
        assert abs(result.estimate - 4.0 * math.pi / 3.0) <= 4.0 * result.stderr

    def test_jobs_do_not_change_result(self):
        a = mc_volume(self.unit_ball, Box.cube(1.0), 50_000, seed=9, jobs=1)
        b = mc_volume(self.unit_ball, Box.cube(1.0), 50_000, seed=9, jobs=4)
        assert a.hits == b.hits
        assert a.estimate == b.estimate

    def test_stratified(self):
        result = mc_volume(self.unit_ball, Box.cube(1.0), 128_000, seed=2, stratified=True)
        assert abs(result.estimate - 4.0 * math.pi / 3.0) <= 4.0 * result.stderr

    def test_rejects_no_samples(self):
        with pytest.raises(PreconditionError):
            mc_volume(self.unit_ball, Box.cube(1.0), 0)

    def test_empty_box(self):
        with pytest.raises(PreconditionError):
            Box((0, 0, 0), (1, 0, 1))


class TestStorage:
    def test_save_and_load(self, tmp_path, hex_cluster):
        path = tmp_path / "nested" / "cluster.json"
        summary = save_packing(hex_cluster, str(path))
        assert summary["cylinders"] == 7
        again = load_packing(str(path))
        np.testing.assert_array_equal(again.p1, hex_cluster.p1)

    def test_missing_file(self, tmp_path):
        with pytest.raises(PackingFormatError):
            load_packing(str(tmp_path / "nope.json"))

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(PackingFormatError):
            load_packing(str(path))

    @pytest.mark.parametrize(
        "payload",
        [
            [],
            {"version": 1, "capped": True, "t": 4.0, "R": 10.0},
            {"version": 2, "capped": True, "t": 4.0, "R": 10.0, "cylinders": []},
            {"version": 1, "capped": True, "t": 4.0, "R": 10.0, "cylinders": [{"p0": [0, 0, 0]}]},
            {"version": 1, "capped": True, "t": 4.0, "R": 10.0, "cylinders": [{"p0": [0, 0], "p1": [0, 0, 4]}]},
            {"version": 1, "capped": "false", "t": 4.0, "R": 10.0, "cylinders": []},
            {"version": 1, "capped": 1, "t": 4.0, "R": 10.0, "cylinders": []},
            {"version": 1, "capped": None, "t": 4.0, "R": 10.0, "cylinders": []},
            {"version": 1, "capped": True, "mixed": "yes", "t": 4.0, "R": 10.0, "cylinders": []},
            {
                "version": 1, "capped": True, "t": 4.0, "R": 10.0,
                "cylinders": [{"p0": [0, 0, 0], "p1": [0, 0, 4]}, {"p0": [3, 0, 0], "p1": [3, 0, 6]}],
            },
        ],
    )
    def test_malformed_payloads(self, payload):
        with pytest.raises(PackingFormatError):
            packing_from_payload(payload)

    def test_mixed_flag_loads_unequal_lengths(self):
        payload = {
            "version": 1, "capped": True, "t": 5.0, "R": 10.0, "mixed": True,
            "cylinders": [{"p0": [0, 0, 0], "p1": [0, 0, 4]}, {"p0": [3, 0, 0], "p1": [3, 0, 6]}],
        }
        p = packing_from_payload(json.loads(json.dumps(payload)))
        assert p.mixed and p.lengths.tolist() == [4.0, 6.0]


@st.composite
def capped_pair(draw):
    """Two capped cylinders of equal length with mids in [-2, 2]^3 and random directions."""
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.5, 4.0)
    mids = rng.uniform(-2.0, 2.0, (2, 3))
    dirs = rng.normal(size=(2, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return Packing(p0=mids - 0.5 * t * dirs, p1=mids + 0.5 * t * dirs, capped=True, R=50.0, t=t)


def sampled_overlap(p: Packing, seed: int, n: int = 100_000) -> bool:
    """Whether sampled surface points of cylinder 0 fall strictly inside cylinder 1."""
    rng = np.random.default_rng(seed)
    s = rng.uniform(size=n)
    u = rng.normal(size=(n, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    points = p.p0[0] + s[:, None] * (p.p1[0] - p.p0[0]) + u
    return bool(points_segments_distance(points, p.p0[1], p.p1[1]).min() < 1.0)


radii = st.floats(min_value=1.0, max_value=20.0, allow_nan=False)


class TestProperties:
    @given(capped_pair(), st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=200, deadline=None)
    def test_capped_validity_matches_surface_sampling(self, p, seed):
        d = float(segments_segments_distance(p.p0[:1], p.p1[:1], p.p0[1:], p.p1[1:])[0])
        assume(abs(d - 2.0) >= 0.05)
        report = is_valid_packing(p)
        assert not report.uncontained
        assert bool(report.overlapping) == sampled_overlap(p, seed)

    @given(radii, radii)
    @settings(max_examples=50, deadline=None)
    def test_density_monotone_in_radii(self, a, b):
        p = gen_hexagonal_parallel(10.0, 20.0)
        lo, hi = min(a, b), max(a, b)
        assert density(p, lo, 20.0) <= density(p, hi, 20.0)
        assert density(p, lo, lo) * lo ** 3 == pytest.approx(density(p, lo, hi) * hi ** 3)
        assert density(p, lo, hi) <= density(p, lo, lo)

    @given(radii, radii)
    @settings(max_examples=50, deadline=None)
    def test_restrict_idempotent_subset(self, a, b):
        p = gen_hexagonal_parallel(10.0, 20.0)
        lo, hi = min(a, b), max(a, b)
        star = restrict(p, hi)
        rows = {tuple(x) for x in np.hstack([p.p0, p.p1]).tolist()}
        assert {tuple(x) for x in np.hstack([star.p0, star.p1]).tolist()} <= rows
        assert contained_mask(star, hi).all()

        again = restrict(star, hi)
        np.testing.assert_array_equal(again.p0, star.p0)
        np.testing.assert_array_equal(again.p1, star.p1)

        nested = restrict(star, lo)
        direct = restrict(p, lo)
        np.testing.assert_array_equal(nested.p0, direct.p0)
        np.testing.assert_array_equal(nested.p1, direct.p1)
