import math

import numpy as np
import pytest

from dirichlet import SliceSettings, compute_slice, has_end_near
from geometry import segment_segment_distance
from packing import BOUND_PARAMS, is_valid_packing
from services.models import CheckResult, SuiteReport
from services.plot_service import SIZE_PX, PlotService, canonical_svg
from services.verify_service import (
    SUITES,
    VerifyService,
    _Reducer,
    case_seeds,
    identity_configurations,
    two_cylinder_configuration,
)


class TestModels:
    def test_check_result(self):
        ok = CheckResult("a", 0.0)
        bad = CheckResult("b", -1e-3, witness={"case": 3})
        assert ok.passed and not bad.passed
        again = CheckResult.from_dict(bad.to_dict())
        assert again.margin == bad.margin and again.witness == {"case": 3}

    def test_suite_report(self):
        report = SuiteReport("qualified", 1, [CheckResult("a", 1.0), CheckResult("b", -1.0, witness={"x": 1})])
        assert not report.passed
        assert [c.name for c in report.failures] == ["b"]
        assert report.witness == {"x": 1}
        assert "started_at" not in report.to_dict(timestamps=False)
        restored = SuiteReport.from_dict(report.to_dict())
        assert restored.started_at == report.started_at
        assert len(restored.checks) == 2


class TestReducer:
    def test_keeps_first_worst(self):
        reducer = _Reducer()
        reducer.add("area", 0.5, witness={"case": 0})
        reducer.add("area", 0.1, witness={"case": 1})
        reducer.add("area", 0.1, witness={"case": 2})
        reducer.add("angle", 1.0)
        area, angle = reducer.results()
        assert area.name == "area" and area.cases == 3
        assert area.witness == {"case": 1}
        assert angle.name == "angle"


class TestCases:
    def test_seeds_are_reproducible(self):
        assert case_seeds(5, "angle", 4) == case_seeds(5, "angle", 4)
        assert case_seeds(5, "angle", 4) != case_seeds(6, "angle", 4)
        assert case_seeds(5, "angle", 4) != case_seeds(5, "qualified", 4)
        assert case_seeds(5, "angle", 2) == case_seeds(5, "angle", 4)[:2]

    @pytest.mark.parametrize("seed", range(10))
    def test_two_cylinder_configuration(self, seed):
        p, x = two_cylinder_configuration(np.random.default_rng(seed))
        d = segment_segment_distance(p.segment(0), p.segment(1))
        assert 2.0 - 1e-9 <= d <= BOUND_PARAMS.r_end + 1e-9
        assert not has_end_near(p, x)

    def test_identity_configurations_are_valid(self):
        names = []
        for name, p, i in identity_configurations():
            names.append(name)
            assert is_valid_packing(p)
            assert 0 <= i < p.n
        assert names == ["isolated", "tangent-pair", "hex-cluster"]


class TestVerifyService:
    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="Available"):
            VerifyService(progress=False).run("everything")

    def test_dominance(self):
        report = VerifyService(progress=False).run("dominance")
        assert report.passed
        names = [c.name for c in report.checks]
        assert all(n.startswith("dominance.") for n in names)
        assert "dominance.capped_at_2t0" in names

    def test_angle_suite_is_thread_invariant(self):
        serial = VerifyService(seed=3, cases=12, progress=False).run("angle")
        pooled = VerifyService(seed=3, jobs=4, cases=12, progress=False).run("angle")
        assert serial.passed
        assert serial.to_dict(timestamps=False) == pooled.to_dict(timestamps=False)

    def test_three_ball(self):
        report = VerifyService(seed=1, cases=2, progress=False).run("three-ball")
        assert report.passed
        (check,) = report.checks
        assert check.cases == 2

    def test_qualified(self):
        service = VerifyService(seed=2, cases=1, progress=False, slice_settings=SliceSettings(n_theta=240))
        report = service.run("qualified")
        failed = [c.name for c in report.failures]
        assert report.passed, failed
        assert "qualified.hex_interior" in [c.name for c in report.checks]

    def test_identity(self):
        service = VerifyService(seed=0, cases=1, progress=False, identity_samples=200_000)
        report = service.run("identity")
        assert [c.name for c in report.checks] == ["identity.isolated"]
        assert report.passed

    def test_suite_names(self):
        assert set(SUITES) == {"extremal", "three-ball", "qualified", "angle", "identity", "dominance"}


class TestPlotService:
    @pytest.fixture
    def hex_slice(self, hex_cluster):
        return compute_slice(hex_cluster, 0, np.zeros(3), SliceSettings(n_theta=90))

    def test_build_figure(self, hex_slice):
        fig = PlotService().build_figure(hex_slice)
        names = [trace.name for trace in fig.data]
        assert names == ["S_x(1)", "S_x(2/sqrt(3))", "boundary", "type3"]
        assert fig.layout.width == SIZE_PX
        assert len(fig.layout.annotations) == 1

    def test_reproducible_figure_has_no_annotation(self, hex_slice):
        fig = PlotService().build_figure(hex_slice, reproducible=True)
        assert len(fig.layout.annotations) == 0

    def test_build_plot(self, hex_slice):
        result = PlotService().build_plot(hex_slice)
        assert result["success"]
        assert result["slice_info"]["events"] == 6
        assert result["slice_info"]["samples"] == 96

    def test_boundary_is_closed(self, hex_slice):
        boundary = PlotService().build_figure(hex_slice).data[2]
        assert boundary.x[0] == boundary.x[-1]
        assert math.isclose(boundary.y[0], boundary.y[-1])

    def test_write_svg_failure_returns_none(self, hex_slice, tmp_path, monkeypatch):
        def broken(self, *args, **kwargs):
            raise RuntimeError("no renderer")

        monkeypatch.setattr("plotly.graph_objects.Figure.to_image", broken)
        assert PlotService().write_svg(hex_slice, str(tmp_path / "s.svg")) is None

    def test_write_svg(self, single, tmp_path, monkeypatch):
        tokens = iter(["a1b2c3", "d4e5f6"])

        def fake(self, **kwargs):
            assert kwargs["format"] == "svg"
            uid = next(tokens)
            return (
                f'<svg><defs><clipPath id="clip{uid}xyplot"><rect/></clipPath></defs>'
                f'<g clip-path="url(#clip{uid}xyplot)"/></svg>'
            ).encode()

        monkeypatch.setattr("plotly.graph_objects.Figure.to_image", fake)
        s = compute_slice(single, 0, np.zeros(3), SliceSettings(n_theta=32))
        first = tmp_path / "nested" / "a.svg"
        second = tmp_path / "nested" / "b.svg"
        assert PlotService().write_svg(s, str(first)) == str(first)
        PlotService().write_svg(s, str(second))
        assert first.read_bytes() == second.read_bytes()
        assert b"url(#clipcylpackxyplot)" in first.read_bytes()

    def test_canonical_svg(self):
        svg = (
            '<clipPath id="clip0fa3e9xyplot"/><clipPath id="clip0fa3e9x"/>'
            '<clipPath id="clip0fa3e9legend"/><g clip-path="url(#clip0fa3e9xyplot)"/>'
        )
        fixed = canonical_svg(svg)
        assert "0fa3e9" not in fixed
        assert 'url(#clipcylpackxyplot)' in fixed
        assert canonical_svg("<svg/>") == "<svg/>"

    def test_rendered_svg_is_byte_identical(self, hex_slice, tmp_path):
        pytest.importorskip("kaleido")
        service = PlotService()
        first = service.write_svg(hex_slice, str(tmp_path / "a.svg"), reproducible=True)
        if first is None:
            pytest.skip("kaleido has no renderer available")
        second = service.write_svg(hex_slice, str(tmp_path / "b.svg"), reproducible=True)
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
        assert second is not None
