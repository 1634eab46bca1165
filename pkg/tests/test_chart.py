import json

import numpy as np
import pytest

from leafdx.calibration import (
    ChartSpec,
    chart_spec_from_dict,
    chart_spec_to_dict,
    default_chart_spec,
    detect_chart,
    lab_to_srgb,
    load_chart_spec,
    render_chart,
    save_chart_spec,
    srgb_to_lab,
)
from leafdx.errors import AmbiguousChartError, ChartNotFoundError, MalformedFileError, VersionMismatchError
from leafdx.imaging import Raster


class TestLabConversion:
    def test_white_round_trip(self):
        lab = srgb_to_lab((1.0, 1.0, 1.0))
        # 1e-5 slack: the published 7-digit sRGB matrix is only this consistent
        assert abs(lab[0] - 100.0) < 1e-4
        assert np.allclose(lab[1:], 0.0, atol=1e-4)

    def test_round_trip_in_gamut(self, rng):
        for _ in range(30):
            rgb = rng.random(3) * 0.8 + 0.1
            back = lab_to_srgb(srgb_to_lab(rgb))
            assert np.allclose(back, rgb, atol=1e-9)

    def test_mid_grey_L50(self):
        rgb = lab_to_srgb((50.0, 0.0, 0.0))
        assert np.allclose(rgb, rgb[0])  # achromatic
        assert 0.4 < rgb[0] < 0.5


class TestChartSpec:
    def test_default_spec_invariants(self):
        spec = default_chart_spec()
        assert len(spec.patches) == 24
        groups = [p.group for p in spec.patches]
        assert groups.count(1) == 6
        assert groups.count(2) == 9
        assert groups.count(3) == 9
        g3 = [p for p in spec.patches if p.group == 3]
        labs = {tuple(np.round(p.reference_lab, 6)) for p in g3}
        want = {
            (L, a, b)
            for L in (25.0, 50.0, 75.0)
            for a, b in ((-65.0, 65.0), (-65.0, 0.0), (0.0, 65.0))
        }
        assert labs == want

    def test_cells_cover_grid(self):
        spec = default_chart_spec()
        cells = {(p.row, p.col) for p in spec.patches}
        assert cells == {(r, c) for r in range(4) for c in range(6)}

    def test_round_trip_dict(self):
        spec = default_chart_spec()
        again = chart_spec_from_dict(chart_spec_to_dict(spec))
        assert again == spec

    def test_file_round_trip(self, tmp_path):
        spec = default_chart_spec()
        path = tmp_path / "chart.json"
        save_chart_spec(spec, path)
        assert load_chart_spec(path) == spec

    def test_version_rejected(self, tmp_path):
        d = chart_spec_to_dict(default_chart_spec())
        d["version"] = 99
        path = tmp_path / "chart.json"
        path.write_text(json.dumps(d))
        with pytest.raises(VersionMismatchError):
            load_chart_spec(path)

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "chart.json"
        path.write_text("{not json")
        with pytest.raises(MalformedFileError):
            load_chart_spec(path)

    def test_wrong_patch_count_rejected(self):
        spec = default_chart_spec()
        with pytest.raises(ValueError):
            ChartSpec(patches=spec.patches[:23])


class TestDetectChart:
    def corner_error(self, got, want):
        return np.abs(got - want).max()

    def test_axis_aligned_render(self):
        spec = default_chart_spec()
        truth = render_chart(spec, canvas=(320, 400), scale=0.8)
        det = detect_chart(truth.image, spec)
        assert self.corner_error(det.corners, truth.corners) < 0.5
        assert np.abs(det.patch_values - truth.patch_rgb).max() < 1.5 / 255

    def test_rotated_scaled_render(self):
        spec = default_chart_spec()
        rng = np.random.default_rng(7)
        truth = render_chart(
            spec, canvas=(340, 420), scale=0.7, rotation_deg=10.0, noise_sigma=2 / 255, rng=rng
        )
        det = detect_chart(truth.image, spec)
        assert self.corner_error(det.corners, truth.corners) < 2.0
        assert np.abs(det.patch_values - truth.patch_rgb).max() < 3 / 255

    def test_no_chart_raises(self, rng):
        noise = Raster((rng.random((200, 200, 3)) * 255).astype(np.uint8))
        with pytest.raises(ChartNotFoundError):
            detect_chart(noise, default_chart_spec())

    def test_two_charts_ambiguous(self):
        spec = default_chart_spec()
        a = render_chart(spec, canvas=(300, 800), center=(190, 150), scale=0.55)
        b = render_chart(spec, canvas=(300, 800), center=(600, 150), scale=0.55)
        merged = np.where(
            (np.arange(800)[None, :, None] < 395), a.image.data, b.image.data
        )
        with pytest.raises(AmbiguousChartError):
            detect_chart(Raster(merged.astype(np.uint8)), spec)

    def test_small_image_rejected(self):
        with pytest.raises(ValueError):
            detect_chart(Raster(np.zeros((50, 50, 3), dtype=np.uint8)), default_chart_spec())

    def test_rotation_equivariant_patch_values(self):
        spec = default_chart_spec()
        base = render_chart(spec, canvas=(340, 420), scale=0.75)
        rot = render_chart(spec, canvas=(340, 420), scale=0.75, rotation_deg=-12.0)
        da = detect_chart(base.image, spec)
        db = detect_chart(rot.image, spec)
        assert np.abs(da.patch_values - db.patch_values).max() < 3 / 255

    def test_dark_solid_rectangle_is_not_a_chart(self):
        img = np.full((260, 340, 3), 0.85)
        img[60:200, 80:260] = 0.05
        with pytest.raises(ChartNotFoundError):
            detect_chart(Raster.from_float(img), default_chart_spec())
