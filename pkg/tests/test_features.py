import numpy as np
import pytest

from leafdx.errors import EmptyMaskError
from leafdx.features import (
    FEATURE_COUNT,
    ScalingParams,
    apply_scaling,
    assemble,
    colour_features,
    elliptical_mask,
    feature_names,
    feature_subset_indices,
    fit_scaling,
    texture_features,
)
from leafdx.imaging import BinaryMask, Raster


def eq1_oracle(h, w):
    out = np.zeros((h, w), dtype=bool)
    for i in range(h):
        for j in range(w):
            out[i, j] = (i - h / 2) ** 2 + (j - w / 2) ** 2 < (h / 4 + w / 4) ** 2
    return out


def solid_patch(rgb, h=12, w=12):
    arr = np.zeros((h, w, 3))
    arr[:] = rgb
    return Raster.from_float(arr)


class TestEllipticalMask:
    def test_four_by_four_has_nine_ones(self):
        m = elliptical_mask(4, 4)
        assert m.count() == 9
        assert np.array_equal(m.data, eq1_oracle(4, 4))

    def test_two_by_two_single_centre(self):
        m = elliptical_mask(2, 2)
        assert m.count() == 1
        assert m.data[1, 1]

    def test_one_by_one_empty(self):
        assert elliptical_mask(1, 1).count() == 0

    def test_matches_oracle_all_sizes(self):
        for h in range(1, 31):
            for w in range(1, 31):
                assert np.array_equal(elliptical_mask(h, w).data, eq1_oracle(h, w)), (h, w)


class TestColourFeatures:
    def test_pure_red(self):
        got = colour_features(solid_patch([1, 0, 0]), elliptical_mask(12, 12))
        assert np.allclose(got, [1, 0, 0, 0])

    def test_masked_half(self):
        arr = np.zeros((10, 10, 3))
        arr[:, :5] = [1, 0, 0]
        arr[:, 5:] = [0, 1, 0]
        mask = np.zeros((10, 10), dtype=bool)
        mask[:, 5:] = True
        got = colour_features(Raster.from_float(arr), BinaryMask(mask))
        assert np.allclose(got, [0, 1, 0, 120 / 360])

    def test_empty_mask_rejected(self):
        with pytest.raises(EmptyMaskError):
            colour_features(solid_patch([1, 1, 1]), BinaryMask(np.zeros((12, 12), dtype=bool)))


class TestTextureFeatures:
    def test_constant_patch_values(self):
        got = texture_features(solid_patch([0.7, 0.3, 0.2]), elliptical_mask(12, 12))
        want = np.tile([0.0, 0.0, 1.0, 1.0, 0.0], 24)
        assert np.allclose(got, want)

    def test_stripes_contrast_anisotropy(self):
        arr = np.zeros((16, 16, 3))
        arr[::2] = 0.2  # horizontal stripes
        arr[1::2] = 0.8
        patch = Raster.from_float(arr)
        full = BinaryMask(np.ones((16, 16), dtype=bool))
        feats = texture_features(patch, full)
        names = feature_names()[4:]
        by_name = dict(zip(names, feats))
        assert by_name["tex_R_90_contrast"] > by_name["tex_R_0_contrast"]

    def test_matches_independent_oracle(self, rng):
        from oracles import brute_glcm, glcm_stats_sum
        from leafdx.imaging import hsv_planes

        arr = rng.random((14, 14, 3))
        patch = Raster.from_float(arr)
        mask = rng.random((14, 14)) > 0.3
        feats = texture_features(patch, BinaryMask(mask))
        f = patch.as_float()
        h, s, v = hsv_planes(f)
        planes = [f[..., 0], f[..., 1], f[..., 2], h, s, v]
        k = 0
        for plane in planes:
            for angle in (0, 45, 90, 135):
                cells = brute_glcm(plane, mask, angle)
                want = glcm_stats_sum(cells)
                got = feats[k : k + 5]
                for gi, key in enumerate(
                    ("contrast", "correlation", "energy", "homogeneity", "entropy")
                ):
                    assert abs(got[gi] - want[key]) < 1e-12
                k += 5

    def test_masked_out_pixels_ignored(self, rng):
        arr = rng.random((12, 12, 3))
        mask = elliptical_mask(12, 12)
        base = assemble(Raster.from_float(arr), mask)
        scrambled = arr.copy()
        scrambled[~mask.data] = rng.random(((~mask.data).sum(), 3))
        again = assemble(Raster.from_float(scrambled), mask)
        assert np.array_equal(base, again)


class TestAssemble:
    def test_length_and_layout(self, rng):
        arr = rng.random((15, 13, 3))
        v = assemble(Raster.from_float(arr), elliptical_mask(15, 13))
        assert v.shape == (FEATURE_COUNT,)
        assert np.all(np.isfinite(v))

    def test_constant_red_patch_vector(self):
        v = assemble(solid_patch([1, 0, 0]), elliptical_mask(12, 12))
        assert np.allclose(v[:4], [1, 0, 0, 0])
        assert np.allclose(v[4:], np.tile([0, 0, 1, 1, 0], 24))

    def test_deterministic(self, rng):
        arr = rng.random((12, 12, 3))
        patch = Raster.from_float(arr)
        m = elliptical_mask(12, 12)
        a = assemble(patch, m)
        b = assemble(patch, m)
        assert np.array_equal(a, b)

    def test_names_align(self):
        assert len(feature_names()) == FEATURE_COUNT

    def test_subset_selector(self):
        idx = feature_subset_indices(colour_channels=("R", "G", "B"), stats=("contrast",))
        names = [feature_names()[i] for i in idx]
        assert names[:3] == ["avg_R", "avg_G", "avg_B"]
        assert all(n.endswith("contrast") for n in names[3:])
        assert len(names) == 3 + 6 * 4


class TestScaling:
    def test_single_vector(self, rng):
        v = rng.random(FEATURE_COUNT)
        s = fit_scaling([v])
        assert np.array_equal(s.lo, v)
        assert np.array_equal(s.hi, v)
        assert np.allclose(apply_scaling(v, s), 0.0)

    def test_extremes_map_to_unit_bounds(self, rng):
        a = rng.random(FEATURE_COUNT)
        b = a + rng.random(FEATURE_COUNT) + 0.1
        s = fit_scaling([a, b])
        assert np.allclose(apply_scaling(a, s), -1.0)
        assert np.allclose(apply_scaling(b, s), 1.0)
        assert np.allclose(apply_scaling((a + b) / 2, s), 0.0)

    def test_matches_columnwise_oracle(self, rng):
        train = rng.random((40, FEATURE_COUNT))
        s = fit_scaling(train)
        assert np.array_equal(s.lo, train.min(axis=0))
        assert np.array_equal(s.hi, train.max(axis=0))
        scaled = apply_scaling(train, s)
        assert scaled.min() >= -1.0 - 1e-12
        assert scaled.max() <= 1.0 + 1e-12

    def test_unseen_data_not_clamped(self, rng):
        train = rng.random((10, 4))
        s = fit_scaling(train)
        wild = train.max(axis=0) + 1.0
        assert np.all(apply_scaling(wild, s) > 1.0)

    def test_dimension_mismatch(self, rng):
        s = fit_scaling(rng.random((5, 10)))
        with pytest.raises(ValueError):
            apply_scaling(rng.random(11), s)

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            ScalingParams(lo=np.array([1.0]), hi=np.array([0.0]))
