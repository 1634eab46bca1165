import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafdx.errors import DegenerateHistogramError
from leafdx.imaging import (
    BinaryMask,
    Plane,
    binary_open,
    connected_components,
    dilate,
    erode,
    fill_holes,
    histogram256,
    morphology,
    otsu_from_histogram,
    otsu_threshold,
    reconstruct,
)
from oracles import exhaustive_otsu, flood_fill_components


class TestOtsu:
    def test_bimodal_threshold_between_modes(self):
        a = np.concatenate([np.full(50, 0.2), np.full(50, 0.8)]).reshape(10, 10)
        t = otsu_threshold(Plane(a))
        assert 0.2 < t <= 0.8

    def test_constant_plane_degenerate(self):
        with pytest.raises(DegenerateHistogramError):
            otsu_threshold(Plane(np.full((5, 5), 0.5)))

    def test_matches_exhaustive_search(self, rng):
        for _ in range(25):
            a = np.concatenate(
                [
                    rng.normal(0.3, 0.08, size=60),
                    rng.normal(0.7, 0.05, size=40),
                ]
            ).clip(0, 1)
            p = Plane(a.reshape(10, 10))
            hist = histogram256(p)
            assert otsu_from_histogram(hist) == exhaustive_otsu(hist)

    @given(st.lists(st.integers(0, 50), min_size=256, max_size=256))
    @settings(max_examples=60, deadline=None)
    def test_histogram_argmax_property(self, counts):
        hist = np.array(counts)
        if np.count_nonzero(hist) < 2:
            with pytest.raises(DegenerateHistogramError):
                otsu_from_histogram(hist)
        else:
            assert otsu_from_histogram(hist) == exhaustive_otsu(hist)


class TestMorphology:
    def test_erode_full_mask_strips_ring(self):
        for r in (1, 2, 3, 6):
            m = BinaryMask(np.ones((20, 24), dtype=bool))
            out = erode(m, r).data
            want = np.zeros((20, 24), dtype=bool)
            want[r:-r, r:-r] = True
            assert np.array_equal(out, want)

    def test_open_removes_isolated_pixel(self):
        a = np.zeros((9, 9), dtype=bool)
        a[4, 4] = True
        assert binary_open(BinaryMask(a), 1).count() == 0

    def test_open_idempotent(self, rng):
        m = BinaryMask(rng.random((30, 30)) > 0.45)
        once = binary_open(m, 2)
        twice = binary_open(once, 2)
        assert np.array_equal(once.data, twice.data)

    def test_dilate_erode_duality_on_disc(self):
        a = np.zeros((21, 21), dtype=bool)
        a[10, 10] = True
        d = dilate(BinaryMask(a), 5)
        dy, dx = np.mgrid[-10:11, -10:11]
        assert np.array_equal(d.data, dy**2 + dx**2 <= 25)

    def test_fft_and_shift_paths_agree(self, rng):
        m = rng.random((40, 37)) > 0.5
        from leafdx.imaging.morphology import _fft_counts, _neighbour_counts

        for r in (2, 4):
            assert np.array_equal(_fft_counts(m, r), _neighbour_counts(m, r))

    def test_reconstruct_selects_marked_blob(self):
        a = np.zeros((10, 12), dtype=bool)
        a[1:4, 1:4] = True
        a[6:9, 7:11] = True
        marker = np.zeros_like(a)
        marker[2, 2] = True
        out = reconstruct(BinaryMask(a), BinaryMask(marker)).data
        want = np.zeros_like(a)
        want[1:4, 1:4] = True
        assert np.array_equal(out, want)

    def test_reconstruct_idempotent(self, rng):
        m = BinaryMask(rng.random((25, 25)) > 0.5)
        marker = BinaryMask(rng.random((25, 25)) > 0.8)
        once = reconstruct(m, marker)
        twice = reconstruct(m, once)
        assert np.array_equal(once.data, twice.data)

    def test_dispatcher(self):
        a = np.ones((8, 8), dtype=bool)
        m = BinaryMask(a)
        assert np.array_equal(morphology(m, "erode", 1).data, erode(m, 1).data)
        assert np.array_equal(morphology(m, "dilate", 1).data, dilate(m, 1).data)
        assert np.array_equal(morphology(m, "open", 1).data, binary_open(m, 1).data)
        with pytest.raises(ValueError):
            morphology(m, "reconstruct")
        with pytest.raises(ValueError):
            morphology(m, "median")

    def test_fill_holes(self):
        a = np.zeros((9, 9), dtype=bool)
        a[1:8, 1:8] = True
        a[3:6, 3:6] = False
        out = fill_holes(BinaryMask(a)).data
        want = np.zeros_like(a)
        want[1:8, 1:8] = True
        assert np.array_equal(out, want)


class TestConnectedComponents:
    def test_empty_mask(self):
        out = connected_components(BinaryMask(np.zeros((5, 5), dtype=bool)))
        assert out.data.max() == 0

    def test_diagonal_touching(self):
        a = np.zeros((4, 4), dtype=bool)
        a[1, 1] = a[2, 2] = True
        assert len(connected_components(BinaryMask(a), 4).labels()) == 2
        assert len(connected_components(BinaryMask(a), 8).labels()) == 1

    @pytest.mark.parametrize("connectivity", [4, 8])
    def test_matches_flood_fill_oracle(self, rng, connectivity):
        for density in (0.2, 0.5, 0.8):
            for _ in range(6):
                mask = rng.random((18, 21)) < density
                got = connected_components(BinaryMask(mask), connectivity).data
                want = flood_fill_components(mask, connectivity)
                assert np.array_equal(got, want)

    def test_labels_dense_from_one(self, rng):
        mask = rng.random((30, 30)) < 0.4
        lm = connected_components(BinaryMask(mask), 4)
        labs = lm.labels()
        if len(labs):
            assert labs[0] == 1 and labs[-1] == len(labs)
