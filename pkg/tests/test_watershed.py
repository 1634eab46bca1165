import numpy as np
import pytest

from leafdx.imaging import LabelMap, Plane, watershed


def two_marker_setup(rng, h=14, w=17):
    grad = Plane(rng.random((h, w)))
    markers = np.zeros((h, w), dtype=np.int32)
    a = (rng.integers(0, h), rng.integers(0, w))
    while True:
        b = (rng.integers(0, h), rng.integers(0, w))
        if b != a:
            break
    markers[a] = 1
    markers[b] = 2
    return grad, LabelMap(markers)


class TestWatershed:
    def test_single_marker_floods_everything(self, rng):
        grad = Plane(rng.random((9, 9)))
        markers = np.zeros((9, 9), dtype=np.int32)
        markers[4, 4] = 1
        out = watershed(grad, LabelMap(markers))
        assert np.all(out.data == 1)

    def test_double_well_boundary_at_ridge(self):
        # 1xN profile: two valleys separated by a ridge at column 5
        row = np.array([0.1, 0.0, 0.1, 0.3, 0.6, 0.9, 0.6, 0.3, 0.1, 0.0, 0.1])
        grad = Plane(np.tile(row, (3, 1)))
        markers = np.zeros((3, 11), dtype=np.int32)
        markers[1, 1] = 1
        markers[1, 9] = 2
        out = watershed(grad, LabelMap(markers)).data
        # hand flooding: labels grow symmetrically up to the ridge column,
        # which is taken whole by whichever flood reaches it first
        assert np.all(out[:, :5] == 1)
        assert np.all(out[:, 6:] == 2)
        assert len(np.unique(out[:, 5])) == 1

    def test_marker_pixels_keep_labels(self, rng):
        grad, markers = two_marker_setup(rng)
        out = watershed(grad, markers).data
        seeded = markers.data > 0
        assert np.array_equal(out[seeded], markers.data[seeded])

    def test_full_partition_and_region_count(self, rng):
        for _ in range(20):
            grad, markers = two_marker_setup(rng)
            out = watershed(grad, markers).data
            assert np.all(out > 0)
            assert set(np.unique(out)) == {1, 2}

    def test_regions_connected(self, rng):
        from oracles import flood_fill_components

        for _ in range(10):
            grad, markers = two_marker_setup(rng)
            out = watershed(grad, markers).data
            for lab in (1, 2):
                comp = flood_fill_components(out == lab, 4)
                assert comp.max() == 1

    def test_no_markers_rejected(self):
        with pytest.raises(ValueError):
            watershed(Plane(np.zeros((4, 4))), LabelMap(np.zeros((4, 4), dtype=np.int32)))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            watershed(Plane(np.zeros((4, 4))), LabelMap(np.ones((5, 4), dtype=np.int32)))

    def test_python_and_numba_paths_agree(self, rng):
        for _ in range(8):
            grad, markers = two_marker_setup(rng, h=11, w=12)
            fast = watershed(grad, markers).data
            slow = watershed(grad, markers, force_python=True).data
            assert np.array_equal(fast, slow)

    def test_deterministic(self, rng):
        grad, markers = two_marker_setup(rng)
        a = watershed(grad, markers).data
        b = watershed(grad, markers).data
        assert np.array_equal(a, b)
