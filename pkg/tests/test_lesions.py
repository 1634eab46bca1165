import numpy as np
import pytest

from leafdx.imaging import BinaryMask, Raster
from leafdx.lesions import (
    LesionMap,
    build_affected_mask,
    compute_severity,
    detect_primary_vein,
    nongreen_mask,
    spot_mask,
    tile_patches,
)
from leafdx.segmentation import MarkerMask, segment_from_mask

GREEN = np.array([0.24, 0.59, 0.22])
BROWN = np.array([0.45, 0.28, 0.10])  # hue ~ 31 deg: outside the green band
MIDRIB = np.array([0.62, 0.58, 0.22])  # yellowish, non-green


def make_leaf(h=90, w=150, rx=60, ry=32):
    img = np.zeros((h, w, 3))
    img[:] = [0.5, 0.49, 0.47]
    ys, xs = np.mgrid[0:h, 0:w]
    inside = ((xs - w / 2) / rx) ** 2 + ((ys - h / 2) / ry) ** 2 <= 1.0
    img[inside] = GREEN
    markers = MarkerMask(inside.astype(np.int32))
    return img, inside, markers


def as_segment(img, inside, markers):
    return segment_from_mask(BinaryMask(inside), markers)


def stamp_disc(img, cx, cy, r, colour):
    ys, xs = np.mgrid[0 : img.shape[0], 0 : img.shape[1]]
    sel = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    img[sel] = colour
    return sel


class TestMasks:
    def test_uniform_green_leaf_empty(self):
        img, inside, markers = make_leaf()
        seg = as_segment(img, inside, markers)
        assert nongreen_mask(Raster.from_float(img), seg).count() == 0

    def test_brown_disc_detected_exactly(self):
        img, inside, markers = make_leaf()
        sel = stamp_disc(img, 75, 45, 8, BROWN)
        seg = as_segment(img, inside, markers)
        got = nongreen_mask(Raster.from_float(img), seg).data
        assert np.array_equal(got, sel & inside)

    def test_fully_brown_leaf_is_all_affected(self):
        img, inside, markers = make_leaf()
        img[inside] = BROWN
        seg = as_segment(img, inside, markers)
        assert np.array_equal(nongreen_mask(Raster.from_float(img), seg).data, inside)

    def test_black_spot_included(self):
        img, inside, markers = make_leaf()
        sel = stamp_disc(img, 70, 45, 5, [0.05, 0.05, 0.05])
        seg = as_segment(img, inside, markers)
        got = spot_mask(Raster.from_float(img), seg).data
        assert np.array_equal(got, sel & inside)

    def test_white_patch_included(self):
        img, inside, markers = make_leaf()
        sel = stamp_disc(img, 70, 45, 5, [0.95, 0.94, 0.93])
        seg = as_segment(img, inside, markers)
        assert np.array_equal(spot_mask(Raster.from_float(img), seg).data, sel & inside)

    def test_mid_grey_not_a_spot(self):
        img, inside, markers = make_leaf()
        stamp_disc(img, 70, 45, 5, [0.5, 0.5, 0.5])
        seg = as_segment(img, inside, markers)
        assert spot_mask(Raster.from_float(img), seg).count() == 0


class TestVein:
    def draw_midrib(self, img, inside, width=2):
        h, w = img.shape[:2]
        sel = np.zeros((h, w), dtype=bool)
        sel[h // 2 - width // 2 : h // 2 + (width + 1) // 2, :] = True
        sel &= inside
        img[sel] = MIDRIB
        return sel

    def test_midrib_found_along_major_axis(self):
        img, inside, markers = make_leaf()
        self.draw_midrib(img, inside)
        seg = as_segment(img, inside, markers)
        ng = nongreen_mask(Raster.from_float(img), seg)
        vein = detect_primary_vein(seg, ng)
        assert vein is not None
        assert abs(vein.theta - 90.0) <= 2.0
        assert abs(abs(vein.rho) - 45.0) <= 2.0

    def test_no_elongated_structure_none(self):
        img, inside, markers = make_leaf()
        stamp_disc(img, 75, 45, 6, BROWN)
        seg = as_segment(img, inside, markers)
        ng = nongreen_mask(Raster.from_float(img), seg)
        assert detect_primary_vein(seg, ng) is None

    def test_perpendicular_line_outside_band(self):
        img, inside, markers = make_leaf()
        sel = np.zeros(inside.shape, dtype=bool)
        sel[:, 74:77] = True
        sel &= inside
        img[sel] = MIDRIB
        seg = as_segment(img, inside, markers)
        ng = nongreen_mask(Raster.from_float(img), seg)
        assert detect_primary_vein(seg, ng) is None


class TestAffectedMask:
    def test_healthy_leaf_with_midrib_empty(self):
        img, inside, markers = make_leaf()
        TestVein().draw_midrib(img, inside)
        seg = as_segment(img, inside, markers)
        lm = build_affected_mask(Raster.from_float(img), seg)
        assert lm.vein_line is not None
        assert lm.mask.count() == 0

    def test_disc_survives_midrib_removal(self):
        img, inside, markers = make_leaf()
        TestVein().draw_midrib(img, inside)
        sel = stamp_disc(img, 75, 25, 7, BROWN)
        seg = as_segment(img, inside, markers)
        lm = build_affected_mask(Raster.from_float(img), seg)
        got = lm.mask.data
        assert (got & sel).sum() / sel.sum() > 0.95
        # midrib band removed
        assert not got[45, 30] and not got[45, 120]

    def test_black_spot_on_midrib_retained(self):
        img, inside, markers = make_leaf()
        TestVein().draw_midrib(img, inside)
        sel = stamp_disc(img, 75, 45, 4, [0.04, 0.04, 0.04])  # on the midrib
        seg = as_segment(img, inside, markers)
        lm = build_affected_mask(Raster.from_float(img), seg)
        assert np.all(lm.mask.data[sel])


class TestTilePatches:
    def lesion_map(self, mask):
        return LesionMap(
            mask=BinaryMask(mask), vein_line=None, spot_mask=BinaryMask(np.zeros_like(mask))
        )

    def test_mid_size_component_kept_as_is(self):
        mask = np.zeros((60, 60), dtype=bool)
        mask[10:24, 20:32] = True  # 14 rows x 12 cols
        patches = tile_patches(self.lesion_map(mask))
        assert len(patches) == 1
        p = patches[0]
        assert (p.w, p.h) == (12, 14)
        assert not p.large_region_label

    def test_small_component_grown_to_minimum(self):
        mask = np.zeros((40, 40), dtype=bool)
        mask[17:23, 17:23] = True  # 6x6
        (p,) = tile_patches(self.lesion_map(mask))
        assert (p.w, p.h) == (10, 10)
        assert p.x <= 17 and p.x + p.w >= 23
        assert p.y <= 17 and p.y + p.h >= 23

    def test_noise_component_discarded(self):
        mask = np.zeros((30, 30), dtype=bool)
        mask[5:8, 5:8] = True  # 3x3: noise
        assert tile_patches(self.lesion_map(mask)) == []

    def test_large_component_tiling(self):
        mask = np.zeros((80, 100), dtype=bool)
        mask[10:40, 20:80] = True  # 30 rows x 60 cols, fully affected
        patches = tile_patches(self.lesion_map(mask))
        # candidate grid is ceil(60/25) x ceil(30/25) = 3 x 2; occupancy keeps 3
        assert all(p.large_region_label for p in patches)
        assert all((p.w, p.h) == (25, 25) for p in patches)
        kept = {(p.x, p.y) for p in patches}
        assert kept == {(20, 10), (45, 10), (70, 10)}

    def test_every_survivor_contributes(self, rng):
        mask = np.zeros((70, 70), dtype=bool)
        mask[4:10, 4:10] = True
        mask[30:62, 20:60] = True
        mask[50:54, 62:66] = True
        patches = tile_patches(self.lesion_map(mask))
        comps = {p.source_component for p in patches}
        assert len(comps) == 3

    def test_bounds_invariant(self, rng):
        for _ in range(10):
            mask = rng.random((50, 64)) < 0.3
            for p in tile_patches(self.lesion_map(mask)):
                assert 10 <= p.w <= 25 and 10 <= p.h <= 25
                assert 0 <= p.x and p.x + p.w <= 64
                assert 0 <= p.y and p.y + p.h <= 50


class TestSeverity:
    def test_fractions(self):
        img, inside, markers = make_leaf()
        seg = as_segment(img, inside, markers)
        empty = LesionMap(
            mask=BinaryMask(np.zeros_like(inside)),
            vein_line=None,
            spot_mask=BinaryMask(np.zeros_like(inside)),
        )
        assert compute_severity(empty, seg) == 0.0
        full = LesionMap(mask=BinaryMask(inside), vein_line=None, spot_mask=empty.spot_mask)
        assert compute_severity(full, seg) == 1.0

    def test_exact_ratio(self):
        mask = np.zeros((40, 40), dtype=bool)
        mask[:10, :10] = True  # 100 px
        leaf_mask = np.zeros((40, 40), dtype=bool)
        leaf_mask[:25, :40] = True  # 1000 px
        seg = segment_from_mask(BinaryMask(leaf_mask), MarkerMask(leaf_mask.astype(np.int32)))
        lm = LesionMap(
            mask=BinaryMask(mask), vein_line=None, spot_mask=BinaryMask(np.zeros_like(mask))
        )
        assert compute_severity(lm, seg) == 0.1

    def test_monotone_in_mask(self, rng):
        leaf_mask = np.ones((30, 30), dtype=bool)
        seg = segment_from_mask(BinaryMask(leaf_mask), MarkerMask(leaf_mask.astype(np.int32)))
        base = rng.random((30, 30)) < 0.2
        grown = base | (rng.random((30, 30)) < 0.2)
        sev_base = compute_severity(
            LesionMap(BinaryMask(base), None, BinaryMask(np.zeros_like(base))), seg
        )
        sev_grown = compute_severity(
            LesionMap(BinaryMask(grown), None, BinaryMask(np.zeros_like(base))), seg
        )
        assert sev_grown >= sev_base
