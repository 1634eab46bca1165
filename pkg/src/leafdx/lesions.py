"""Affected-area isolation on an extracted leaf.

Three cues build the lesion mask: non-green colour, always-included white and
black spots, and removal of the primary vein (whose pale midrib would
otherwise read as disease).  Components are tiled into feature-sized patches.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import (
    BinaryMask,
    LineParam,
    Raster,
    connected_components,
    hough_lines,
    hsv_planes,
    point_line_distance,
)
from .segmentation import LeafSegment, green_mask

SPOT_BLACK_MAX_VALUE = 0.15
SPOT_WHITE_MIN_VALUE = 0.90
SPOT_WHITE_MAX_SATURATION = 0.15

VEIN_ANGLE_BAND_DEG = 20.0
VEIN_VOTE_FRACTION = 0.4
VEIN_BAND_WIDTH = 5.0  # px removed around the detected vein

PATCH_MIN = 10
PATCH_MAX = 25
NOISE_BBOX = 3  # components with bbox at most this size are discarded
TILE_OCCUPANCY = 0.30


@dataclass(frozen=True)
class LesionPatch:
    x: int
    y: int
    w: int
    h: int
    large_region_label: bool
    source_component: int

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class LesionMap:
    mask: BinaryMask  # affected pixels, subset of the leaf
    vein_line: LineParam | None
    spot_mask: BinaryMask  # subset of mask


def nongreen_mask(img: Raster, leaf: LeafSegment) -> BinaryMask:
    """Leaf pixels failing the green-band predicate."""
    if leaf.area == 0:
        raise ValueError("leaf segment is empty")
    return BinaryMask(~green_mask(img) & leaf.mask.data)


def spot_mask(img: Raster, leaf: LeafSegment) -> BinaryMask:
    """Very dark or near-white leaf pixels; always counted as affected."""
    _, s, v = hsv_planes(img.as_float())
    spots = (v <= SPOT_BLACK_MAX_VALUE) | (
        (v >= SPOT_WHITE_MIN_VALUE) & (s <= SPOT_WHITE_MAX_SATURATION)
    )
    return BinaryMask(spots & leaf.mask.data)


def detect_primary_vein(leaf: LeafSegment, candidates: BinaryMask) -> LineParam | None:
    """Strongest line among candidates running along the leaf's major axis.

    The Hough angle of a line equals its direction + 90deg, so the search
    band is centred there.  Only returned when its votes reach a fraction of
    the bbox major-axis length.
    """
    normal_theta = (leaf.orientation + 90.0) % 180.0
    major_axis = max(leaf.bbox[2], leaf.bbox[3])
    min_votes = max(1, int(np.ceil(VEIN_VOTE_FRACTION * major_axis)))
    lines = hough_lines(
        candidates,
        theta_step=1.0,
        min_votes=min_votes,
        theta_range=(normal_theta - VEIN_ANGLE_BAND_DEG, normal_theta + VEIN_ANGLE_BAND_DEG),
    )
    return lines[0] if lines else None


def build_affected_mask(img: Raster, leaf: LeafSegment) -> LesionMap:
    """Non-green plus spots, minus a band around the primary vein; spots are
    re-added afterwards since they are always included."""
    ng = nongreen_mask(img, leaf)
    spots = spot_mask(img, leaf)
    vein = detect_primary_vein(leaf, ng)
    affected = ng.data | spots.data
    if vein is not None:
        ys, xs = np.nonzero(affected)
        near = point_line_distance(xs.astype(float), ys.astype(float), vein) <= VEIN_BAND_WIDTH / 2.0
        affected = affected.copy()
        affected[ys[near], xs[near]] = False
        affected |= spots.data
    return LesionMap(mask=BinaryMask(affected), vein_line=vein, spot_mask=spots)


def _clamp_window(lo: int, size: int, limit: int) -> int:
    """Shift a window start so [lo, lo+size) fits inside [0, limit)."""
    return max(0, min(lo, limit - size))


def tile_patches(lm: LesionMap) -> list[LesionPatch]:
    """One patch per small component (grown to at least 10x10), a grid of
    25x25 windows for oversized components (kept at >= 30% affected pixels
    and flagged as large regions)."""
    mask = lm.mask.data
    img_h, img_w = mask.shape
    comps = connected_components(lm.mask, connectivity=4)
    patches: list[LesionPatch] = []
    for lab in comps.labels():
        ys, xs = np.nonzero(comps.data == lab)
        bx, by = int(xs.min()), int(ys.min())
        bw, bh = int(xs.max() - bx + 1), int(ys.max() - by + 1)
        if bw <= NOISE_BBOX and bh <= NOISE_BBOX:
            continue
        if bw <= PATCH_MAX and bh <= PATCH_MAX:
            w = max(bw, PATCH_MIN)
            h = max(bh, PATCH_MIN)
            w, h = min(w, img_w), min(h, img_h)
            x = _clamp_window(bx - (w - bw) // 2, w, img_w)
            y = _clamp_window(by - (h - bh) // 2, h, img_h)
            patches.append(LesionPatch(x, y, w, h, False, int(lab)))
        else:
            comp = comps.data == lab
            size_w = min(PATCH_MAX, img_w)
            size_h = min(PATCH_MAX, img_h)
            for ty in range(int(np.ceil(bh / PATCH_MAX))):
                for tx in range(int(np.ceil(bw / PATCH_MAX))):
                    x = _clamp_window(bx + tx * PATCH_MAX, size_w, img_w)
                    y = _clamp_window(by + ty * PATCH_MAX, size_h, img_h)
                    window = comp[y : y + size_h, x : x + size_w]
                    if window.sum() >= TILE_OCCUPANCY * size_w * size_h:
                        patches.append(LesionPatch(x, y, size_w, size_h, True, int(lab)))
    return patches


def compute_severity(lm: LesionMap, leaf: LeafSegment) -> float:
    """Affected pixel count divided by leaf area."""
    if leaf.area <= 0:
        raise ValueError("leaf area must be positive")
    return lm.mask.count() / leaf.area
