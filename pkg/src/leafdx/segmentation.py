"""Scribble-driven leaf extraction.

The user marks the leaf with a pen; background evidence is synthesised from
colour (non-green), texture (local entropy) or a border-ring fallback, and a
marker-controlled watershed of the gradient image carves out the leaf.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InsufficientBackgroundError, MalformedFileError, NoLeafStrokeError
from .imaging import (
    BinaryMask,
    LabelMap,
    Plane,
    Raster,
    dilate,
    hsv_planes,
    local_entropy,
    otsu_threshold,
    rgb_to_grey,
    sobel_magnitude,
    threshold_mask,
    watershed,
)
from .errors import DegenerateHistogramError

LEAF_LABEL = 1
BACKGROUND_LABEL = 2

# Hue band treated as "green" foliage; H is in [0,1) = degrees/360.
GREEN_HUE_LO = 60.0 / 360.0
GREEN_HUE_HI = 180.0 / 360.0
GREEN_MIN_SATURATION = 0.15
GREEN_MIN_VALUE = 0.10

STROKE_EXCLUSION_RADIUS = 20  # px kept free of automatic background
ENTROPY_RADIUS = 4  # 9x9 window
ENTROPY_MAX_BITS = 8.0
# "High detail" needs genuinely busy windows; without this floor the Otsu cut
# of a flat image's entropy plane just splits sensor noise.
ENTROPY_MIN_BITS = 3.0
BORDER_RING_WIDTH = 3


def green_mask(img: Raster) -> np.ndarray:
    """Foliage-green pixels by the fixed hue band predicate."""
    h, s, v = hsv_planes(img.as_float())
    return (
        (h >= GREEN_HUE_LO)
        & (h < GREEN_HUE_HI)
        & (s >= GREEN_MIN_SATURATION)
        & (v >= GREEN_MIN_VALUE)
    )


@dataclass(frozen=True)
class Stroke:
    points: tuple[tuple[float, float], ...]  # (x, y) polyline vertices
    radius: float
    label: str  # leaf | background

    def __post_init__(self):
        if self.label not in ("leaf", "background"):
            raise ValueError(f"stroke label must be leaf|background, got {self.label!r}")
        if self.radius < 1:
            raise ValueError("stroke radius must be >= 1")
        if len(self.points) < 1:
            raise ValueError("stroke needs at least one point")


@dataclass(frozen=True)
class StrokeSet:
    strokes: tuple[Stroke, ...]

    def has_leaf_stroke(self) -> bool:
        return any(s.label == "leaf" for s in self.strokes)

    def __len__(self) -> int:
        return len(self.strokes)


def strokes_to_dict(s: StrokeSet) -> dict:
    return {
        "strokes": [
            {"points": [[float(x), float(y)] for x, y in st.points], "radius": st.radius, "label": st.label}
            for st in s.strokes
        ]
    }


def strokes_from_dict(d: dict) -> StrokeSet:
    try:
        strokes = tuple(
            Stroke(
                points=tuple((float(x), float(y)) for x, y in st["points"]),
                radius=float(st["radius"]),
                label=str(st["label"]),
            )
            for st in d["strokes"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad stroke set: {e}") from e
    return StrokeSet(strokes=strokes)


def save_strokes(s: StrokeSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(strokes_to_dict(s), indent=2))


def load_strokes(path: str | Path) -> StrokeSet:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad stroke set: {e}") from e
    return strokes_from_dict(d)


def scale_strokes(s: StrokeSet, factor: float) -> StrokeSet:
    """Rescale stroke geometry, e.g. after resizing the annotated image."""
    if factor == 1.0:
        return s
    return StrokeSet(
        strokes=tuple(
            Stroke(
                points=tuple((x * factor, y * factor) for x, y in st.points),
                radius=max(1.0, st.radius * factor),
                label=st.label,
            )
            for st in s.strokes
        )
    )


def _rasterise_stroke(st: Stroke, dims: tuple[int, int]) -> np.ndarray:
    """Disc-swept polyline: pixels within ``radius`` of any segment."""
    h, w = dims
    out = np.zeros((h, w), dtype=bool)
    pts = [(float(x), float(y)) for x, y in st.points]
    segments = list(zip(pts, pts[1:])) if len(pts) > 1 else [(pts[0], pts[0])]
    r = st.radius
    for (x0, y0), (x1, y1) in segments:
        lo_x = max(0, int(np.floor(min(x0, x1) - r)))
        hi_x = min(w - 1, int(np.ceil(max(x0, x1) + r)))
        lo_y = max(0, int(np.floor(min(y0, y1) - r)))
        hi_y = min(h - 1, int(np.ceil(max(y0, y1) + r)))
        if lo_x > hi_x or lo_y > hi_y:
            continue  # fully outside: clipped
        gy, gx = np.mgrid[lo_y : hi_y + 1, lo_x : hi_x + 1]
        dx, dy = x1 - x0, y1 - y0
        seg_len2 = dx * dx + dy * dy
        if seg_len2 == 0:
            d2 = (gx - x0) ** 2 + (gy - y0) ** 2
        else:
            t = np.clip(((gx - x0) * dx + (gy - y0) * dy) / seg_len2, 0.0, 1.0)
            d2 = (gx - (x0 + t * dx)) ** 2 + (gy - (y0 + t * dy)) ** 2
        out[lo_y : hi_y + 1, lo_x : hi_x + 1] |= d2 <= r * r
    return out


class MarkerMask(LabelMap):
    """LabelMap restricted to {0: none, 1: leaf, 2: background} with at least
    one leaf pixel."""

    def __post_init__(self):
        super().__post_init__()
        labs = set(np.unique(self.data).tolist())
        if not labs <= {0, LEAF_LABEL, BACKGROUND_LABEL}:
            raise ValueError("marker labels must be within {0, 1, 2}")
        if LEAF_LABEL not in labs:
            raise NoLeafStrokeError("marker mask has no leaf pixel")


def _compose_markers(leaf: np.ndarray, background: np.ndarray) -> MarkerMask:
    labels = np.zeros(leaf.shape, dtype=np.int32)
    labels[leaf] = LEAF_LABEL
    labels[background] = BACKGROUND_LABEL  # background wins on conflicts
    return MarkerMask(labels)


def strokes_to_marker(s: StrokeSet, dims: tuple[int, int]) -> MarkerMask:
    """Rasterise strokes into a marker mask; overlaps resolve to background."""
    if not s.has_leaf_stroke():
        raise NoLeafStrokeError("stroke set has no leaf stroke")
    h, w = dims
    if h < 1 or w < 1:
        raise ValueError("dims must be positive")
    leaf = np.zeros((h, w), dtype=bool)
    background = np.zeros((h, w), dtype=bool)
    for st in s.strokes:
        painted = _rasterise_stroke(st, dims)
        if st.label == "leaf":
            leaf |= painted
        else:
            background |= painted
    if not leaf.any():
        raise NoLeafStrokeError("leaf strokes fall entirely outside the image")
    return _compose_markers(leaf & ~background, background)


def synthesize_background_marker(img: Raster, user: MarkerMask) -> MarkerMask:
    """Add automatic background labels from colour and texture cues.

    Background evidence is (non-green AND outside a 20 px guard band around
    the user's leaf strokes) OR high local entropy; user labels always win.
    Raises InsufficientBackgroundError when no evidence remains (caller falls
    back to a border ring).
    """
    if img.data.shape[:2] != user.data.shape:
        raise ValueError("image and marker dimensions must match")
    non_green = ~green_mask(img)
    guard = dilate(BinaryMask(user.data == LEAF_LABEL), STROKE_EXCLUSION_RADIUS).data

    entropy = local_entropy(rgb_to_grey(img), ENTROPY_RADIUS)
    scaled = Plane(entropy.data / ENTROPY_MAX_BITS)
    try:
        cut = max(otsu_threshold(scaled), ENTROPY_MIN_BITS / ENTROPY_MAX_BITS)
        high_detail = ~threshold_mask(scaled, cut)
    except DegenerateHistogramError:
        high_detail = np.zeros(entropy.data.shape, dtype=bool)

    auto = ((non_green & ~guard) | high_detail) & (user.data == 0)
    if not auto.any():
        raise InsufficientBackgroundError("no automatic background evidence")
    labels = user.data.copy()
    labels[auto] = BACKGROUND_LABEL
    return MarkerMask(labels)


def border_ring_marker(user: MarkerMask, width: int = BORDER_RING_WIDTH) -> MarkerMask:
    """Fallback: label a border ring as background (a leaf photo rarely
    touches every edge)."""
    h, w = user.data.shape
    ring = np.zeros((h, w), dtype=bool)
    ring[:width, :] = ring[-width:, :] = True
    ring[:, :width] = ring[:, -width:] = True
    ring &= user.data == 0
    labels = user.data.copy()
    labels[ring] = BACKGROUND_LABEL
    return MarkerMask(labels)


@dataclass(frozen=True)
class LeafSegment:
    mask: BinaryMask
    bbox: tuple[int, int, int, int]  # x, y, w, h (tight)
    area: int
    orientation: float  # major-axis angle in [0, 180) degrees
    markers: MarkerMask  # markers that produced this segment (for refinement)

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError("leaf segment must contain pixels")


def _mask_orientation(mask: np.ndarray) -> float:
    ys, xs = np.nonzero(mask)
    x0, y0 = xs.mean(), ys.mean()
    mu20 = ((xs - x0) ** 2).mean()
    mu02 = ((ys - y0) ** 2).mean()
    mu11 = ((xs - x0) * (ys - y0)).mean()
    theta = 0.5 * np.degrees(np.arctan2(2 * mu11, mu20 - mu02))
    return float(theta % 180.0)


def segment_from_mask(mask: BinaryMask, markers: MarkerMask) -> LeafSegment:
    ys, xs = np.nonzero(mask.data)
    if len(xs) == 0:
        raise ValueError("empty leaf mask")
    bbox = (int(xs.min()), int(ys.min()), int(xs.max() - xs.min() + 1), int(ys.max() - ys.min() + 1))
    return LeafSegment(
        mask=mask,
        bbox=bbox,
        area=len(xs),
        orientation=_mask_orientation(mask.data),
        markers=markers,
    )


def extract_leaf(img: Raster, markers: MarkerMask) -> LeafSegment:
    """Watershed of the gradient magnitude with the markers as minima; the
    leaf-labelled basin(s) form the segment."""
    grad = sobel_magnitude(rgb_to_grey(img))
    flooded = watershed(grad, markers)
    return segment_from_mask(BinaryMask(flooded.data == LEAF_LABEL), markers)


def refine_with_labels(img: Raster, prev: LeafSegment, extra: StrokeSet) -> LeafSegment:
    """Re-run extraction with extra strokes merged over the previous markers;
    new strokes override old labels where they disagree."""
    if len(extra) == 0:
        raise ValueError("refinement needs at least one extra stroke")
    dims = (img.height, img.width)
    new_leaf = np.zeros(dims, dtype=bool)
    new_bg = np.zeros(dims, dtype=bool)
    for st in extra.strokes:
        painted = _rasterise_stroke(st, dims)
        if st.label == "leaf":
            new_leaf |= painted
        else:
            new_bg |= painted
    new_leaf &= ~new_bg  # background wins within the new strokes too
    labels = prev.markers.data.copy()
    labels[new_leaf] = LEAF_LABEL
    labels[new_bg] = BACKGROUND_LABEL
    return extract_leaf(img, MarkerMask(labels))
