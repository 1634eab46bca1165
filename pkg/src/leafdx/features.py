"""Per-patch feature vectors: 4 colour means plus 120 co-occurrence stats.

Layout contract (version tag below): [avg_R, avg_G, avg_B, avg_H] followed by
the texture block ordered channel-major over {R, G, B, H, S, V}, then angle
{0, 45, 90, 135}, then stat {contrast, correlation, energy, homogeneity,
entropy}.  Hue is averaged arithmetically on [0, 1), matching the plain
masked-mean formula the rest of the colour features use.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyMaskError
from .imaging import GLCM_ANGLES, BinaryMask, Plane, Raster, glcm, glcm_stats, hsv_planes

FEATURE_COUNT = 124
FEATURE_LAYOUT_VERSION = "rgbh4-glcm120-v1"

TEXTURE_CHANNELS = ("R", "G", "B", "H", "S", "V")
TEXTURE_STATS = ("contrast", "correlation", "energy", "homogeneity", "entropy")


def elliptical_mask(h: int, w: int) -> BinaryMask:
    """Inscribed disc mask: cell (i, j) is kept iff
    (i - h/2)^2 + (j - w/2)^2 < (h/4 + w/4)^2, evaluated in reals.

    Degenerate for h = w = 1 (empty mask); feature callers guard on that.
    """
    if h < 1 or w < 1:
        raise ValueError("mask dimensions must be >= 1")
    i = np.arange(h)[:, None]
    j = np.arange(w)[None, :]
    r = h / 4.0 + w / 4.0
    return BinaryMask((i - h / 2.0) ** 2 + (j - w / 2.0) ** 2 < r * r)


def _channel_planes(patch: Raster) -> list[np.ndarray]:
    f = patch.as_float()
    h, s, v = hsv_planes(f)
    return [f[..., 0], f[..., 1], f[..., 2], h, s, v]


def colour_features(patch: Raster, m: BinaryMask) -> np.ndarray:
    """Masked means of R, G, B and hue (all in [0, 1])."""
    if patch.channels != 3:
        raise ValueError("colour features require a 3-channel patch")
    sel = m.data
    if not sel.any():
        raise EmptyMaskError("feature mask selects no pixels")
    planes = _channel_planes(patch)
    return np.array([planes[c][sel].mean() for c in (0, 1, 2, 3)])


def texture_features(patch: Raster, m: BinaryMask) -> np.ndarray:
    """5 co-occurrence stats x 4 angles x 6 channel planes = 120 values."""
    if not m.data.any():
        raise EmptyMaskError("feature mask selects no pixels")
    out = np.empty(120)
    k = 0
    for plane_data in _channel_planes(patch):
        plane = Plane(plane_data)
        for angle in GLCM_ANGLES:
            stats = glcm_stats(glcm(plane, m, angle))
            out[k : k + 5] = stats
            k += 5
    return out


def assemble(patch: Raster, m: BinaryMask) -> np.ndarray:
    """Full 124-dimensional feature vector in layout-contract order."""
    return np.concatenate([colour_features(patch, m), texture_features(patch, m)])


def feature_names() -> list[str]:
    names = ["avg_R", "avg_G", "avg_B", "avg_H"]
    for ch in TEXTURE_CHANNELS:
        for angle in GLCM_ANGLES:
            for stat in TEXTURE_STATS:
                names.append(f"tex_{ch}_{angle}_{stat}")
    return names


def feature_subset_indices(
    colour_channels: tuple[str, ...] = ("R", "G", "B", "H"),
    texture_channels: tuple[str, ...] = TEXTURE_CHANNELS,
    stats: tuple[str, ...] = TEXTURE_STATS,
) -> np.ndarray:
    """Index selector for experimenting with feature subsets."""
    keep = []
    for idx, name in enumerate(feature_names()):
        if name.startswith("avg_"):
            if name[4:] in colour_channels:
                keep.append(idx)
        else:
            _, ch, _angle, stat = name.split("_")
            if ch in texture_channels and stat in stats:
                keep.append(idx)
    return np.array(keep, dtype=int)


@dataclass(frozen=True)
class ScalingParams:
    lo: np.ndarray  # per-dimension training minimum
    hi: np.ndarray  # per-dimension training maximum

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("scaling bounds must be matching 1-d arrays")
        if np.any(lo > hi):
            raise ValueError("scaling minimum exceeds maximum")
        lo, hi = lo.copy(), hi.copy()
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dimension(self) -> int:
        return len(self.lo)


def fit_scaling(train: np.ndarray | list) -> ScalingParams:
    """Column-wise min/max of the training vectors."""
    arr = np.asarray(train, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError("need at least one training vector")
    return ScalingParams(lo=arr.min(axis=0), hi=arr.max(axis=0))


def apply_scaling(v: np.ndarray, s: ScalingParams) -> np.ndarray:
    """Affine map of each dimension onto [-1, 1] (training range); constant
    dimensions map to 0.  Unseen data may land outside [-1, 1]."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != s.dimension:
        raise ValueError(f"expected dimension {s.dimension}, got {v.shape[-1]}")
    span = s.hi - s.lo
    safe = np.where(span > 0, span, 1.0)
    out = 2.0 * (v - s.lo) / safe - 1.0
    return np.where(span > 0, out, 0.0)
