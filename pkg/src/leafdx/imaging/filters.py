"""Resampling, colour conversion and sliding-window filters.

Every filter replicates edge pixels (clamped borders) so leaf boundaries do
not pick up dark halos from zero padding.
"""
from __future__ import annotations

import numpy as np

from .types import Plane, Raster

GREY_WEIGHTS = (0.299, 0.587, 0.114)  # ITU-R BT.601


def resize_max_side(img: Raster, limit: int) -> Raster:
    """Downscale so the longer side equals ``limit``; smaller images pass through.

    Aspect ratio is preserved (short side rounded); resampling is bilinear.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    h, w = img.height, img.width
    long_side = max(h, w)
    if long_side <= limit:
        return img
    scale = limit / long_side
    nh = limit if h == long_side else max(1, int(round(h * scale)))
    nw = limit if w == long_side else max(1, int(round(w * scale)))
    src = img.as_float()
    out = _bilinear_resample(src, nh, nw)
    return Raster.from_float(out)


def _bilinear_resample(src: np.ndarray, nh: int, nw: int) -> np.ndarray:
    h, w = src.shape[:2]
    # Pixel-centre alignment: output centre maps to input centre.
    ys = (np.arange(nh) + 0.5) * (h / nh) - 0.5
    xs = (np.arange(nw) + 0.5) * (w / nw) - 0.5
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    if src.ndim == 3:
        fy = fy[..., None]
        fx = fx[..., None]
    tl = src[np.ix_(y0, x0)]
    tr = src[np.ix_(y0, x1)]
    bl = src[np.ix_(y1, x0)]
    br = src[np.ix_(y1, x1)]
    top = tl + (tr - tl) * fx
    bot = bl + (br - bl) * fx
    return top + (bot - top) * fy


def _require_colour(img: Raster):
    if img.channels != 3:
        raise ValueError("operation requires a 3-channel raster")


def rgb_to_grey(img: Raster) -> Plane:
    """Luma in [0, 1] with BT.601 weights."""
    _require_colour(img)
    f = img.as_float()
    wr, wg, wb = GREY_WEIGHTS
    return Plane(wr * f[..., 0] + wg * f[..., 1] + wb * f[..., 2])


def rgb_to_hsv(img: Raster) -> tuple[Plane, Plane, Plane]:
    """Hexcone HSV as three planes: H in [0,1) (degrees/360), S and V in [0,1].

    Achromatic pixels get H = 0; black pixels additionally get S = 0.
    """
    _require_colour(img)
    f = img.as_float()
    h, s, v = hsv_planes(f)
    return Plane(h), Plane(s), Plane(v)


def hsv_planes(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """HSV conversion on a float RGB array in [0, 1]."""
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    v = np.max(rgb, axis=-1)
    delta = v - np.min(rgb, axis=-1)
    chromatic = delta > 0
    safe = np.where(chromatic, delta, 1.0)

    h = np.zeros_like(v)
    rmax = chromatic & (v == r)
    gmax = chromatic & (v == g) & ~rmax
    bmax = chromatic & ~rmax & ~gmax
    h[rmax] = np.mod((g[rmax] - b[rmax]) / safe[rmax], 6.0)
    h[gmax] = (b[gmax] - r[gmax]) / safe[gmax] + 2.0
    h[bmax] = (r[bmax] - g[bmax]) / safe[bmax] + 4.0
    h /= 6.0

    s = np.where(v > 0, delta / np.where(v > 0, v, 1.0), 0.0)
    return h, s, v


def _box_sum(padded: np.ndarray, size: int) -> np.ndarray:
    """Sliding (size x size) window sums via 2-D cumulative sums."""
    c = np.cumsum(np.cumsum(padded, axis=0, dtype=np.float64), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    return (
        c[size:, size:]
        - c[:-size, size:]
        - c[size:, :-size]
        + c[:-size, :-size]
    )


def mean_filter(p: Plane, radius: int) -> Plane:
    """Box average over a (2r+1)^2 window with replicated borders."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    size = 2 * radius + 1
    padded = np.pad(p.data, radius, mode="edge")
    return Plane(_box_sum(padded, size) / (size * size))


SOBEL_NORM = 8.0  # sum of |weights| of one kernel; keeps unit steps <= 1


def sobel_magnitude(p: Plane) -> Plane:
    """Gradient magnitude sqrt(Gx^2 + Gy^2) of the standard 3x3 Sobel pair.

    Responses are scaled by 1/8 per kernel; output is non-negative and not
    rescaled further.
    """
    if p.height < 3 or p.width < 3:
        raise ValueError("image smaller than the 3x3 kernel")
    a = np.pad(p.data, 1, mode="edge")
    # Row/col slices of the padded image around each output pixel.
    tl, tc, tr = a[:-2, :-2], a[:-2, 1:-1], a[:-2, 2:]
    ml, mr = a[1:-1, :-2], a[1:-1, 2:]
    bl, bc, br = a[2:, :-2], a[2:, 1:-1], a[2:, 2:]
    gx = (tr + 2 * mr + br) - (tl + 2 * ml + bl)
    gy = (bl + 2 * bc + br) - (tl + 2 * tc + tr)
    return Plane(np.hypot(gx, gy) / SOBEL_NORM)


def local_entropy(p: Plane, radius: int) -> Plane:
    """Shannon entropy (bits) of the 256-bin histogram in each clamped window.

    Output range is [0, 8]; constant regions score 0.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    size = 2 * radius + 1
    n = float(size * size)
    bins = np.clip((p.data * 256.0).astype(np.int32), 0, 255)
    padded = np.pad(bins, radius, mode="edge")
    acc = np.zeros((p.height, p.width), dtype=np.float64)
    for b in np.unique(bins):
        counts = _box_sum(padded == b, size)
        counts = np.rint(counts)
        nz = counts > 0
        acc[nz] += counts[nz] * np.log2(counts[nz])
    return Plane(np.log2(n) - acc / n)
