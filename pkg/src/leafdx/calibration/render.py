"""Chart rendering: printable masters and synthetic camera views.

The same routine backs both uses; tests lean on it as a geometry oracle since
the placement of every corner and patch is known exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..imaging import Raster
from .chart import ChartSpec

BLACK_RGB = (0.0, 0.0, 0.0)
WHITE_RGB = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class RenderedChart:
    """Ground truth of a synthetic chart placement."""

    image: Raster
    corners: np.ndarray  # 4x2 (x, y): TL, TR, BR, BL of the black outer rect
    patch_rgb: np.ndarray  # 24x3 colours as rendered (after any cast)


def render_chart(
    spec: ChartSpec,
    canvas: tuple[int, int] = (480, 640),
    center: tuple[float, float] | None = None,
    scale: float = 1.0,
    rotation_deg: float = 0.0,
    background=(0.42, 0.40, 0.36),
    cast: Callable[[np.ndarray], np.ndarray] | None = None,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
    supersample: int = 2,
) -> RenderedChart:
    """Draw the chart onto a canvas with a similarity placement.

    ``cast`` simulates a camera colour distortion: a function applied to the
    ideal RGB array (N x 3) before quantisation.  ``background`` is either an
    RGB triple or a full (h, w, 3) float array.
    """
    h, w = canvas
    cy = h / 2.0 if center is None else center[1]
    cx = w / 2.0 if center is None else center[0]
    theta = np.deg2rad(rotation_deg)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    mcx, mcy = spec.outer_width / 2.0, spec.outer_height / 2.0

    ss = max(1, int(supersample))
    offs = (np.arange(ss) + 0.5) / ss - 0.5
    ys = (np.arange(h)[:, None] + offs[None, :]).ravel()
    xs = (np.arange(w)[:, None] + offs[None, :]).ravel()
    gx, gy = np.meshgrid(xs, ys)  # (h*ss, w*ss)

    # image -> model: undo translation, rotation, scale
    dx = gx - cx
    dy = gy - cy
    mx = (cos_t * dx + sin_t * dy) / scale + mcx
    my = (-sin_t * dx + cos_t * dy) / scale + mcy

    colour = np.empty((h * ss, w * ss, 3), dtype=np.float64)
    if np.ndim(background) == 3:
        bg = np.repeat(np.repeat(np.asarray(background, dtype=np.float64), ss, 0), ss, 1)
        colour[:] = bg
    else:
        colour[:] = np.asarray(background, dtype=np.float64)

    bb, wb = spec.black_border, spec.white_border
    ow, oh = spec.outer_width, spec.outer_height

    in_white = (mx >= -wb) & (mx < ow + wb) & (my >= -wb) & (my < oh + wb)
    in_black = (mx >= 0) & (mx < ow) & (my >= 0) & (my < oh)
    in_patch = (mx >= bb) & (mx < ow - bb) & (my >= bb) & (my < oh - bb)

    colour[in_white & ~in_black] = WHITE_RGB
    colour[in_black & ~in_patch] = BLACK_RGB

    by_cell = spec.patch_by_cell()
    patch_rgb = np.zeros((24, 3))
    if in_patch.any():
        col_idx = np.clip(((mx - bb) / spec.cell_size).astype(int), 0, spec.cols - 1)
        row_idx = np.clip(((my - bb) / spec.cell_size).astype(int), 0, spec.rows - 1)
        lut = np.zeros((spec.rows, spec.cols, 3))
        for (r, c), p in by_cell.items():
            lut[r, c] = p.reference_rgb
        colour[in_patch] = lut[row_idx[in_patch], col_idx[in_patch]]

    if cast is not None:
        flat = colour.reshape(-1, 3)
        colour = np.clip(cast(flat), 0.0, 1.0).reshape(colour.shape)
        for p in spec.patches:
            patch_rgb[p.id] = np.clip(cast(np.array([p.reference_rgb])), 0.0, 1.0)[0]
    else:
        for p in spec.patches:
            patch_rgb[p.id] = p.reference_rgb

    # average supersamples back to pixel resolution
    colour = colour.reshape(h, ss, w, ss, 3).mean(axis=(1, 3))

    if noise_sigma > 0:
        if rng is None:
            rng = np.random.default_rng(0)
        colour = colour + rng.normal(0.0, noise_sigma, colour.shape)

    img = Raster.from_float(colour)

    model_corners = spec.corner_points()
    rel = model_corners - np.array([mcx, mcy])
    rot = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    corners = (rel * scale) @ rot.T + np.array([cx, cy])
    return RenderedChart(image=img, corners=corners, patch_rgb=patch_rgb)
