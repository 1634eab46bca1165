"""Grey-level co-occurrence matrices and their summary statistics."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .types import GLCM_OFFSETS, BinaryMask, GreyCooccurrence, Plane


def quantise(p: Plane, levels: int) -> np.ndarray:
    """Uniform bins over [0, 1]; 1.0 falls in the top bin."""
    return np.minimum((p.data * levels).astype(np.int32), levels - 1)


def glcm(
    p: Plane,
    mask: BinaryMask | None,
    angle: int,
    levels: int = 8,
    distance: int = 1,
) -> GreyCooccurrence:
    """Co-occurrence of quantised values between each pixel and its neighbour
    at the given angle/distance.  Ordered pairs are counted only when both
    pixels are inside the mask; counts are normalised to sum 1.  With no valid
    pair the matrix is all-zero (``empty`` flag set).
    """
    data = p.data
    if data.min() < 0.0 or data.max() > 1.0:
        raise ValueError("plane values must lie in [0, 1]")
    if angle not in GLCM_OFFSETS:
        raise ValueError(f"angle must be one of {tuple(GLCM_OFFSETS)}")
    h, w = data.shape
    msk = np.ones((h, w), dtype=bool) if mask is None else mask.data
    if msk.shape != data.shape:
        raise ValueError("mask dimensions must match the plane")

    q = quantise(p, levels)
    dr, dc = GLCM_OFFSETS[angle]
    dr, dc = dr * distance, dc * distance
    src_r = slice(max(0, -dr), h - max(0, dr))
    src_c = slice(max(0, -dc), w - max(0, dc))
    dst_r = slice(max(0, dr), h + min(0, dr))
    dst_c = slice(max(0, dc), w + min(0, dc))

    valid = msk[src_r, src_c] & msk[dst_r, dst_c]
    a = q[src_r, src_c][valid]
    b = q[dst_r, dst_c][valid]
    counts = np.bincount(a * levels + b, minlength=levels * levels).astype(np.float64)
    total = counts.sum()
    cells = counts / total if total > 0 else counts
    return GreyCooccurrence(cells.reshape(levels, levels), angle=angle, levels=levels, distance=distance)


class GlcmStats(NamedTuple):
    contrast: float
    correlation: float
    energy: float
    homogeneity: float
    entropy: float


def glcm_stats(g: GreyCooccurrence) -> GlcmStats:
    """Contrast, correlation, energy, homogeneity and entropy (bits).

    Correlation is 0 whenever either marginal standard deviation vanishes;
    an all-zero matrix yields all-zero stats.
    """
    cells = g.cells
    if cells.sum() == 0.0:
        return GlcmStats(0.0, 0.0, 0.0, 0.0, 0.0)
    n = g.levels
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    diff = i - j

    contrast = float((diff.astype(np.float64) ** 2 * cells).sum())
    energy = float((cells**2).sum())
    homogeneity = float((cells / (1.0 + np.abs(diff))).sum())
    nz = cells[cells > 0]
    entropy = float(-(nz * np.log2(nz)).sum())

    mu_i = float((i * cells).sum())
    mu_j = float((j * cells).sum())
    var_i = float(((i - mu_i) ** 2 * cells).sum())
    var_j = float(((j - mu_j) ** 2 * cells).sum())
    if var_i <= 1e-24 or var_j <= 1e-24:
        correlation = 0.0
    else:
        correlation = float(
            (((i - mu_i) * (j - mu_j) * cells).sum()) / np.sqrt(var_i * var_j)
        )
    return GlcmStats(contrast, correlation, energy, homogeneity, entropy)
