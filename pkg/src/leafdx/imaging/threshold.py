"""Histogram thresholding."""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateHistogramError
from .types import Plane

HIST_BINS = 256


def histogram256(p: Plane) -> np.ndarray:
    """256-bin histogram of a [0, 1] plane; 1.0 lands in the top bin."""
    bins = np.clip((p.data * HIST_BINS).astype(np.int32), 0, HIST_BINS - 1)
    return np.bincount(bins.ravel(), minlength=HIST_BINS).astype(np.int64)


def otsu_from_histogram(hist: np.ndarray) -> int:
    """Bin index k maximising between-class variance of the split
    (bins <= k | bins > k); ties resolved towards the smallest k.
    """
    hist = np.asarray(hist, dtype=np.float64)
    total = hist.sum()
    if total <= 0 or np.count_nonzero(hist) < 2:
        raise DegenerateHistogramError("histogram has fewer than two occupied bins")
    idx = np.arange(len(hist))
    w0 = np.cumsum(hist)
    m0 = np.cumsum(hist * idx)
    w1 = total - w0
    mean_total = m0[-1]
    # Between-class variance w0*w1*(mu0-mu1)^2, zero where a class is empty.
    valid = (w0 > 0) & (w1 > 0)
    mu0 = np.where(w0 > 0, m0 / np.where(w0 > 0, w0, 1.0), 0.0)
    mu1 = np.where(w1 > 0, (mean_total - m0) / np.where(w1 > 0, w1, 1.0), 0.0)
    var_b = np.where(valid, w0 * w1 * (mu0 - mu1) ** 2, 0.0)
    return int(np.argmax(var_b))  # argmax returns the first (smallest) maximiser


def otsu_threshold(p: Plane) -> float:
    """Otsu cut as a value in [0, 1]: pixels with value < threshold fall in
    the lower class.

    Raises DegenerateHistogramError for constant planes; the caller decides
    on a fallback.
    """
    k = otsu_from_histogram(histogram256(p))
    return (k + 1) / HIST_BINS


def threshold_mask(p: Plane, t: float) -> np.ndarray:
    """Boolean array of pixels in the lower class (value < t)."""
    return p.data < t
