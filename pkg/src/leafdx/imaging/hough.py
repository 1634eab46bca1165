"""Straight-line detection on binary masks via a (rho, theta) accumulator.

Parameterisation: rho = x*cos(theta) + y*sin(theta) with x = column,
y = row, theta in degrees within [0, 180).  Rho resolution is 1 px.
"""
from __future__ import annotations

import numpy as np

from .types import BinaryMask, LineParam

NMS_WINDOW = 5  # accumulator cells, per side: suppress within Chebyshev 2


def _theta_values(theta_step: float, theta_range: tuple[float, float] | None) -> np.ndarray:
    thetas = np.arange(0.0, 180.0, theta_step)
    if theta_range is None:
        return thetas
    lo, hi = theta_range
    lo %= 180.0
    hi %= 180.0
    if lo <= hi:
        keep = (thetas >= lo) & (thetas <= hi)
    else:  # wrapped interval, e.g. (170, 10)
        keep = (thetas >= lo) | (thetas <= hi)
    return thetas[keep]


def hough_lines(
    m: BinaryMask,
    theta_step: float = 1.0,
    min_votes: int = 1,
    theta_range: tuple[float, float] | None = None,
) -> list[LineParam]:
    """Accumulator peaks with at least ``min_votes``, non-maximum suppressed
    in a 5x5 accumulator neighbourhood, strongest first.

    ``theta_range`` restricts angles; (lo, hi) with lo > hi wraps around 180.
    """
    if theta_step <= 0:
        raise ValueError("theta_step must be positive")
    ys, xs = np.nonzero(m.data)
    if len(ys) == 0:
        return []
    thetas = _theta_values(theta_step, theta_range)
    if len(thetas) == 0:
        return []
    rad = np.deg2rad(thetas)
    cos_t, sin_t = np.cos(rad), np.sin(rad)

    diag = int(np.ceil(np.hypot(m.height - 1, m.width - 1)))
    n_rho = 2 * diag + 1
    acc = np.zeros((len(thetas), n_rho), dtype=np.int64)
    for ti in range(len(thetas)):
        rho = np.rint(xs * cos_t[ti] + ys * sin_t[ti]).astype(np.int64) + diag
        acc[ti] = np.bincount(rho, minlength=n_rho)

    cand = np.argwhere(acc >= min_votes)
    if len(cand) == 0:
        return []
    scores = acc[cand[:, 0], cand[:, 1]]
    # Strongest first; ties by |rho|, then theta, then positive rho, so the
    # canonical representative of a wrap-duplicated line comes first.
    rho_signed = cand[:, 1] - diag
    order = np.lexsort((-rho_signed, cand[:, 0], np.abs(rho_signed), -scores))
    cand = cand[order]
    scores = scores[order]

    radius = NMS_WINDOW // 2

    def same_peak(ta: float, ra: float, tb: float, rb: float) -> bool:
        # 5x5 accumulator window, treating (rho, theta) and (-rho, theta±180)
        # as the same line so near-vertical peaks are not duplicated.
        dt = abs(ta - tb)
        if dt <= radius * theta_step + 1e-9 and abs(ra - rb) <= radius:
            return True
        return 180.0 - dt <= radius * theta_step + 1e-9 and abs(ra + rb) <= radius

    kept: list[tuple[float, float, int]] = []
    for (ti, ri), s in zip(cand, scores):
        theta = float(thetas[ti])
        rho = float(ri - diag)
        if not any(same_peak(theta, rho, kt, kr) for kt, kr, _ in kept):
            kept.append((theta, rho, int(s)))
    return [LineParam(rho=r, theta=t, score=s) for t, r, s in kept]


def line_intersection(a: LineParam, b: LineParam) -> tuple[float, float] | None:
    """(x, y) meeting point of two lines, or None when near-parallel."""
    ta, tb = np.deg2rad(a.theta), np.deg2rad(b.theta)
    mat = np.array([[np.cos(ta), np.sin(ta)], [np.cos(tb), np.sin(tb)]])
    det = np.linalg.det(mat)
    if abs(det) < 1e-9:
        return None
    x, y = np.linalg.solve(mat, np.array([a.rho, b.rho]))
    return float(x), float(y)


def point_line_distance(xs: np.ndarray, ys: np.ndarray, line: LineParam) -> np.ndarray:
    """Unsigned distances of points to the line."""
    t = np.deg2rad(line.theta)
    return np.abs(xs * np.cos(t) + ys * np.sin(t) - line.rho)
