"""Binary morphology with disc structuring elements, plus connected components.

Pixels outside the image count as background, so eroding a full mask strips a
border ring of the structuring-element radius.
"""
from __future__ import annotations

import numpy as np

from .types import BinaryMask, LabelMap

_DIRECT_SHIFT_MAX_RADIUS = 4  # beyond this an FFT correlation is cheaper


def disc_offsets(radius: int) -> np.ndarray:
    """(dy, dx) offsets of the disc {d : |d| <= radius}."""
    r = int(radius)
    dy, dx = np.mgrid[-r : r + 1, -r : r + 1]
    keep = dy * dy + dx * dx <= r * r
    return np.stack([dy[keep], dx[keep]], axis=1)


def _neighbour_counts(mask: np.ndarray, radius: int) -> np.ndarray:
    """Per pixel, number of foreground pixels within the disc (zero padding)."""
    if radius <= _DIRECT_SHIFT_MAX_RADIUS:
        h, w = mask.shape
        counts = np.zeros((h, w), dtype=np.int32)
        for dy, dx in disc_offsets(radius):
            ys = slice(max(0, -dy), h - max(0, dy))
            xs = slice(max(0, -dx), w - max(0, dx))
            yd = slice(max(0, dy), h + min(0, dy))
            xd = slice(max(0, dx), w + min(0, dx))
            counts[ys, xs] += mask[yd, xd]
        return counts
    return _fft_counts(mask, radius)


def _fft_counts(mask: np.ndarray, radius: int) -> np.ndarray:
    h, w = mask.shape
    k = 2 * radius + 1
    dy, dx = np.mgrid[-radius : radius + 1, -radius : radius + 1]
    kernel = (dy * dy + dx * dx <= radius * radius).astype(np.float64)
    sh, sw = h + k - 1, w + k - 1
    fa = np.fft.rfft2(mask.astype(np.float64), (sh, sw))
    fk = np.fft.rfft2(kernel, (sh, sw))
    full = np.fft.irfft2(fa * fk, (sh, sw))
    same = full[radius : radius + h, radius : radius + w]
    return np.rint(same).astype(np.int32)  # counts are integers; kill FFT noise


def erode(m: BinaryMask, radius: int) -> BinaryMask:
    n = len(disc_offsets(radius))
    return BinaryMask(_neighbour_counts(m.data, radius) >= n)


def dilate(m: BinaryMask, radius: int) -> BinaryMask:
    return BinaryMask(_neighbour_counts(m.data, radius) > 0)


def binary_open(m: BinaryMask, radius: int) -> BinaryMask:
    return dilate(erode(m, radius), radius)


def reconstruct(m: BinaryMask, marker: BinaryMask) -> BinaryMask:
    """Geodesic dilation of ``marker & m`` under ``m`` to stability: the union
    of 8-connected components of ``m`` that intersect the marker."""
    seed = marker.data & m.data
    if not seed.any():
        return BinaryMask(np.zeros_like(m.data))
    labels = connected_components(m, connectivity=8).data
    keep = np.unique(labels[seed])
    keep = keep[keep > 0]
    return BinaryMask(np.isin(labels, keep))


def morphology(
    m: BinaryMask,
    kind: str,
    se_radius: int = 1,
    marker: BinaryMask | None = None,
) -> BinaryMask:
    """Dispatch by kind: erode | dilate | open | reconstruct."""
    if kind == "erode":
        return erode(m, se_radius)
    if kind == "dilate":
        return dilate(m, se_radius)
    if kind == "open":
        return binary_open(m, se_radius)
    if kind == "reconstruct":
        if marker is None:
            raise ValueError("reconstruct requires a marker mask")
        return reconstruct(m, marker)
    raise ValueError(f"unknown morphology kind: {kind!r}")


def fill_holes(m: BinaryMask) -> BinaryMask:
    """Fill background regions not connected to the image border (4-conn)."""
    bg = BinaryMask(~m.data)
    labels = connected_components(bg, connectivity=4).data
    border = np.concatenate(
        [labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]]
    )
    outside = np.unique(border[border > 0])
    holes = (labels > 0) & ~np.isin(labels, outside)
    return BinaryMask(m.data | holes)


def connected_components(m: BinaryMask, connectivity: int = 4) -> LabelMap:
    """Label maximal connected foreground regions 1..N (row-major discovery
    order); background stays 0."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    mask = m.data
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if not mask.any():
        return LabelMap(labels)

    # Row-run encoding: a run is a maximal horizontal strip of foreground.
    padded = np.pad(mask, ((0, 0), (1, 1)))
    diff = padded[:, 1:].astype(np.int8) - padded[:, :-1].astype(np.int8)
    srow, scol = np.nonzero(diff == 1)
    erow, ecol = np.nonzero(diff == -1)  # exclusive end columns
    assert np.array_equal(srow, erow)

    n_runs = len(srow)
    parent = np.arange(n_runs)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    row_start = np.searchsorted(srow, np.arange(h + 1))
    slack = 0 if connectivity == 4 else 1
    for r in range(1, h):
        a, b = row_start[r], row_start[r + 1]
        if a == b:
            continue
        pa, pb = row_start[r - 1], row_start[r]
        p = pa
        for i in range(a, b):
            lo, hi = scol[i], ecol[i]
            while p < pb and ecol[p] + slack <= lo:
                p += 1
            q = p
            while q < pb and scol[q] < hi + slack:
                ra, rb = find(i), find(q)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
                q += 1
            if q > p:
                p = q - 1  # last unioned run may also touch the next run

    roots = np.array([find(i) for i in range(n_runs)])
    # Dense labels in order of first appearance (row-major).
    order: dict[int, int] = {}
    run_label = np.empty(n_runs, dtype=np.int32)
    for i in range(n_runs):
        r = roots[i]
        if r not in order:
            order[r] = len(order) + 1
        run_label[i] = order[r]
    for i in range(n_runs):
        labels[srow[i], scol[i] : ecol[i]] = run_label[i]
    return LabelMap(labels)
