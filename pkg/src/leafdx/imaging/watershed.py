"""Marker-controlled watershed by immersion (priority flooding).

Every pixel ends up with the label of exactly one marker; ridge pixels go to
whichever region floods them first, so the output is a full partition.  The
flood order is deterministic: the queue orders by (gradient value, insertion
order) and neighbours are visited N, W, E, S from row-major seeds.

The inner loop is JIT-compiled with numba when available; a pure-Python
fallback implements the identical algorithm.
"""
from __future__ import annotations

import heapq

import numpy as np

from .types import LabelMap, Plane

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*a, **k):
        def deco(f):
            return f

        return deco


def watershed(grad: Plane, markers: LabelMap, force_python: bool = False) -> LabelMap:
    """Flood ``grad`` from ``markers``; marker pixels keep their labels."""
    if grad.data.shape != markers.data.shape:
        raise ValueError("gradient and marker dimensions must match")
    if not (markers.data > 0).any():
        raise ValueError("markers contain no nonzero label")
    labels = markers.data.astype(np.int32).copy()
    if _HAVE_NUMBA and not force_python:
        _flood_numba(grad.data, labels)
    else:
        _flood_python(grad.data, labels)
    return LabelMap(labels)


_NEIGHBOURS = ((-1, 0), (0, -1), (0, 1), (1, 0))


def _flood_python(grad: np.ndarray, labels: np.ndarray) -> None:
    h, w = grad.shape
    heap: list[tuple[float, int, int, int, int]] = []
    counter = 0
    seeds = np.argwhere(labels > 0)
    for y, x in seeds:
        lab = int(labels[y, x])
        for dy, dx in _NEIGHBOURS:
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and labels[ny, nx] == 0:
                heapq.heappush(heap, (grad[ny, nx], counter, ny, nx, lab))
                counter += 1
    while heap:
        _, _, y, x, lab = heapq.heappop(heap)
        if labels[y, x] != 0:
            continue
        labels[y, x] = lab
        for dy, dx in _NEIGHBOURS:
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and labels[ny, nx] == 0:
                heapq.heappush(heap, (grad[ny, nx], counter, ny, nx, lab))
                counter += 1


@njit(cache=True)
def _flood_numba(grad, labels):  # pragma: no cover - exercised via watershed()
    h, w = grad.shape
    cap = 4 * h * w + 8
    hp = np.empty(cap, np.float64)  # priority (gradient at queued pixel)
    ho = np.empty(cap, np.int64)  # insertion order, breaks priority ties
    hx = np.empty(cap, np.int64)  # flat pixel index
    hl = np.empty(cap, np.int32)  # candidate label
    n = 0
    counter = 0

    # Seed with the unlabelled 4-neighbours of every marker pixel.
    for y in range(h):
        for x in range(w):
            lab = labels[y, x]
            if lab <= 0:
                continue
            for k in range(4):
                ny = y + (-1 if k == 0 else (1 if k == 3 else 0))
                nx = x + (-1 if k == 1 else (1 if k == 2 else 0))
                if 0 <= ny < h and 0 <= nx < w and labels[ny, nx] == 0:
                    # push
                    i = n
                    hp[i] = grad[ny, nx]
                    ho[i] = counter
                    hx[i] = ny * w + nx
                    hl[i] = lab
                    counter += 1
                    n += 1
                    while i > 0:
                        p = (i - 1) // 2
                        if hp[i] < hp[p] or (hp[i] == hp[p] and ho[i] < ho[p]):
                            hp[i], hp[p] = hp[p], hp[i]
                            ho[i], ho[p] = ho[p], ho[i]
                            hx[i], hx[p] = hx[p], hx[i]
                            hl[i], hl[p] = hl[p], hl[i]
                            i = p
                        else:
                            break

    while n > 0:
        pix = hx[0]
        lab = hl[0]
        # pop: move last to root and sift down
        n -= 1
        hp[0] = hp[n]
        ho[0] = ho[n]
        hx[0] = hx[n]
        hl[0] = hl[n]
        i = 0
        while True:
            l, r = 2 * i + 1, 2 * i + 2
            s = i
            if l < n and (hp[l] < hp[s] or (hp[l] == hp[s] and ho[l] < ho[s])):
                s = l
            if r < n and (hp[r] < hp[s] or (hp[r] == hp[s] and ho[r] < ho[s])):
                s = r
            if s == i:
                break
            hp[i], hp[s] = hp[s], hp[i]
            ho[i], ho[s] = ho[s], ho[i]
            hx[i], hx[s] = hx[s], hx[i]
            hl[i], hl[s] = hl[s], hl[i]
            i = s

        y = pix // w
        x = pix % w
        if labels[y, x] != 0:
            continue
        labels[y, x] = lab
        for k in range(4):
            ny = y + (-1 if k == 0 else (1 if k == 3 else 0))
            nx = x + (-1 if k == 1 else (1 if k == 2 else 0))
            if 0 <= ny < h and 0 <= nx < w and labels[ny, nx] == 0:
                i = n
                hp[i] = grad[ny, nx]
                ho[i] = counter
                hx[i] = ny * w + nx
                hl[i] = lab
                counter += 1
                n += 1
                while i > 0:
                    p = (i - 1) // 2
                    if hp[i] < hp[p] or (hp[i] == hp[p] and ho[i] < ho[p]):
                        hp[i], hp[p] = hp[p], hp[i]
                        ho[i], ho[p] = ho[p], ho[i]
                        hx[i], hx[p] = hx[p], hx[i]
                        hl[i], hl[p] = hl[p], hl[i]
                        i = p
                    else:
                        break
