"""Raster containers used throughout the pipeline.

All containers are thin immutable wrappers over numpy arrays.  Raster holds
8-bit samples; Plane holds float64 samples (in [0, 1] unless an operation
documents otherwise); BinaryMask and LabelMap annotate a raster of the same
dimensions.  Arrays are marked read-only on construction so instances can be
shared freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Raster:
    """8-bit image, shape (h, w) for 1 channel or (h, w, 3) for colour."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.dtype != np.uint8:
            raise ValueError("Raster samples must be uint8")
        if a.ndim == 2:
            pass
        elif a.ndim == 3 and a.shape[2] == 3:
            pass
        else:
            raise ValueError(f"Raster shape must be (h,w) or (h,w,3), got {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("Raster must be at least 1x1")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.data.ndim == 2 else 3

    def as_float(self) -> np.ndarray:
        """Samples scaled to [0, 1] float64."""
        return self.data.astype(np.float64) / 255.0

    @staticmethod
    def from_float(a: np.ndarray) -> "Raster":
        """Quantise [0, 1] floats to 8 bits with round-half-up."""
        a = np.clip(np.asarray(a, dtype=np.float64), 0.0, 1.0)
        return Raster(np.floor(a * 255.0 + 0.5).astype(np.uint8))


@dataclass(frozen=True)
class Plane:
    """Single-channel float64 image; finite values, no NaN/inf."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError(f"Plane shape must be (h,w), got {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("Plane must be at least 1x1")
        if not np.all(np.isfinite(a)):
            raise ValueError("Plane samples must be finite")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class BinaryMask:
    """Boolean mask with the dimensions of the raster it annotates."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.dtype != np.bool_:
            a = a.astype(bool)
        if a.ndim != 2:
            raise ValueError(f"BinaryMask shape must be (h,w), got {a.shape}")
        object.__setattr__(self, "data", _freeze(a))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def count(self) -> int:
        return int(self.data.sum())


@dataclass(frozen=True)
class LabelMap:
    """Non-negative integer labels per pixel; 0 marks unlabelled pixels."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError("LabelMap labels must be integers")
        if a.ndim != 2:
            raise ValueError(f"LabelMap shape must be (h,w), got {a.shape}")
        if a.min(initial=0) < 0:
            raise ValueError("LabelMap labels must be non-negative")
        object.__setattr__(self, "data", _freeze(a.astype(np.int32)))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def labels(self) -> np.ndarray:
        """Distinct nonzero labels, ascending."""
        u = np.unique(self.data)
        return u[u > 0]


GLCM_LEVELS = 8
GLCM_ANGLES = (0, 45, 90, 135)
# (row, col) step towards the neighbour of each orientation.
GLCM_OFFSETS = {0: (0, 1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}


@dataclass(frozen=True)
class GreyCooccurrence:
    """Normalised co-occurrence counts of quantised grey pairs.

    ``cells`` sums to 1 when at least one valid pair exists, otherwise the
    matrix is all-zero and ``empty`` is True.
    """

    cells: np.ndarray
    angle: int
    levels: int = GLCM_LEVELS
    distance: int = 1

    def __post_init__(self):
        a = np.asarray(self.cells, dtype=np.float64)
        if a.shape != (self.levels, self.levels):
            raise ValueError("cells must be levels x levels")
        if self.angle not in GLCM_ANGLES:
            raise ValueError(f"angle must be one of {GLCM_ANGLES}")
        if np.any(a < 0):
            raise ValueError("cells must be non-negative")
        total = a.sum()
        if total != 0.0 and abs(total - 1.0) > 1e-9:
            raise ValueError("cells must sum to 1 (or be all zero)")
        object.__setattr__(self, "cells", _freeze(a))

    @property
    def empty(self) -> bool:
        return float(self.cells.sum()) == 0.0


@dataclass(frozen=True, order=True)
class LineParam:
    """Line in normal form: rho = x*cos(theta) + y*sin(theta), theta in degrees."""

    rho: float = field(compare=False)
    theta: float = field(compare=False)
    score: int = field(compare=False, default=0)
