"""Weighted least-squares colour standardisation.

Patch weights favour the chart colours most common in the scene, so the fit
spends its accuracy where the photo actually lives (greens and browns in
foliage shots).  The transform maps source RGB through a linear [R,G,B,1] or
quadratic [R,G,B,R2,G2,B2,RG,RB,GB,1] design and is applied per pixel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegeneratePatchSetError, MalformedFileError, VersionMismatchError
from ..imaging import Raster
from .chart import ChartSpec
from .detect import ChartDetection, chart_region_mask

TRANSFORM_FORMAT = "leafdx-colour-transform"
TRANSFORM_VERSION = 1

WEIGHT_FLOOR = 1.0 / 240.0  # every patch keeps influence on the fit

QUADRATIC_TERMS = ("R", "G", "B", "R2", "G2", "B2", "RG", "RB", "GB", "1")
LINEAR_TERMS = ("R", "G", "B", "1")


@dataclass(frozen=True)
class PatchWeights:
    w: np.ndarray  # 24 non-negative reals

    def __post_init__(self):
        a = np.asarray(self.w, dtype=np.float64)
        if a.shape != (24,):
            raise ValueError("weights must have length 24")
        if np.any(a < 0) or a.sum() <= 0:
            raise ValueError("weights must be non-negative with positive sum")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "w", a)


def uniform_weights() -> PatchWeights:
    return PatchWeights(np.full(24, 1.0 / 24.0 + WEIGHT_FLOOR))


def compute_patch_weights(
    img: Raster, detection: ChartDetection, spec: ChartSpec | None = None
) -> PatchWeights:
    """Fraction of non-chart pixels nearest (in RGB) to each patch, plus a
    small floor so no patch loses influence entirely."""
    from .chart import default_chart_spec

    spec = spec or default_chart_spec()
    exclude = chart_region_mask(img, detection, spec).data
    pixels = img.as_float().reshape(-1, 3)[~exclude.ravel()]
    counts = np.zeros(24)
    if len(pixels):
        # nearest patch by squared Euclidean distance in RGB
        d2 = ((pixels[:, None, :] - detection.patch_values[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argmin(d2, axis=1)
        counts = np.bincount(nearest, minlength=24).astype(np.float64)
        counts /= counts.sum()
    return PatchWeights(counts + WEIGHT_FLOOR)


def design_matrix(rgb: np.ndarray, kind: str) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[:, 0], rgb[:, 1], rgb[:, 2]
    ones = np.ones_like(r)
    if kind == "linear":
        return np.stack([r, g, b, ones], axis=1)
    if kind == "quadratic":
        return np.stack(
            [r, g, b, r * r, g * g, b * b, r * g, r * b, g * b, ones], axis=1
        )
    raise ValueError(f"unknown transform kind: {kind!r}")


@dataclass(frozen=True)
class ColourTransform:
    kind: str  # linear | quadratic
    matrix: np.ndarray  # 3x4 or 3x10, row per output channel
    fitted_weights: PatchWeights
    residual_rms: float

    def __post_init__(self):
        cols = {"linear": 4, "quadratic": 10}.get(self.kind)
        if cols is None:
            raise ValueError(f"unknown transform kind: {self.kind!r}")
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (3, cols):
            raise ValueError(f"matrix must be 3x{cols} for {self.kind}")
        if self.residual_rms < 0:
            raise ValueError("residual_rms must be non-negative")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def identity_transform(kind: str = "linear") -> ColourTransform:
    cols = {"linear": 4, "quadratic": 10}[kind]
    m = np.zeros((3, cols))
    m[:, :3] = np.eye(3)
    return ColourTransform(kind=kind, matrix=m, fitted_weights=uniform_weights(), residual_rms=0.0)


def fit_transform(
    source: np.ndarray,
    target: np.ndarray,
    weights: PatchWeights,
    kind: str = "linear",
) -> ColourTransform:
    """Matrix minimising the weighted squared residual over the 24 patches."""
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if source.shape != (24, 3) or target.shape != (24, 3):
        raise ValueError("source and target must both be 24x3")
    A = design_matrix(source, kind)
    sw = np.sqrt(weights.w)
    Aw = A * sw[:, None]
    Bw = target * sw[:, None]
    if np.linalg.matrix_rank(Aw) < A.shape[1]:
        raise DegeneratePatchSetError("patch design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(Aw, Bw, rcond=None)
    matrix = coef.T  # 3 x terms
    resid = A @ coef - target
    rms = float(np.sqrt((weights.w[:, None] * resid**2).sum() / (3.0 * weights.w.sum())))
    return ColourTransform(kind=kind, matrix=matrix, fitted_weights=weights, residual_rms=rms)


def apply_transform(img: Raster, t: ColourTransform) -> Raster:
    """Per-pixel mapping, clamped to [0, 1] and re-quantised to 8 bits."""
    if img.channels != 3:
        raise ValueError("colour transform requires a 3-channel raster")
    flat = img.as_float().reshape(-1, 3)
    mapped = design_matrix(flat, t.kind) @ t.matrix.T
    return Raster.from_float(mapped.reshape(img.height, img.width, 3))


# -- serialisation ---------------------------------------------------------


def transform_to_dict(t: ColourTransform) -> dict:
    return {
        "format": TRANSFORM_FORMAT,
        "version": TRANSFORM_VERSION,
        "kind": t.kind,
        "terms": list(LINEAR_TERMS if t.kind == "linear" else QUADRATIC_TERMS),
        "matrix": [list(row) for row in t.matrix],
        "weights": list(t.fitted_weights.w),
        "residual_rms": t.residual_rms,
    }


def transform_from_dict(d: dict) -> ColourTransform:
    try:
        if d.get("format") != TRANSFORM_FORMAT:
            raise MalformedFileError("not a colour transform file")
        if d.get("version") != TRANSFORM_VERSION:
            raise VersionMismatchError(f"unsupported transform version: {d.get('version')!r}")
        return ColourTransform(
            kind=d["kind"],
            matrix=np.array(d["matrix"], dtype=np.float64),
            fitted_weights=PatchWeights(np.array(d["weights"], dtype=np.float64)),
            residual_rms=float(d["residual_rms"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad colour transform: {e}") from e


def save_transform(t: ColourTransform, path: str | Path) -> None:
    Path(path).write_text(json.dumps(transform_to_dict(t), indent=2, sort_keys=True))


def load_transform(path: str | Path) -> ColourTransform:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad colour transform: {e}") from e
    return transform_from_dict(d)
