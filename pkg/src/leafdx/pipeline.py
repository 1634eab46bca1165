"""End-to-end diagnosis: resize, optional colour correction and denoise, leaf
extraction, lesion tiling, per-patch classification, aggregation, severity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import ColourTransform, apply_transform
from .catalog import DiseaseCatalog
from .errors import InsufficientBackgroundError, MalformedFileError, VersionMismatchError
from .features import assemble, elliptical_mask
from .imaging import Plane, Raster, mean_filter, resize_max_side
from .lesions import LesionPatch, build_affected_mask, compute_severity, tile_patches
from .segmentation import (
    LeafSegment,
    StrokeSet,
    border_ring_marker,
    extract_leaf,
    scale_strokes,
    strokes_to_marker,
    synthesize_background_marker,
)
from .svm import SvmModel, predict_proba_batch

REPORT_FORMAT = "leafdx-diagnosis-report"
REPORT_VERSION = 1

RESIZE_LIMIT = 600
SMALL_AREA_PENALTY = 0.5


@dataclass(frozen=True)
class PipelineOptions:
    denoise_radius: int = 0  # 0 disables the mean filter
    transform: ColourTransform | None = None
    small_area_penalty: float = SMALL_AREA_PENALTY
    resize_limit: int = RESIZE_LIMIT


@dataclass(frozen=True)
class DiagnosisReport:
    class_names: tuple[str, ...]
    ranked: tuple[tuple[int, float], ...]  # (disease id, probability), descending
    per_patch: tuple[dict, ...]  # {x, y, w, h, large, probabilities}
    severity: float
    leaf_bbox: tuple[int, int, int, int]
    leaf_area: int
    leaf_orientation: float
    any_large_region: bool
    no_lesions_found: bool

    def top(self, n: int = 3) -> tuple[tuple[int, float], ...]:
        return self.ranked[:n]


def aggregate(
    per_patch: list[np.ndarray],
    flags: list[bool],
    catalog: DiseaseCatalog,
    small_area_penalty: float = SMALL_AREA_PENALTY,
) -> tuple[np.ndarray, bool]:
    """Mean of the patch probability vectors; when any patch came from an
    oversized region, small-area diseases are penalised and the vector is
    renormalised."""
    if len(per_patch) == 0:
        raise ValueError("aggregate needs at least one patch vector")
    if len(per_patch) != len(flags):
        raise ValueError("one flag per patch vector required")
    p = np.mean(np.asarray(per_patch, dtype=np.float64), axis=0)
    any_large = bool(any(flags))
    if any_large:
        p = p.copy()
        for i in catalog.small_area_ids():
            p[i] *= small_area_penalty
        p = p / p.sum()
    return p, any_large


def rank_probabilities(p: np.ndarray) -> tuple[tuple[int, float], ...]:
    """Descending by probability; ties broken by the smaller disease id."""
    order = sorted(range(len(p)), key=lambda i: (-p[i], i))
    return tuple((int(i), float(p[i])) for i in order)


def rank_and_describe(p: np.ndarray, catalog: DiseaseCatalog) -> list[dict]:
    """Ranked list with catalog text attached; one entry per disease."""
    if len(p) != len(catalog):
        raise ValueError("probability vector and catalog disagree")
    out = []
    for disease_id, prob in rank_probabilities(p):
        e = catalog.by_id(disease_id)
        out.append(
            {
                "disease_id": e.id,
                "name": e.name,
                "probability": prob,
                "symptoms": e.symptoms,
                "management": e.management,
                "reference_image": e.reference_image,
            }
        )
    return out


def _check_consistency(model: SvmModel, catalog: DiseaseCatalog) -> None:
    if model.n_classes != len(catalog):
        raise ValueError("model and catalog class counts differ")
    if tuple(model.class_names) != catalog.names():
        raise ValueError("model class names do not match the catalog")


def patch_features(img: Raster, patch: LesionPatch) -> np.ndarray:
    window = Raster(img.data[patch.y : patch.y + patch.h, patch.x : patch.x + patch.w])
    return assemble(window, elliptical_mask(patch.h, patch.w))


def _denoise(img: Raster, radius: int) -> Raster:
    f = img.as_float()
    out = np.stack(
        [mean_filter(Plane(f[..., c]), radius).data for c in range(3)], axis=-1
    )
    return Raster.from_float(out)


def prepare_image(img: Raster, strokes: StrokeSet, opts: PipelineOptions) -> tuple[Raster, StrokeSet]:
    """Resize (with strokes following), optional colour correction and denoise."""
    resized = resize_max_side(img, opts.resize_limit)
    if resized is not img:
        strokes = scale_strokes(strokes, max(resized.height, resized.width) / max(img.height, img.width))
    img = resized
    if opts.transform is not None:
        img = apply_transform(img, opts.transform)
    if opts.denoise_radius > 0:
        img = _denoise(img, opts.denoise_radius)
    return img, strokes


def segment_leaf(img: Raster, strokes: StrokeSet) -> LeafSegment:
    """Markers from strokes plus synthesised (or border-ring) background."""
    user = strokes_to_marker(strokes, (img.height, img.width))
    try:
        markers = synthesize_background_marker(img, user)
    except InsufficientBackgroundError:
        markers = border_ring_marker(user)
    return extract_leaf(img, markers)


def diagnose_leaf(
    img: Raster,
    leaf: LeafSegment,
    model: SvmModel,
    catalog: DiseaseCatalog,
    opts: PipelineOptions = PipelineOptions(),
) -> DiagnosisReport:
    """Classification stage on an already-extracted leaf."""
    _check_consistency(model, catalog)
    lesion_map = build_affected_mask(img, leaf)
    patches = tile_patches(lesion_map)
    k = model.n_classes
    if not patches:
        uniform = np.full(k, 1.0 / k)
        return DiagnosisReport(
            class_names=tuple(model.class_names),
            ranked=rank_probabilities(uniform),
            per_patch=(),
            severity=0.0,
            leaf_bbox=leaf.bbox,
            leaf_area=leaf.area,
            leaf_orientation=leaf.orientation,
            any_large_region=False,
            no_lesions_found=True,
        )
    feats = np.stack([patch_features(img, p) for p in patches])
    probs = predict_proba_batch(model, feats)
    flags = [p.large_region_label for p in patches]
    combined, any_large = aggregate(list(probs), flags, catalog, opts.small_area_penalty)
    per_patch = tuple(
        {
            "x": p.x,
            "y": p.y,
            "w": p.w,
            "h": p.h,
            "large": p.large_region_label,
            "probabilities": [float(v) for v in prob],
        }
        for p, prob in zip(patches, probs)
    )
    return DiagnosisReport(
        class_names=tuple(model.class_names),
        ranked=rank_probabilities(combined),
        per_patch=per_patch,
        severity=compute_severity(lesion_map, leaf),
        leaf_bbox=leaf.bbox,
        leaf_area=leaf.area,
        leaf_orientation=leaf.orientation,
        any_large_region=any_large,
        no_lesions_found=False,
    )


def run_pipeline(
    img: Raster,
    strokes: StrokeSet,
    model: SvmModel,
    catalog: DiseaseCatalog,
    opts: PipelineOptions = PipelineOptions(),
) -> DiagnosisReport:
    """The one-click path: prepare, extract the leaf, classify, aggregate."""
    _check_consistency(model, catalog)
    img, strokes = prepare_image(img, strokes, opts)
    leaf = segment_leaf(img, strokes)
    return diagnose_leaf(img, leaf, model, catalog, opts)


def reselect_patch(
    img: Raster,
    leaf: LeafSegment,
    corner_a: tuple[float, float],
    corner_b: tuple[float, float],
    model: SvmModel,
    catalog: DiseaseCatalog,
) -> np.ndarray:
    """Probability vector for a manually selected rectangle (two opposite
    corners), clamped to the 10..25 px patch size about its centre."""
    _check_consistency(model, catalog)
    (xa, ya), (xb, yb) = corner_a, corner_b
    w = abs(xb - xa)
    h = abs(yb - ya)
    if round(w) < 1 or round(h) < 1:
        raise ValueError("degenerate selection rectangle")
    cx = (xa + xb) / 2.0
    cy = (ya + yb) / 2.0
    w = int(np.clip(round(w), 10, 25))
    h = int(np.clip(round(h), 10, 25))
    w = min(w, img.width)
    h = min(h, img.height)
    x = int(np.clip(round(cx - w / 2.0), 0, img.width - w))
    y = int(np.clip(round(cy - h / 2.0), 0, img.height - h))
    patch = LesionPatch(x=x, y=y, w=w, h=h, large_region_label=False, source_component=0)
    feats = patch_features(img, patch)
    return predict_proba_batch(model, feats[None, :])[0]


# -- report persistence ------------------------------------------------------


def report_to_dict(r: DiagnosisReport) -> dict:
    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "class_names": list(r.class_names),
        "ranked": [[i, p] for i, p in r.ranked],
        "per_patch": [dict(p) for p in r.per_patch],
        "severity": r.severity,
        "leaf": {
            "bbox": list(r.leaf_bbox),
            "area": r.leaf_area,
            "orientation": r.leaf_orientation,
        },
        "any_large_region": r.any_large_region,
        "no_lesions_found": r.no_lesions_found,
    }


def report_from_dict(d: dict) -> DiagnosisReport:
    try:
        if d.get("format") != REPORT_FORMAT:
            raise MalformedFileError("not a diagnosis report")
        if d.get("version") != REPORT_VERSION:
            raise VersionMismatchError(f"unsupported report version: {d.get('version')!r}")
        return DiagnosisReport(
            class_names=tuple(str(n) for n in d["class_names"]),
            ranked=tuple((int(i), float(p)) for i, p in d["ranked"]),
            per_patch=tuple(dict(p) for p in d["per_patch"]),
            severity=float(d["severity"]),
            leaf_bbox=tuple(int(v) for v in d["leaf"]["bbox"]),
            leaf_area=int(d["leaf"]["area"]),
            leaf_orientation=float(d["leaf"]["orientation"]),
            any_large_region=bool(d["any_large_region"]),
            no_lesions_found=bool(d["no_lesions_found"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad report: {e}") from e


def report_to_json(r: DiagnosisReport) -> str:
    """Canonical rendering: byte-identical for identical reports."""
    return json.dumps(report_to_dict(r), sort_keys=True, separators=(",", ":"))


def save_report(r: DiagnosisReport, path: str | Path) -> None:
    Path(path).write_text(report_to_json(r))


def load_report(path: str | Path) -> DiagnosisReport:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad report: {e}") from e
    return report_from_dict(d)
