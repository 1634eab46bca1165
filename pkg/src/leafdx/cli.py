"""Command line interface: calibrate, train, diagnose, serve, plus helpers
for printing charts and generating demo datasets."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .calibration import (
    apply_transform,
    compute_patch_weights,
    default_chart_spec,
    detect_chart,
    fit_transform,
    load_chart_spec,
    load_transform,
    render_chart,
    save_transform,
)
from .catalog import default_catalog, load_catalog
from .features import FEATURE_COUNT, apply_scaling, assemble, elliptical_mask, fit_scaling
from .imaging import load_raster, save_raster
from .pipeline import PipelineOptions, run_pipeline, save_report
from .segmentation import load_strokes
from .svm import (
    DEFAULT_C_GRID,
    DEFAULT_FOLDS,
    DEFAULT_GAMMA_GRID,
    LabeledDataset,
    grid_search_cv,
    load_model,
    save_model,
    train_multiclass,
)

CV_REPORT_FORMAT = "leafdx-cv-report"
CV_REPORT_VERSION = 1


def _cmd_calibrate(args) -> int:
    img = load_raster(args.image)
    spec = load_chart_spec(args.chart) if args.chart else default_chart_spec()
    detection = detect_chart(img, spec)
    weights = compute_patch_weights(img, detection, spec)
    transform = fit_transform(detection.patch_values, spec.reference_array(), weights, args.kind)
    save_transform(transform, args.out_transform)
    print(f"fitted {args.kind} transform, weighted residual rms {transform.residual_rms:.6f}")
    if args.out_image:
        save_raster(apply_transform(img, transform), args.out_image)
        print(f"corrected image written to {args.out_image}")
    return 0


def _load_dataset_dir(root: Path):
    manifest = json.loads((root / "dataset.json").read_text())
    class_dirs = manifest["classes"]
    names = manifest.get("names", class_dirs)
    X, y = [], []
    for class_id, d in enumerate(class_dirs):
        for png in sorted((root / d).glob("*.png")):
            patch = load_raster(png)
            X.append(assemble(patch, elliptical_mask(patch.height, patch.width)))
            y.append(class_id)
    if not X:
        raise SystemExit(f"no patches found under {root}")
    return np.array(X), np.array(y), tuple(str(n) for n in names)


def _parse_grid(text: str | None, default):
    if text is None:
        return default
    return tuple(float(v) for v in text.split(","))


def _cmd_train(args) -> int:
    root = Path(args.dataset)
    X, y, names = _load_dataset_dir(root)
    print(f"loaded {len(X)} patches, {len(names)} classes")
    scaling = fit_scaling(X)
    data = LabeledDataset(vectors=apply_scaling(X, scaling), labels=y, class_names=names)
    if args.C is not None and args.gamma is not None:
        C, gamma = args.C, args.gamma
        report = None
    else:
        report = grid_search_cv(
            data,
            c_grid=_parse_grid(args.c_grid, DEFAULT_C_GRID),
            gamma_grid=_parse_grid(args.gamma_grid, DEFAULT_GAMMA_GRID),
            k=args.folds,
            seed=args.seed,
        )
        C, gamma = report.best
        best = max(e["mean_accuracy"] for e in report.grid)
        print(f"grid search best: C={C} gamma={gamma} (cv accuracy {best:.4f})")
    model = train_multiclass(data, C=C, gamma=gamma, scaling=scaling, seed=args.seed)
    save_model(model, args.out_model)
    print(f"model written to {args.out_model}")
    if report is not None and args.out_cv_report:
        Path(args.out_cv_report).write_text(
            json.dumps(
                {
                    "format": CV_REPORT_FORMAT,
                    "version": CV_REPORT_VERSION,
                    "grid": list(report.grid),
                    "best": {"C": report.best[0], "gamma": report.best[1]},
                    "folds": report.folds,
                },
                indent=2,
                sort_keys=True,
            )
        )
        print(f"cv report written to {args.out_cv_report}")
    return 0


def _cmd_diagnose(args) -> int:
    img = load_raster(args.image)
    strokes = load_strokes(args.strokes)
    model = load_model(args.model)
    catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
    opts = PipelineOptions(
        denoise_radius=args.denoise,
        transform=load_transform(args.transform) if args.transform else None,
    )
    report = run_pipeline(img, strokes, model, catalog, opts)
    save_report(report, args.out)
    if report.no_lesions_found:
        print("no lesions found: leaf appears healthy")
    top = report.top(3)
    for disease_id, prob in top:
        print(f"  {catalog.by_id(disease_id).name}: {prob:.3f}")
    print(f"severity: {report.severity:.4f}")
    print(f"report written to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    model = load_model(args.model)
    catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
    serve(model, catalog, host=args.host, port=args.port)
    return 0


def _cmd_render_chart(args) -> int:
    spec = load_chart_spec(args.chart) if args.chart else default_chart_spec()
    margin = 40
    h = int(spec.outer_height * args.scale + 2 * margin)
    w = int(spec.outer_width * args.scale + 2 * margin)
    out = render_chart(spec, canvas=(h, w), scale=args.scale, background=(1.0, 1.0, 1.0))
    save_raster(out.image, args.out)
    print(f"chart master written to {args.out}")
    return 0


def _cmd_make_dataset(args) -> int:
    from .synthetic import save_patch_dataset

    rng = np.random.default_rng(args.seed)
    save_patch_dataset(rng, args.out, args.per_class)
    print(f"synthetic dataset written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leafdx", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="fit a colour transform from a chart photo")
    p.add_argument("--image", required=True)
    p.add_argument("--chart", help="chart spec JSON (default: built-in)")
    p.add_argument("--kind", choices=["linear", "quadratic"], default="linear")
    p.add_argument("--out-transform", required=True)
    p.add_argument("--out-image", help="write the corrected PNG here")
    p.set_defaults(fn=_cmd_calibrate)

    p = sub.add_parser("train", help="train a model from a patch dataset directory")
    p.add_argument("--dataset", required=True, help="dir with class folders + dataset.json")
    p.add_argument("--out-model", required=True)
    p.add_argument("--C", type=float, help="skip grid search and use this C")
    p.add_argument("--gamma", type=float, help="skip grid search and use this gamma")
    p.add_argument("--c-grid", help="comma list of C values")
    p.add_argument("--gamma-grid", help="comma list of gamma values")
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-cv-report")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("diagnose", help="run the full pipeline on one photo")
    p.add_argument("--image", required=True)
    p.add_argument("--strokes", required=True, help="stroke set JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--catalog", help="catalog JSON (default: built-in)")
    p.add_argument("--transform", help="colour transform JSON to apply first")
    p.add_argument("--denoise", type=int, default=0, help="mean filter radius (0 = off)")
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(fn=_cmd_diagnose)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--model", required=True)
    p.add_argument("--catalog")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("render-chart", help="write a printable chart master PNG")
    p.add_argument("--chart")
    p.add_argument("--scale", type=float, default=2.0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_render_chart)

    p = sub.add_parser("make-dataset", help="generate a synthetic patch dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=int, default=40)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=_cmd_make_dataset)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
