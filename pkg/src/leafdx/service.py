"""HTTP adapter over the diagnosis library.

Every endpoint decodes its arguments, calls the corresponding library
function and encodes the result; no pipeline logic lives here.  Uploaded
images are PNG (or JPEG) files in multipart form data; masks and corrected
images return as base64 PNG.  Leaf and transform state is held in-memory
keyed by ids so follow-up calls (diagnose by leaf id, reselect) can refer
back to earlier results.
"""
from __future__ import annotations

import base64
import hashlib
import json
import threading
import uuid
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, File, Form, HTTPException, UploadFile

from . import __version__
from .calibration import (
    apply_transform,
    compute_patch_weights,
    default_chart_spec,
    detect_chart,
    fit_transform,
    transform_to_dict,
)
from .catalog import DiseaseCatalog, catalog_to_dict
from .errors import LeafdxError
from .imaging import Raster, mask_to_png_bytes, raster_from_png_bytes, raster_to_png_bytes
from .pipeline import (
    PipelineOptions,
    diagnose_leaf,
    prepare_image,
    report_to_dict,
    reselect_patch,
    segment_leaf,
)
from .segmentation import LeafSegment, strokes_from_dict, strokes_to_dict
from .svm import SvmModel, model_to_dict


@dataclass
class _LeafSession:
    image: Raster
    leaf: LeafSegment


class ServiceState:
    """Shared request state: immutable model/catalog, id-keyed sessions."""

    def __init__(self, model: SvmModel, catalog: DiseaseCatalog, model_id: str | None = None):
        self.catalog = catalog
        self._lock = threading.Lock()
        self.leaves: dict[str, _LeafSession] = {}
        self.transforms: dict[str, object] = {}
        self.swap_model(model, model_id)

    def swap_model(self, model: SvmModel, model_id: str | None = None) -> None:
        if model_id is None:
            digest = hashlib.sha256(
                json.dumps(model_to_dict(model), sort_keys=True).encode()
            ).hexdigest()
            model_id = digest[:12]
        # single assignment: readers see the old or the new pair, never a mix
        self._model_ref = (model, model_id)

    @property
    def model(self) -> SvmModel:
        return self._model_ref[0]

    @property
    def model_id(self) -> str:
        return self._model_ref[1]

    def store_leaf(self, session: _LeafSession) -> str:
        leaf_id = uuid.uuid4().hex
        with self._lock:
            self.leaves[leaf_id] = session
        return leaf_id

    def get_leaf(self, leaf_id: str) -> _LeafSession:
        with self._lock:
            session = self.leaves.get(leaf_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown leaf id")
        return session

    def store_transform(self, t) -> str:
        tid = uuid.uuid4().hex
        with self._lock:
            self.transforms[tid] = t
        return tid

    def get_transform(self, tid: str):
        with self._lock:
            t = self.transforms.get(tid)
        if t is None:
            raise HTTPException(status_code=404, detail="unknown transform id")
        return t


def _decode_upload(data: bytes) -> Raster:
    try:
        return raster_from_png_bytes(data)
    except Exception as e:
        raise HTTPException(status_code=400, detail=f"bad image upload: {e}") from e


def _parse_json_field(text: str, what: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise HTTPException(status_code=400, detail=f"bad {what} JSON: {e}") from e


def _segment_metadata(leaf: LeafSegment) -> dict:
    return {
        "bbox": list(leaf.bbox),
        "area": leaf.area,
        "orientation": leaf.orientation,
    }


def create_app(
    model: SvmModel, catalog: DiseaseCatalog, model_id: str | None = None
) -> FastAPI:
    app = FastAPI(title="leafdx", version=__version__)
    state = ServiceState(model, catalog, model_id)
    app.state.leafdx = state

    @app.exception_handler(LeafdxError)
    async def _domain_error(_, exc: LeafdxError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/api/v1/health")
    def health():
        return {"version": __version__, "model_id": state.model_id}

    @app.get("/api/v1/diseases")
    def diseases():
        return catalog_to_dict(state.catalog)

    @app.get("/api/v1/diseases/{disease_id}")
    def disease(disease_id: int):
        if not 0 <= disease_id < len(state.catalog):
            raise HTTPException(status_code=404, detail="unknown disease id")
        e = state.catalog.by_id(disease_id)
        return {
            "id": e.id,
            "name": e.name,
            "symptoms": e.symptoms,
            "management": e.management,
            "reference_image": e.reference_image,
            "area_scale": e.area_scale,
        }

    @app.post("/api/v1/calibrate")
    async def calibrate(image: UploadFile = File(...), kind: str = Form("linear")):
        img = _decode_upload(await image.read())
        spec = default_chart_spec()
        detection = detect_chart(img, spec)
        weights = compute_patch_weights(img, detection, spec)
        transform = fit_transform(detection.patch_values, spec.reference_array(), weights, kind)
        corrected = apply_transform(img, transform)
        tid = state.store_transform(transform)
        return {
            "transform_id": tid,
            "transform": transform_to_dict(transform),
            "corrected_png": base64.b64encode(raster_to_png_bytes(corrected)).decode(),
        }

    @app.post("/api/v1/leaf")
    async def leaf(image: UploadFile = File(...), strokes: str = Form(...)):
        img = _decode_upload(await image.read())
        stroke_set = strokes_from_dict(_parse_json_field(strokes, "strokes"))
        prepared, scaled_strokes = prepare_image(img, stroke_set, PipelineOptions())
        segment = segment_leaf(prepared, scaled_strokes)
        leaf_id = state.store_leaf(_LeafSession(image=prepared, leaf=segment))
        return {
            "leaf_id": leaf_id,
            "mask_png": base64.b64encode(mask_to_png_bytes(segment.mask)).decode(),
            "segment": _segment_metadata(segment),
            "strokes": strokes_to_dict(stroke_set),  # wire round-trip check
        }

    @app.post("/api/v1/diagnose")
    async def diagnose(
        image: UploadFile | None = File(None),
        strokes: str | None = Form(None),
        leaf_id: str | None = Form(None),
        options: str | None = Form(None),
    ):
        opts_d = _parse_json_field(options, "options") if options else {}
        opts = PipelineOptions(
            denoise_radius=int(opts_d.get("denoise_radius", 0)),
            transform=(
                state.get_transform(opts_d["transform_id"]) if "transform_id" in opts_d else None
            ),
            small_area_penalty=float(opts_d.get("small_area_penalty", 0.5)),
        )
        if leaf_id is not None:
            session = state.get_leaf(leaf_id)
            report = diagnose_leaf(session.image, session.leaf, state.model, state.catalog, opts)
            return report_to_dict(report)
        if image is None or strokes is None:
            raise HTTPException(status_code=400, detail="need leaf_id or image+strokes")
        img = _decode_upload(await image.read())
        stroke_set = strokes_from_dict(_parse_json_field(strokes, "strokes"))
        prepared, scaled_strokes = prepare_image(img, stroke_set, opts)
        segment = segment_leaf(prepared, scaled_strokes)
        report = diagnose_leaf(prepared, segment, state.model, state.catalog, opts)
        return report_to_dict(report)

    @app.post("/api/v1/reselect")
    async def reselect(payload: dict):
        try:
            leaf_id = payload["leaf_id"]
            ax, ay = payload["corner_a"]
            bx, by = payload["corner_b"]
        except (KeyError, TypeError, ValueError) as e:
            raise HTTPException(status_code=400, detail=f"bad reselect payload: {e}") from e
        session = state.get_leaf(str(leaf_id))
        try:
            probs = reselect_patch(
                session.image,
                session.leaf,
                (float(ax), float(ay)),
                (float(bx), float(by)),
                state.model,
                state.catalog,
            )
        except ValueError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        ranked = sorted(range(len(probs)), key=lambda i: (-probs[i], i))
        return {
            "probabilities": [float(p) for p in probs],
            "ranked": [[int(i), float(probs[i])] for i in ranked],
        }

    return app


def serve(model: SvmModel, catalog: DiseaseCatalog, host: str = "127.0.0.1", port: int = 8000):
    import uvicorn

    uvicorn.run(create_app(model, catalog), host=host, port=port)
