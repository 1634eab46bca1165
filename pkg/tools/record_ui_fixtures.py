"""Record real backend responses as fixtures for the advisor-ui contract
tests.  Run from the repository root:

    python3 tools/record_ui_fixtures.py

Rewrites frontend/test/fixtures/*.json from a freshly trained archetype
model, so fixture content always matches the current wire schemas.
"""
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from fastapi.testclient import TestClient

import helpers
from leafdx.imaging import raster_to_png_bytes
from leafdx.segmentation import strokes_to_dict
from leafdx.service import create_app
from leafdx.synthetic import render_leaf_scene

FIXTURES = Path(__file__).resolve().parents[1] / "frontend" / "test" / "fixtures"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    model, catalog = helpers.small_model()
    client = TestClient(create_app(model, catalog, model_id="fixture-model"))
    scene = render_leaf_scene(np.random.default_rng(515151), 3)
    strokes_wire = strokes_to_dict(scene.strokes)
    png = raster_to_png_bytes(scene.image)

    health = client.get("/api/v1/health").json()
    diseases = client.get("/api/v1/diseases").json()
    disease_detail = client.get("/api/v1/diseases/4").json()

    leaf_resp = client.post(
        "/api/v1/leaf",
        files={"image": ("leaf.png", png, "image/png")},
        data={"strokes": json.dumps(strokes_wire)},
    )
    leaf = leaf_resp.json()

    diag = client.post("/api/v1/diagnose", data={"leaf_id": leaf["leaf_id"]}).json()

    x, y, w, h = scene.lesion_boxes[0]
    resel_req = {"leaf_id": leaf["leaf_id"], "corner_a": [x, y], "corner_b": [x + w, y + h]}
    resel = client.post("/api/v1/reselect", json=resel_req).json()

    degen_req = {"leaf_id": leaf["leaf_id"], "corner_a": [10, 10], "corner_b": [10, 10]}
    degen_resp = client.post("/api/v1/reselect", json=degen_req)

    fixtures = {
        "health.json": health,
        "diseases.json": diseases,
        "disease_detail.json": disease_detail,
        "leaf.json": {"request": {"strokes": strokes_wire}, "response": leaf},
        "diagnose.json": {"request": {"leaf_id": leaf["leaf_id"]}, "response": diag},
        "reselect.json": {"request": resel_req, "response": resel},
        "reselect_degenerate.json": {
            "request": degen_req,
            "status": degen_resp.status_code,
            "response": degen_resp.json(),
        },
    }
    for name, payload in fixtures.items():
        (FIXTURES / name).write_text(json.dumps(payload, indent=2, sort_keys=True))
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
