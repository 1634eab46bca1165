"""Disease knowledge base: names, symptoms, management advice, area scale.

The stock entries cover the six mango pathologies.  Symptom/management text
is placeholder data for the operator to replace with their advisory content;
``area_scale`` records whether a disease typically covers large leaf areas
(sooty mould, powdery mildew) or small spots (anthracnose, gall flies).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedFileError, VersionMismatchError

CATALOG_FORMAT = "leafdx-disease-catalog"
CATALOG_VERSION = 1

AREA_SMALL = "small"
AREA_LARGE = "large"


@dataclass(frozen=True)
class DiseaseInfo:
    id: int
    name: str
    symptoms: str
    management: str
    reference_image: str
    area_scale: str  # small | large

    def __post_init__(self):
        if self.area_scale not in (AREA_SMALL, AREA_LARGE):
            raise ValueError(f"area_scale must be small|large, got {self.area_scale!r}")


@dataclass(frozen=True)
class DiseaseCatalog:
    entries: tuple[DiseaseInfo, ...]

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if ids != list(range(len(ids))):
            raise ValueError("catalog ids must be dense 0..K-1 in order")
        if len(ids) < 2:
            raise ValueError("catalog needs at least two diseases")

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def by_id(self, disease_id: int) -> DiseaseInfo:
        return self.entries[disease_id]

    def small_area_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.entries if e.area_scale == AREA_SMALL)


_DEFAULT_ENTRIES = (
    ("Anthracnose", AREA_SMALL, "Black spots and small blisters with a yellow border on the lamina.",
     "Prune affected twigs; apply a copper-based fungicide before flowering."),
    ("Gall flies", AREA_SMALL, "Small raised reddish-brown galls scattered over the leaf surface.",
     "Remove and destroy galled leaves; apply a systemic insecticide at flush."),
    ("Grey leaf spot", AREA_SMALL, "Greyish necrotic spots with darker margins, often merging.",
     "Improve canopy airflow; spray a protectant fungicide at first sign."),
    ("Red-rust", AREA_SMALL, "Rusty orange circular pustules with a smooth velvety surface.",
     "Copper oxychloride spray; avoid overhead irrigation during flush."),
    ("Powdery mildew", AREA_LARGE, "Whitish powdery coating spreading over large parts of the leaf.",
     "Apply wettable sulphur at first appearance; repeat at 15-day intervals."),
    ("Sooty mould", AREA_LARGE, "Black sooty film covering the lamina, following honeydew deposits.",
     "Control sap-sucking insects; wash foliage with starch solution."),
)


def default_catalog() -> DiseaseCatalog:
    return DiseaseCatalog(
        entries=tuple(
            DiseaseInfo(
                id=i,
                name=name,
                symptoms=symptoms,
                management=management,
                reference_image=f"references/{name.lower().replace(' ', '_')}.png",
                area_scale=scale,
            )
            for i, (name, scale, symptoms, management) in enumerate(_DEFAULT_ENTRIES)
        )
    )


def catalog_to_dict(cat: DiseaseCatalog) -> dict:
    return {
        "format": CATALOG_FORMAT,
        "version": CATALOG_VERSION,
        "diseases": [
            {
                "id": e.id,
                "name": e.name,
                "symptoms": e.symptoms,
                "management": e.management,
                "reference_image": e.reference_image,
                "area_scale": e.area_scale,
            }
            for e in cat.entries
        ],
    }


def catalog_from_dict(d: dict) -> DiseaseCatalog:
    try:
        if d.get("format") != CATALOG_FORMAT:
            raise MalformedFileError("not a catalog file")
        if d.get("version") != CATALOG_VERSION:
            raise VersionMismatchError(f"unsupported catalog version: {d.get('version')!r}")
        return DiseaseCatalog(
            entries=tuple(
                DiseaseInfo(
                    id=int(e["id"]),
                    name=str(e["name"]),
                    symptoms=str(e["symptoms"]),
                    management=str(e["management"]),
                    reference_image=str(e["reference_image"]),
                    area_scale=str(e["area_scale"]),
                )
                for e in d["diseases"]
            )
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad catalog: {e}") from e


def save_catalog(cat: DiseaseCatalog, path: str | Path) -> None:
    Path(path).write_text(json.dumps(catalog_to_dict(cat), indent=2, sort_keys=True))


def load_catalog(path: str | Path) -> DiseaseCatalog:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad catalog: {e}") from e
    return catalog_from_dict(d)
