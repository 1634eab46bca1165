"""Reference chart model: 24 colour patches in a bordered 4x6 grid.

Patch groups: group 1 is six achromatic steps, group 2 holds the primaries
(full and half strength) plus secondaries, group 3 is nine foliage greens
designed in CIE L*a*b* (L* 25/50/75 crossed with (a*, b*) of (-65, 65),
(-65, 0) and (0, 65)).

Geometry lives in "model" coordinates with the origin at the top-left corner
of the outer edge of the black border ring; the white ring extends outwards
from there.  This is the frame the detector's homography maps into an image.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import MalformedFileError, VersionMismatchError

CHART_FORMAT = "leafdx-chart"
CHART_VERSION = 1

GRID_ROWS = 4
GRID_COLS = 6
CELL_SIZE = 40.0
BLACK_BORDER = 20.0
WHITE_BORDER = 20.0

# D65 reference white, 2 degree observer.
_WHITE = (0.95047, 1.0, 1.08883)
_SRGB_FROM_XYZ = np.array(
    [
        [3.2404542, -1.5371385, -0.4985314],
        [-0.9692660, 1.8760108, 0.0415560],
        [0.0556434, -0.2040259, 1.0572252],
    ]
)


def lab_to_srgb(lab) -> np.ndarray:
    """CIE L*a*b* (D65) to sRGB in [0, 1], out-of-gamut values clipped."""
    L, a, b = np.asarray(lab, dtype=np.float64)
    fy = (L + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0

    def f_inv(t):
        d = 6.0 / 29.0
        return np.where(t > d, t**3, 3 * d * d * (t - 4.0 / 29.0))

    xyz = np.array([f_inv(fx), f_inv(fy), f_inv(fz)]) * np.array(_WHITE)
    lin = _SRGB_FROM_XYZ @ xyz
    lin = np.clip(lin, 0.0, 1.0)
    srgb = np.where(lin <= 0.0031308, 12.92 * lin, 1.055 * lin ** (1 / 2.4) - 0.055)
    return np.clip(srgb, 0.0, 1.0)


def srgb_to_lab(rgb) -> np.ndarray:
    """sRGB in [0, 1] to CIE L*a*b* (D65)."""
    c = np.asarray(rgb, dtype=np.float64)
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = np.linalg.solve(_SRGB_FROM_XYZ, lin)
    t = xyz / np.array(_WHITE)

    def f(t):
        d = 6.0 / 29.0
        return np.where(t > d**3, np.cbrt(t), t / (3 * d * d) + 4.0 / 29.0)

    fx, fy, fz = f(t)
    return np.array([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)])


@dataclass(frozen=True)
class ChartPatch:
    id: int
    group: int
    row: int
    col: int
    reference_rgb: tuple[float, float, float]
    reference_lab: tuple[float, float, float]


@dataclass(frozen=True)
class ChartSpec:
    patches: tuple[ChartPatch, ...]
    rows: int = GRID_ROWS
    cols: int = GRID_COLS
    cell_size: float = CELL_SIZE
    black_border: float = BLACK_BORDER
    white_border: float = WHITE_BORDER

    def __post_init__(self):
        if len(self.patches) != 24:
            raise ValueError("chart must have exactly 24 patches")
        ids = {p.id for p in self.patches}
        if ids != set(range(24)):
            raise ValueError("patch ids must be 0..23 and unique")
        if sum(1 for p in self.patches if p.group == 3) != 9:
            raise ValueError("group 3 must have exactly 9 patches")

    # -- geometry in model coordinates ------------------------------------
    @property
    def inner_width(self) -> float:
        return self.cols * self.cell_size

    @property
    def inner_height(self) -> float:
        return self.rows * self.cell_size

    @property
    def outer_width(self) -> float:
        """Width of the black ring's outer rectangle (the detected quad)."""
        return self.inner_width + 2 * self.black_border

    @property
    def outer_height(self) -> float:
        return self.inner_height + 2 * self.black_border

    def corner_points(self) -> np.ndarray:
        """TL, TR, BR, BL of the black outer rectangle."""
        w, h = self.outer_width, self.outer_height
        return np.array([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]])

    def cell_origin(self, row: int, col: int) -> tuple[float, float]:
        return (
            self.black_border + col * self.cell_size,
            self.black_border + row * self.cell_size,
        )

    def patch_by_cell(self) -> dict[tuple[int, int], ChartPatch]:
        return {(p.row, p.col): p for p in self.patches}

    def reference_array(self) -> np.ndarray:
        """24x3 reference RGB ordered by patch id."""
        out = np.zeros((24, 3))
        for p in self.patches:
            out[p.id] = p.reference_rgb
        return out


GROUP3_LABS = [
    (L, a, b) for L in (25.0, 50.0, 75.0) for (a, b) in ((-65.0, 65.0), (-65.0, 0.0), (0.0, 65.0))
]

_GROUP1_RGB = [(v, v, v) for v in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)]
_GROUP2_FULL = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
_GROUP2_HALF = [(1.0, 0.5, 0.5), (0.5, 1.0, 0.5), (0.5, 0.5, 1.0)]


def default_chart_spec() -> ChartSpec:
    """The stock 24-patch layout: achromatic row, primary/secondary row,
    half-strength primaries, then the nine L*a*b* greens."""
    patches: list[ChartPatch] = []

    def add(group, rgb, lab=None):
        idx = len(patches)
        row, col = divmod(idx, GRID_COLS)
        rgb = tuple(float(v) for v in rgb)
        if lab is None:
            lab = tuple(float(v) for v in srgb_to_lab(rgb))
        patches.append(
            ChartPatch(
                id=idx,
                group=group,
                row=row,
                col=col,
                reference_rgb=rgb,
                reference_lab=tuple(float(v) for v in lab),
            )
        )

    for rgb in _GROUP1_RGB:
        add(1, rgb)
    for rgb in _GROUP2_FULL:
        add(2, rgb)
    for rgb in _GROUP2_HALF:
        add(2, rgb)
    for lab in GROUP3_LABS:
        add(3, tuple(lab_to_srgb(lab)), lab)
    return ChartSpec(patches=tuple(patches))


# -- serialisation ---------------------------------------------------------


def chart_spec_to_dict(spec: ChartSpec) -> dict:
    return {
        "format": CHART_FORMAT,
        "version": CHART_VERSION,
        "layout": {
            "rows": spec.rows,
            "cols": spec.cols,
            "cell_size": spec.cell_size,
            "black_border": spec.black_border,
            "white_border": spec.white_border,
        },
        "patches": [
            {
                "id": p.id,
                "group": p.group,
                "row": p.row,
                "col": p.col,
                "reference_rgb": list(p.reference_rgb),
                "reference_lab": list(p.reference_lab),
            }
            for p in spec.patches
        ],
    }


def chart_spec_from_dict(d: dict) -> ChartSpec:
    try:
        if d.get("format") != CHART_FORMAT:
            raise MalformedFileError("not a chart spec file")
        if d.get("version") != CHART_VERSION:
            raise VersionMismatchError(f"unsupported chart version: {d.get('version')!r}")
        layout = d["layout"]
        patches = tuple(
            ChartPatch(
                id=int(p["id"]),
                group=int(p["group"]),
                row=int(p["row"]),
                col=int(p["col"]),
                reference_rgb=tuple(float(v) for v in p["reference_rgb"]),
                reference_lab=tuple(float(v) for v in p["reference_lab"]),
            )
            for p in d["patches"]
        )
        return ChartSpec(
            patches=patches,
            rows=int(layout["rows"]),
            cols=int(layout["cols"]),
            cell_size=float(layout["cell_size"]),
            black_border=float(layout["black_border"]),
            white_border=float(layout["white_border"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad chart spec: {e}") from e


def save_chart_spec(spec: ChartSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(chart_spec_to_dict(spec), indent=2, sort_keys=True))


def load_chart_spec(path: str | Path) -> ChartSpec:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad chart spec: {e}") from e
    return chart_spec_from_dict(d)
