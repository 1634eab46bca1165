"""Procedural leaf scenes and lesion archetypes.

Six archetypes with distinct colour and micro-texture stand in for the six
catalog diseases in tests and demos.  Textures are two-valued patterns
(stripes, checker, dots) so co-occurrence statistics carry real signal while
windowed entropy stays low; the gravel background is high-entropy noise, so
it is caught by both the colour and the texture background cues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import Raster
from .segmentation import Stroke, StrokeSet

LEAF_RGB = (0.24, 0.56, 0.20)
LEAF_NOISE = 0.004
GRAVEL_RGB = (0.62, 0.55, 0.46)
GRAVEL_NOISE = 0.10
MIDRIB_RGB = (0.62, 0.58, 0.22)
MIDRIB_HALF_WIDTH = 1.5


@dataclass(frozen=True)
class Archetype:
    name: str
    base_rgb: tuple[float, float, float]
    pattern: str  # flat | checker | hstripes | dstripes | dots
    pattern_amp: float
    radius_range: tuple[int, int]
    large: bool


ARCHETYPES = (
    Archetype("Anthracnose", (0.07, 0.06, 0.05), "flat", 0.0, (5, 8), False),
    Archetype("Gall flies", (0.48, 0.22, 0.12), "flat", 0.0, (5, 8), False),
    Archetype("Grey leaf spot", (0.58, 0.57, 0.52), "checker", 0.08, (5, 8), False),
    Archetype("Red-rust", (0.72, 0.38, 0.10), "hstripes", 0.08, (5, 8), False),
    Archetype("Powdery mildew", (0.92, 0.91, 0.88), "dots", 0.15, (16, 22), True),
    Archetype("Sooty mould", (0.20, 0.17, 0.14), "dstripes", 0.07, (16, 22), True),
)


def _pattern_field(kind: str, amp: float, shape, phase: tuple[int, int], rng) -> np.ndarray:
    ys, xs = np.mgrid[0 : shape[0], 0 : shape[1]]
    ys = ys + phase[0]
    xs = xs + phase[1]
    if kind == "flat" or amp == 0.0:
        return np.zeros(shape)
    if kind == "checker":
        return amp * (((ys + xs) % 2) * 2.0 - 1.0)
    if kind == "hstripes":
        return amp * ((ys % 2) * 2.0 - 1.0)
    if kind == "dstripes":
        return amp * (((ys - xs) % 2) * 2.0 - 1.0)
    if kind == "dots":
        dots = rng.random(shape) < 0.06
        return np.where(dots, -amp, 0.0)
    raise ValueError(f"unknown pattern: {kind}")


def _stamp_blob(canvas: np.ndarray, cx: float, cy: float, r: float, arch: Archetype, rng) -> np.ndarray:
    """Irregular blob: main disc plus two offset lobes.  Returns its mask."""
    h, w = canvas.shape[:2]
    ys, xs = np.mgrid[0:h, 0:w]
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    for _ in range(2):
        ang = rng.uniform(0, 2 * np.pi)
        lx = cx + 0.55 * r * np.cos(ang)
        ly = cy + 0.55 * r * np.sin(ang)
        mask |= (xs - lx) ** 2 + (ys - ly) ** 2 <= (0.6 * r) ** 2
    phase = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
    tex = _pattern_field(arch.pattern, arch.pattern_amp, (h, w), phase, rng)
    colour = np.asarray(arch.base_rgb) + tex[..., None]
    canvas[mask] = colour[mask]
    return mask


@dataclass(frozen=True)
class LeafScene:
    image: Raster
    leaf_mask: np.ndarray  # ground-truth silhouette (bool)
    lesion_mask: np.ndarray  # ground-truth affected pixels (bool)
    lesion_boxes: tuple[tuple[int, int, int, int], ...]  # (x, y, w, h) per stamp
    strokes: StrokeSet
    class_id: int


def _ellipse_frame(h, w, rng):
    cx, cy = w / 2 + rng.uniform(-8, 8), h / 2 + rng.uniform(-6, 6)
    rx = rng.uniform(0.36, 0.42) * w
    ry = rng.uniform(0.30, 0.36) * h
    theta = rng.uniform(-25, 25)
    return cx, cy, rx, ry, theta


def render_leaf_scene(
    rng: np.random.Generator,
    class_id: int,
    size: tuple[int, int] = (240, 320),
    n_lesions: int | None = None,
) -> LeafScene:
    """A diseased leaf photo stand-in: gravel background, green leaf with a
    yellowish midrib, and stamped lesions of one archetype."""
    h, w = size
    arch = ARCHETYPES[class_id]
    img = np.empty((h, w, 3))
    img[:] = GRAVEL_RGB
    img += rng.normal(0, GRAVEL_NOISE, img.shape)

    cx, cy, rx, ry, theta = _ellipse_frame(h, w, rng)
    t = np.deg2rad(theta)
    ys, xs = np.mgrid[0:h, 0:w]
    u = (xs - cx) * np.cos(t) + (ys - cy) * np.sin(t)  # along major axis
    v = -(xs - cx) * np.sin(t) + (ys - cy) * np.cos(t)
    leaf = (u / rx) ** 2 + (v / ry) ** 2 <= 1.0
    shade = 0.03 * (v / ry)
    leaf_col = np.asarray(LEAF_RGB)[None, None, :] + shade[..., None]
    img[leaf] = leaf_col[leaf]
    img[leaf] += rng.normal(0, LEAF_NOISE, (int(leaf.sum()), 3))

    midrib = (np.abs(v) <= MIDRIB_HALF_WIDTH) & ((u / (0.9 * rx)) ** 2 <= 1.0) & leaf
    img[midrib] = MIDRIB_RGB

    if n_lesions is None:
        n_lesions = int(rng.integers(1, 3)) if arch.large else int(rng.integers(3, 6))
    lesion_mask = np.zeros((h, w), dtype=bool)
    boxes = []
    placed: list[tuple[float, float, float]] = []
    attempts = 0
    while len(placed) < n_lesions and attempts < 300:
        attempts += 1
        r = float(rng.uniform(*arch.radius_range))
        margin = r + 6
        lu = rng.uniform(-(rx - margin), rx - margin)
        lv = rng.uniform(-(ry - margin), ry - margin)
        if (lu / (rx - margin)) ** 2 + (lv / (ry - margin)) ** 2 > 1.0:
            continue
        if abs(lv) < r + MIDRIB_HALF_WIDTH + 4:  # keep clear of the midrib
            continue
        px = cx + lu * np.cos(t) - lv * np.sin(t)
        py = cy + lu * np.sin(t) + lv * np.cos(t)
        if any((px - qx) ** 2 + (py - qy) ** 2 < (r + qr + 3) ** 2 for qx, qy, qr in placed):
            continue
        stamp = _stamp_blob(img, px, py, r, arch, rng)
        stamp &= leaf
        lesion_mask |= stamp
        sy, sx = np.nonzero(stamp)
        boxes.append((int(sx.min()), int(sy.min()), int(sx.max() - sx.min() + 1), int(sy.max() - sy.min() + 1)))
        placed.append((px, py, r))

    strokes = _scribble(cx, cy, rx, ry, t)
    return LeafScene(
        image=Raster.from_float(img),
        leaf_mask=leaf,
        lesion_mask=lesion_mask,
        lesion_boxes=tuple(boxes),
        strokes=strokes,
        class_id=class_id,
    )


def _scribble(cx, cy, rx, ry, t) -> StrokeSet:
    """A plausible user mark: several pen strokes across the leaf face, the
    way the target leaf is scribbled over in practice.  Coverage matters: the
    automatic background synthesis only trusts a 20 px guard band around leaf
    strokes, so non-green structure (midrib, rim lesions) outside the marked
    area would be seeded as background."""

    def pt(u, v):
        return (cx + u * np.cos(t) - v * np.sin(t), cy + u * np.sin(t) + v * np.cos(t))

    strokes = []
    for frac in (0.0, -0.35, 0.35, -0.7, 0.7):
        v = frac * ry
        half = 0.78 * rx * np.sqrt(max(0.0, 1.0 - frac**2))
        strokes.append(
            Stroke(points=(pt(-half, v), pt(0.0, v), pt(half, v)), radius=5, label="leaf")
        )
    return StrokeSet(strokes=tuple(strokes))


def render_training_patch(rng: np.random.Generator, class_id: int) -> tuple[Raster, np.ndarray]:
    """A lesion stamped on leaf-green canvas plus its ground-truth mask; the
    canvas is sized so large archetypes produce tiled windows like test time."""
    arch = ARCHETYPES[class_id]
    side = 40 if not arch.large else 56
    img = np.empty((side, side, 3))
    img[:] = LEAF_RGB
    img += rng.normal(0, LEAF_NOISE, img.shape)
    r = float(rng.uniform(*arch.radius_range))
    off = side / 2 + rng.uniform(-2, 2, size=2)
    stamp = _stamp_blob(img, off[0], off[1], r, arch, rng)
    return Raster.from_float(img), stamp


def training_features(rng: np.random.Generator, per_class: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw (unscaled) feature matrix and labels for the archetype dataset,
    extracted through the production tiling and feature path."""
    from .features import assemble, elliptical_mask
    from .imaging import BinaryMask
    from .lesions import LesionMap, tile_patches

    X, y = [], []
    for class_id in range(len(ARCHETYPES)):
        collected = 0
        while collected < per_class:
            patch_img, stamp = render_training_patch(rng, class_id)
            lm = LesionMap(
                mask=BinaryMask(stamp),
                vein_line=None,
                spot_mask=BinaryMask(np.zeros_like(stamp)),
            )
            for p in tile_patches(lm):
                window = Raster(patch_img.data[p.y : p.y + p.h, p.x : p.x + p.w])
                X.append(assemble(window, elliptical_mask(p.h, p.w)))
                y.append(class_id)
                collected += 1
                if collected >= per_class:
                    break
    return np.array(X), np.array(y)


def save_patch_dataset(rng: np.random.Generator, root, per_class: int) -> None:
    """Write a train-ready directory: one folder of patch PNGs per class plus
    a manifest listing class names in id order."""
    import json
    from pathlib import Path

    from .imaging import BinaryMask, save_raster
    from .lesions import LesionMap, tile_patches

    root = Path(root)
    names = [a.name for a in ARCHETYPES]
    for class_id, name in enumerate(names):
        cls_dir = root / name.lower().replace(" ", "_")
        cls_dir.mkdir(parents=True, exist_ok=True)
        count = 0
        while count < per_class:
            patch_img, stamp = render_training_patch(rng, class_id)
            lm = LesionMap(
                mask=BinaryMask(stamp), vein_line=None, spot_mask=BinaryMask(np.zeros_like(stamp))
            )
            for p in tile_patches(lm):
                window = Raster(patch_img.data[p.y : p.y + p.h, p.x : p.x + p.w])
                save_raster(window, cls_dir / f"patch_{count:04d}.png")
                count += 1
                if count >= per_class:
                    break
    (root / "dataset.json").write_text(
        json.dumps({"classes": [n.lower().replace(" ", "_") for n in names], "names": names}, indent=2)
    )
