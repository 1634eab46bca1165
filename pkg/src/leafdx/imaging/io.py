"""PNG/JPEG round-trips for rasters, masks and label maps."""
from __future__ import annotations

import io as _io
from pathlib import Path

import numpy as np
from PIL import Image

from .types import BinaryMask, LabelMap, Raster


def load_raster(path: str | Path) -> Raster:
    with Image.open(path) as img:
        if img.mode in ("L", "I;16", "I"):
            arr = np.asarray(img.convert("L"), dtype=np.uint8)
        else:
            arr = np.asarray(img.convert("RGB"), dtype=np.uint8)
    return Raster(arr)


def save_raster(img: Raster, path: str | Path) -> None:
    Image.fromarray(img.data).save(path)


def raster_from_png_bytes(data: bytes) -> Raster:
    with Image.open(_io.BytesIO(data)) as img:
        arr = np.asarray(img.convert("RGB"), dtype=np.uint8)
    return Raster(arr)


def raster_to_png_bytes(img: Raster) -> bytes:
    buf = _io.BytesIO()
    Image.fromarray(img.data).save(buf, format="PNG")
    return buf.getvalue()


def save_mask(m: BinaryMask, path: str | Path) -> None:
    Image.fromarray(np.where(m.data, 255, 0).astype(np.uint8)).save(path)


def load_mask(path: str | Path) -> BinaryMask:
    with Image.open(path) as img:
        arr = np.asarray(img.convert("L"))
    return BinaryMask(arr >= 128)


def mask_to_png_bytes(m: BinaryMask) -> bytes:
    buf = _io.BytesIO()
    Image.fromarray(np.where(m.data, 255, 0).astype(np.uint8)).save(buf, format="PNG")
    return buf.getvalue()


def save_labelmap(lm: LabelMap, path: str | Path) -> None:
    if lm.data.max(initial=0) > 65535:
        raise ValueError("label ids exceed 16-bit range")
    Image.fromarray(lm.data.astype(np.uint16)).save(path)


def load_labelmap(path: str | Path) -> LabelMap:
    with Image.open(path) as img:
        arr = np.asarray(img)
    return LabelMap(arr.astype(np.int32))
