"""Raster types and the low-level image algorithms everything else builds on."""

from .filters import (
    hsv_planes,
    local_entropy,
    mean_filter,
    resize_max_side,
    rgb_to_grey,
    rgb_to_hsv,
    sobel_magnitude,
)
from .glcm import GlcmStats, glcm, glcm_stats, quantise
from .hough import hough_lines, line_intersection, point_line_distance
from .io import (
    load_labelmap,
    load_mask,
    load_raster,
    mask_to_png_bytes,
    raster_from_png_bytes,
    raster_to_png_bytes,
    save_labelmap,
    save_mask,
    save_raster,
)
from .morphology import (
    binary_open,
    connected_components,
    dilate,
    disc_offsets,
    erode,
    fill_holes,
    morphology,
    reconstruct,
)
from .threshold import histogram256, otsu_from_histogram, otsu_threshold, threshold_mask
from .types import (
    GLCM_ANGLES,
    GLCM_LEVELS,
    GLCM_OFFSETS,
    BinaryMask,
    GreyCooccurrence,
    LabelMap,
    LineParam,
    Plane,
    Raster,
)
from .watershed import watershed

__all__ = [
    "BinaryMask",
    "GLCM_ANGLES",
    "GLCM_LEVELS",
    "GLCM_OFFSETS",
    "GlcmStats",
    "GreyCooccurrence",
    "LabelMap",
    "LineParam",
    "Plane",
    "Raster",
    "binary_open",
    "connected_components",
    "dilate",
    "disc_offsets",
    "erode",
    "fill_holes",
    "glcm",
    "glcm_stats",
    "histogram256",
    "hough_lines",
    "hsv_planes",
    "line_intersection",
    "load_labelmap",
    "load_mask",
    "load_raster",
    "local_entropy",
    "mask_to_png_bytes",
    "mean_filter",
    "morphology",
    "otsu_from_histogram",
    "otsu_threshold",
    "point_line_distance",
    "quantise",
    "raster_from_png_bytes",
    "raster_to_png_bytes",
    "resize_max_side",
    "rgb_to_grey",
    "rgb_to_hsv",
    "save_labelmap",
    "save_mask",
    "save_raster",
    "sobel_magnitude",
    "threshold_mask",
    "watershed",
]
