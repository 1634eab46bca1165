"""Chart modelling, detection and weighted colour standardisation."""

from .chart import (
    ChartPatch,
    ChartSpec,
    GROUP3_LABS,
    chart_spec_from_dict,
    chart_spec_to_dict,
    default_chart_spec,
    lab_to_srgb,
    load_chart_spec,
    save_chart_spec,
    srgb_to_lab,
)
from .detect import (
    ChartDetection,
    apply_homography,
    chart_region_mask,
    detect_chart,
    homography_from_corners,
    sample_bilinear,
)
from .render import RenderedChart, render_chart
from .transform import (
    ColourTransform,
    PatchWeights,
    apply_transform,
    compute_patch_weights,
    design_matrix,
    fit_transform,
    identity_transform,
    load_transform,
    save_transform,
    transform_from_dict,
    transform_to_dict,
    uniform_weights,
)

__all__ = [
    "ChartDetection",
    "ChartPatch",
    "ChartSpec",
    "ColourTransform",
    "GROUP3_LABS",
    "PatchWeights",
    "RenderedChart",
    "apply_homography",
    "apply_transform",
    "chart_region_mask",
    "chart_spec_from_dict",
    "chart_spec_to_dict",
    "compute_patch_weights",
    "default_chart_spec",
    "design_matrix",
    "detect_chart",
    "fit_transform",
    "homography_from_corners",
    "identity_transform",
    "lab_to_srgb",
    "load_chart_spec",
    "load_transform",
    "render_chart",
    "sample_bilinear",
    "save_chart_spec",
    "save_transform",
    "srgb_to_lab",
    "transform_from_dict",
    "transform_to_dict",
    "uniform_weights",
]
