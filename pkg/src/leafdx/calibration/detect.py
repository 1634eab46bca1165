"""Locate the bordered chart in a photo and read its 24 patch colours.

Pipeline: greyscale -> Otsu binarise -> fill enclosed bright areas -> erode ->
connected components -> per candidate: reconstruct, open, boundary Hough,
side refinement, corner intersection, orientation check, patch sampling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import AmbiguousChartError, ChartNotFoundError, DegenerateHistogramError
from ..imaging import (
    BinaryMask,
    LineParam,
    Raster,
    binary_open,
    connected_components,
    erode,
    fill_holes,
    hough_lines,
    otsu_threshold,
    point_line_distance,
    reconstruct,
    rgb_to_grey,
)
from .chart import ChartSpec

MIN_CANDIDATE_AREA = 2000
MAX_CANDIDATES = 8
PARALLEL_TOL_DEG = 12.0
PERPENDICULAR_TOL_DEG = 20.0
REFINE_BAND_PX = 2.0
EDGE_OUTWARD_OFFSET = 0.5  # boundary pixel centres sit half a pixel inside


@dataclass(frozen=True)
class ChartDetection:
    corners: np.ndarray  # 4x2 (x, y): TL, TR, BR, BL in image coordinates
    patch_values: np.ndarray  # 24x3 mean RGB in [0, 1], ordered by patch id
    homography: np.ndarray  # 3x3 model -> image

    def __post_init__(self):
        if self.corners.shape != (4, 2):
            raise ValueError("corners must be 4x2")
        if self.patch_values.shape != (24, 3):
            raise ValueError("patch_values must be 24x3")
        if not _is_convex(self.corners):
            raise ValueError("corners must form a convex quadrilateral")


def _is_convex(pts: np.ndarray) -> bool:
    crosses = []
    for i in range(4):
        a, b, c = pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]
        u, v = b - a, c - b
        crosses.append(u[0] * v[1] - u[1] * v[0])
    crosses = np.array(crosses)
    return bool(np.all(crosses > 0) or np.all(crosses < 0))


def homography_from_corners(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Exact 3x3 projective map sending the 4 src points to the 4 dst points."""
    A = np.zeros((8, 8))
    b = np.zeros(8)
    for i, ((X, Y), (x, y)) in enumerate(zip(src, dst)):
        A[2 * i] = [X, Y, 1, 0, 0, 0, -x * X, -x * Y]
        b[2 * i] = x
        A[2 * i + 1] = [0, 0, 0, X, Y, 1, -y * X, -y * Y]
        b[2 * i + 1] = y
    h = np.linalg.solve(A, b)
    return np.array(
        [[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]]
    )


def apply_homography(H: np.ndarray, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=np.float64)
    ones = np.ones((len(pts), 1))
    uvw = np.hstack([pts, ones]) @ H.T
    return uvw[:, :2] / uvw[:, 2:3]


def sample_bilinear(img_float: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Bilinear samples at (x, y) points; coordinates clamped to the image."""
    h, w = img_float.shape[:2]
    x = np.clip(pts[:, 0], 0.0, w - 1.0)
    y = np.clip(pts[:, 1], 0.0, h - 1.0)
    x0 = np.floor(x).astype(int)
    y0 = np.floor(y).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (x - x0)[:, None] if img_float.ndim == 3 else (x - x0)
    fy = (y - y0)[:, None] if img_float.ndim == 3 else (y - y0)
    tl = img_float[y0, x0]
    tr = img_float[y0, x1]
    bl = img_float[y1, x0]
    br = img_float[y1, x1]
    top = tl + (tr - tl) * fx
    bot = bl + (br - bl) * fx
    return top + (bot - top) * fy


def _fit_line_tls(xs: np.ndarray, ys: np.ndarray) -> LineParam | None:
    """Total least squares line through points, in (rho, theta) normal form."""
    if len(xs) < 2:
        return None
    mx, my = xs.mean(), ys.mean()
    cov = np.cov(np.stack([xs - mx, ys - my]))
    evals, evecs = np.linalg.eigh(cov)
    normal = evecs[:, 0]  # smallest-variance direction
    theta = np.degrees(np.arctan2(normal[1], normal[0])) % 360.0
    rho = mx * normal[0] + my * normal[1]
    if theta >= 180.0:
        theta -= 180.0
        rho = -rho
    return LineParam(rho=float(rho), theta=float(theta), score=len(xs))


def _angdiff(a: float, b: float) -> float:
    d = abs(a - b) % 180.0
    return min(d, 180.0 - d)


def _signed_distance(line: LineParam, x: float, y: float) -> float:
    t = np.deg2rad(line.theta)
    return x * np.cos(t) + y * np.sin(t) - line.rho


def _align_to(ref_theta: float, line: LineParam) -> LineParam:
    """Re-express the line with an angle next to ``ref_theta`` (allowing
    values outside [0, 180)).  The wrapped twin (-rho, theta±180) of a line
    has the opposite signed distance, so cluster members must share a frame
    before their sides of the blob are compared."""
    d = (line.theta - ref_theta + 90.0) % 180.0 - 90.0
    theta_adj = ref_theta + d
    k = round((line.theta - theta_adj) / 180.0)
    rho_adj = line.rho * (-1.0 if k % 2 else 1.0)
    return LineParam(rho=rho_adj, theta=theta_adj, score=line.score)


def _pick_side_lines(lines: list[LineParam], cx: float, cy: float) -> list[LineParam] | None:
    """Group peaks into two near-perpendicular angle clusters and keep the
    outermost line on each side of the blob centre: four border lines."""
    if len(lines) < 4:
        return None
    clusters: list[list[LineParam]] = []
    for ln in lines:
        for cl in clusters:
            if _angdiff(ln.theta, cl[0].theta) <= PARALLEL_TOL_DEG:
                cl.append(_align_to(cl[0].theta, ln))
                break
        else:
            clusters.append([ln])
    clusters.sort(key=lambda cl: -sum(l.score for l in cl))
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            a, b = clusters[i], clusters[j]
            if abs(_angdiff(a[0].theta, b[0].theta) - 90.0) > PERPENDICULAR_TOL_DEG:
                continue
            sides: list[LineParam] = []
            ok = True
            for cl in (a, b):
                pairs = [(l, _signed_distance(l, cx, cy)) for l in cl]
                neg = [p for p in pairs if p[1] < -5]
                pos = [p for p in pairs if p[1] > 5]
                if not neg or not pos:
                    ok = False
                    break
                sides.append(min(neg, key=lambda t: t[1])[0])  # outermost each side
                sides.append(max(pos, key=lambda t: t[1])[0])
            if ok:
                return sides
    return None


def _refine_sides(
    boundary_xs: np.ndarray, boundary_ys: np.ndarray, sides: list[LineParam], cx: float, cy: float
) -> list[LineParam] | None:
    refined = []
    for line in sides:
        for _ in range(2):
            d = point_line_distance(boundary_xs, boundary_ys, line)
            sel = d <= REFINE_BAND_PX
            if sel.sum() < 10:
                return None
            fit = _fit_line_tls(boundary_xs[sel], boundary_ys[sel])
            if fit is None:
                return None
            line = fit
        # push outward: the true edge lies half a pixel beyond pixel centres
        s = np.sign(_signed_distance(line, cx, cy))
        line = LineParam(rho=line.rho - s * EDGE_OUTWARD_OFFSET, theta=line.theta, score=line.score)
        refined.append(line)
    return refined


def _corners_from_sides(sides: list[LineParam]) -> np.ndarray | None:
    from ..imaging import line_intersection

    a0, a1, b0, b1 = sides
    pts = []
    for p in (a0, a1):
        for q in (b0, b1):
            xy = line_intersection(p, q)
            if xy is None:
                return None
            pts.append(xy)
    pts = np.array(pts)
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    ordered = pts[np.argsort(ang)]
    if not _is_convex(ordered):
        return None
    return ordered


def _ring_path(spec: ChartSpec, inset: float, n_per_side: int = 24) -> np.ndarray:
    """Closed rectangular path at ``inset`` inside the black outer rectangle
    (negative inset walks outside, into the white ring)."""
    w, h = spec.outer_width, spec.outer_height
    t = np.linspace(0, 1, n_per_side, endpoint=False)
    top = np.stack([inset + t * (w - 2 * inset), np.full_like(t, inset)], axis=1)
    right = np.stack([np.full_like(t, w - inset), inset + t * (h - 2 * inset)], axis=1)
    bottom = np.stack([w - inset - t * (w - 2 * inset), np.full_like(t, h - inset)], axis=1)
    left = np.stack([np.full_like(t, inset), h - inset - t * (h - 2 * inset)], axis=1)
    return np.vstack([top, right, bottom, left])


def _cell_grid(spec: ChartSpec, row: int, col: int, frac: float = 0.5, n: int = 10) -> np.ndarray:
    """Sample grid over the central ``frac`` of a patch cell, model coords."""
    x0, y0 = spec.cell_origin(row, col)
    cs = spec.cell_size
    margin = (1.0 - frac) / 2.0 * cs
    xs = np.linspace(x0 + margin, x0 + cs - margin, n)
    ys = np.linspace(y0 + margin, y0 + cs - margin, n)
    gx, gy = np.meshgrid(xs, ys)
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def _sample_patches(img_float: np.ndarray, H: np.ndarray, spec: ChartSpec) -> np.ndarray:
    values = np.zeros((24, 3))
    for p in spec.patches:
        pts = apply_homography(H, _cell_grid(spec, p.row, p.col))
        values[p.id] = sample_bilinear(img_float, pts).mean(axis=0)
    return values


def _orientation_score(img_float: np.ndarray, H: np.ndarray, spec: ChartSpec) -> float | None:
    """Validate rings and the achromatic row; lower score = better fit.

    Returns None when the candidate fails any structural check.
    """
    grey_w = np.array([0.299, 0.587, 0.114])

    black_pts = apply_homography(H, _ring_path(spec, spec.black_border / 2.0))
    black_val = sample_bilinear(img_float, black_pts) @ grey_w
    if black_val.mean() > 0.45:
        return None
    white_pts = apply_homography(H, _ring_path(spec, -spec.white_border / 2.0))
    white_val = sample_bilinear(img_float, white_pts) @ grey_w
    if white_val.mean() < 0.55:
        return None

    group1 = sorted((p for p in spec.patches if p.group == 1), key=lambda p: sum(p.reference_rgb))
    lum = []
    chroma = []
    for p in group1:
        vals = sample_bilinear(img_float, apply_homography(H, _cell_grid(spec, p.row, p.col, n=6)))
        mean = vals.mean(axis=0)
        lum.append(float(mean @ grey_w))
        chroma.append(float(mean.max() - mean.min()))
    lum = np.array(lum)
    if lum[-1] - lum[0] < 0.3:  # black-to-white sweep must span the row
        return None
    if np.any(np.diff(lum) < -0.02):  # luminance must rise along the row
        return None
    return float(np.mean(chroma))


def detect_chart(img: Raster, spec: ChartSpec) -> ChartDetection:
    """Find the chart; raises ChartNotFoundError / AmbiguousChartError."""
    if img.height < 100 or img.width < 100:
        raise ValueError("image too small for chart detection")
    grey = rgb_to_grey(img) if img.channels == 3 else None
    if grey is None:
        raise ValueError("chart detection requires a colour image")
    try:
        t = otsu_threshold(grey)
    except DegenerateHistogramError:
        raise ChartNotFoundError("flat image") from None
    dark = BinaryMask(grey.data < t)
    comps = connected_components(dark, 8)
    areas = np.bincount(comps.data.ravel())
    order = np.argsort(areas[1:])[::-1] + 1 if len(areas) > 1 else []

    img_float = img.as_float()
    detections: list[ChartDetection] = []
    for lab in list(order)[:MAX_CANDIDATES]:
        if areas[lab] < MIN_CANDIDATE_AREA:
            break
        # Fill each dark component on its own so a dark scene cannot swallow
        # the border ring, then erode/reconstruct to drop marginal specks.
        filled = fill_holes(BinaryMask(comps.data == lab))
        remnant = erode(filled, 2)
        if not remnant.data.any():
            continue
        blob = reconstruct(filled, remnant)
        blob = binary_open(blob, 3)
        if not blob.data.any():
            continue
        boundary = BinaryMask(blob.data & ~erode(blob, 1).data)
        ys, xs = np.nonzero(boundary.data)
        if len(xs) < 40:
            continue
        cx, cy = xs.mean(), ys.mean()
        min_votes = max(18, int(0.2 * np.sqrt(blob.count())))
        lines = hough_lines(boundary, theta_step=1.0, min_votes=min_votes)
        sides = _pick_side_lines(lines[:12], cx, cy)
        if sides is None:
            continue
        sides = _refine_sides(xs.astype(float), ys.astype(float), sides, cx, cy)
        if sides is None:
            continue
        corners = _corners_from_sides(sides)
        if corners is None:
            continue
        best = None
        for k in range(4):
            cand = np.roll(corners, -k, axis=0)
            top = np.linalg.norm(cand[1] - cand[0]) + np.linalg.norm(cand[2] - cand[3])
            side = np.linalg.norm(cand[2] - cand[1]) + np.linalg.norm(cand[3] - cand[0])
            if side <= 0:
                continue
            model_aspect = spec.outer_width / spec.outer_height
            if not (0.75 * model_aspect <= top / side <= 1.3 * model_aspect):
                continue
            H = homography_from_corners(spec.corner_points(), cand)
            score = _orientation_score(img_float, H, spec)
            if score is not None and (best is None or score < best[0]):
                best = (score, cand, H)
        if best is None:
            continue
        _, cand, H = best
        detections.append(
            ChartDetection(
                corners=cand,
                patch_values=_sample_patches(img_float, H, spec),
                homography=H,
            )
        )
    if not detections:
        raise ChartNotFoundError("no chart quadrilateral survived validation")
    if len(detections) > 1:
        raise AmbiguousChartError(f"{len(detections)} candidate charts found")
    return detections[0]


def chart_region_mask(img: Raster, detection: ChartDetection, spec: ChartSpec) -> BinaryMask:
    """Pixels covered by the chart including its white ring."""
    wb = spec.white_border
    model = np.array(
        [
            [-wb, -wb],
            [spec.outer_width + wb, -wb],
            [spec.outer_width + wb, spec.outer_height + wb],
            [-wb, spec.outer_height + wb],
        ]
    )
    quad = apply_homography(detection.homography, model)
    ys, xs = np.mgrid[0 : img.height, 0 : img.width]
    inside = np.ones(ys.shape, dtype=bool)
    for i in range(4):
        a = quad[i]
        b = quad[(i + 1) % 4]
        cross = (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])
        inside &= cross >= 0
    return BinaryMask(inside)
