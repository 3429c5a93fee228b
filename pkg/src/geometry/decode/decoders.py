"""
Point-set to mask decoders: triangulation, concave hull, grid upsampling
"""
from typing import Optional

import numpy as np

from core.exceptions.handlers import (
    ConfigurationError,
    InsufficientPointsError,
    InvalidCountError,
    LayoutError,
)
from core.logging.setup import get_logger
from geometry.decode.concave_hull import ConcaveHull
from geometry.decode.delaunay import delaunay
from geometry.field_ops import bilinear_sample
from geometry.mask_core import points_in_polygon, rasterize_polygon
from geometry.sampling import point_set_bbox, sample_grid
from models.configs import DecodeConfig, GridSpec
from models.enums import Decoder
from models.fields import FeatureField, ScoreMap, Triangulation
from models.geometry import BinaryMask, Box, DensePointSet, Polygon

logger = get_logger("geometry.decoders")


def _edge_function(xy: np.ndarray, u: np.ndarray, v: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Signed area of (u, v, p), evaluated from the lower-index endpoint.

    Both triangles sharing an edge then see bit-identical magnitudes, so no
    pixel center falls between them.
    """
    swap = u > v
    lo = np.where(swap, v, u)
    hi = np.where(swap, u, v)
    ox, oy = xy[lo, 0], xy[lo, 1]
    value = (xy[hi, 0] - ox) * (py - oy) - (xy[hi, 1] - oy) * (px - ox)
    return np.where(swap, -value, value)


def interpolate_scores(tri: Triangulation, height: int, width: int) -> ScoreMap:
    """Barycentric score per pixel center; lowest triangle index wins on shared edges, 0 outside the hull"""
    values = np.zeros((height, width), dtype=np.float64)
    if not len(tri):
        return ScoreMap(values)
    xy = tri.vertices.xy
    scores = tri.vertices.scores
    a, b, c = tri.triangles[:, 0], tri.triangles[:, 1], tri.triangles[:, 2]
    corners = xy[tri.triangles]

    # pixel-center ranges covered by each triangle's bounding box
    col_lo = np.maximum(np.ceil(corners[:, :, 0].min(axis=1) - 0.5), 0).astype(np.int64)
    col_hi = np.minimum(np.floor(corners[:, :, 0].max(axis=1) - 0.5), width - 1).astype(np.int64)
    row_lo = np.maximum(np.ceil(corners[:, :, 1].min(axis=1) - 0.5), 0).astype(np.int64)
    row_hi = np.minimum(np.floor(corners[:, :, 1].max(axis=1) - 0.5), height - 1).astype(np.int64)
    n_cols = np.maximum(col_hi - col_lo + 1, 0)
    n_rows = np.maximum(row_hi - row_lo + 1, 0)
    counts = n_cols * n_rows
    if counts.sum() == 0:
        return ScoreMap(values)

    owner = np.repeat(np.arange(len(tri)), counts)
    local = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    rows = row_lo[owner] + local // n_cols[owner]
    cols = col_lo[owner] + local % n_cols[owner]
    px, py = cols + 0.5, rows + 0.5

    ta, tb, tc = a[owner], b[owner], c[owner]
    w_a = _edge_function(xy, tb, tc, px, py)
    w_b = _edge_function(xy, tc, ta, px, py)
    w_c = _edge_function(xy, ta, tb, px, py)
    inside = (w_a >= 0) & (w_b >= 0) & (w_c >= 0)

    owner, rows, cols = owner[inside], rows[inside], cols[inside]
    w_a, w_b, w_c = w_a[inside], w_b[inside], w_c[inside]
    ta, tb, tc = ta[inside], tb[inside], tc[inside]
    blended = (w_a * scores[ta] + w_b * scores[tb] + w_c * scores[tc]) / (w_a + w_b + w_c)
    low = np.minimum(np.minimum(scores[ta], scores[tb]), scores[tc])
    high = np.maximum(np.maximum(scores[ta], scores[tb]), scores[tc])
    blended = np.clip(blended, low, high)

    # candidates are ordered by triangle index, so the first hit per pixel is the lowest
    pixel = rows * width + cols
    _, first = np.unique(pixel, return_index=True)
    values.reshape(-1)[pixel[first]] = blended[first]
    return ScoreMap(values)


def decode_mesh(tri: Triangulation, height: int, width: int, cfg: Optional[DecodeConfig] = None) -> BinaryMask:
    """Threshold the interpolated score map of an existing mesh at tau (foreground where score >= tau)"""
    cfg = cfg or DecodeConfig()
    return BinaryMask(interpolate_scores(tri, height, width).values >= cfg.tau)


def decode_triangulation(pts: DensePointSet, height: int, width: int, cfg: Optional[DecodeConfig] = None) -> BinaryMask:
    return decode_mesh(delaunay(pts), height, width, cfg)


def _rasterize_outline(vertices: np.ndarray, height: int, width: int) -> BinaryMask:
    """Closed rasterization; hulls collapsed to a segment keep the pixels on it"""
    if len(vertices) >= 3:
        return rasterize_polygon(Polygon(vertices), height, width, closed=True)
    cx = (np.arange(width, dtype=np.float64) + 0.5)[None, :]
    cy = (np.arange(height, dtype=np.float64) + 0.5)[:, None]
    return BinaryMask(points_in_polygon(vertices, cx, cy, closed=True))


def concave_hull(pts: DensePointSet, cfg: Optional[DecodeConfig], height: int, width: int) -> BinaryMask:
    """Rasterized k-NN concave hull of the points scoring at least tau"""
    cfg = cfg or DecodeConfig()
    foreground = np.unique(pts.xy[pts.scores >= cfg.tau], axis=0)
    if len(foreground) < 3:
        raise InsufficientPointsError(
            f"concave hull needs 3 distinct foreground points, got {len(foreground)}",
            available=len(foreground)
        )
    hull = ConcaveHull(foreground).compute(cfg.hull_k)
    return _rasterize_outline(hull, height, width)


def grid_layout(pts: DensePointSet, box: Optional[Box] = None) -> GridSpec:
    """Recover the lattice spec of a grid-sampled point set; LayoutError when it is not one"""
    box = box or point_set_bbox(pts)
    try:
        spec = GridSpec.for_box(box, pts.n)
    except (ConfigurationError, InvalidCountError) as exc:
        raise LayoutError(f"points do not form a lattice: {exc.message}") from exc
    return spec


def _lattice_scores(pts: DensePointSet, spec: GridSpec, box: Box) -> np.ndarray:
    lattice = sample_grid(box, spec).xy
    order = np.lexsort((pts.xy[:, 0], pts.xy[:, 1]))
    if pts.n != spec.n or not np.allclose(pts.xy[order], lattice, rtol=0.0, atol=1e-9):
        raise LayoutError(f"{pts.n} points do not match the {spec.side}x{spec.side} lattice over {box.to_list()}")
    return pts.scores[order].reshape(spec.side, spec.side)


def decode_grid(
    pts: DensePointSet,
    spec: GridSpec,
    box: Box,
    height: int,
    width: int,
    cfg: Optional[DecodeConfig] = None,
) -> BinaryMask:
    """Bilinearly upsample the s x s score lattice over the box and threshold at tau"""
    cfg = cfg or DecodeConfig()
    grid = _lattice_scores(pts, spec, box)
    cx = np.arange(width, dtype=np.float64) + 0.5
    cy = np.arange(height, dtype=np.float64) + 0.5
    px, py = np.meshgrid(cx, cy)
    inside = box.contains(px, py)
    cells = np.zeros((height, width), dtype=bool)
    if not inside.any():
        return BinaryMask(cells)
    u = (px[inside] - box.x_min) / spec.alpha * (spec.side - 1)
    v = (py[inside] - box.y_min) / spec.beta * (spec.side - 1)
    upsampled = bilinear_sample(FeatureField(grid), u, v)[0]
    cells[inside] = upsampled >= cfg.tau
    return BinaryMask(cells)


def decode(
    pts: DensePointSet,
    decoder: Decoder,
    height: int,
    width: int,
    cfg: Optional[DecodeConfig] = None,
    spec: Optional[GridSpec] = None,
    box: Optional[Box] = None,
) -> BinaryMask:
    """Run the named decoder; without spec/box the grid decoder reads its lattice off the points"""
    decoder = Decoder(decoder)
    if decoder is Decoder.TRIANGULATION:
        return decode_triangulation(pts, height, width, cfg)
    if decoder is Decoder.CONCAVE:
        return concave_hull(pts, cfg, height, width)
    box = box or point_set_bbox(pts)
    return decode_grid(pts, spec or grid_layout(pts, box), box, height, width, cfg)
