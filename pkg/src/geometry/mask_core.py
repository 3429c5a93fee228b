"""
Binary masks: rasterization, IoU, boundary extraction, RLE, contours
"""
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from core.exceptions.handlers import (
    DegeneratePolygonError,
    DimensionError,
    EmptyMaskError,
    MalformedRLEError,
)
from core.logging.setup import get_logger
from models.geometry import BinaryMask, BoundaryPointSet, Box, Polygon

logger = get_logger("geometry.mask_core")

# screen directions with y pointing down: east, south, west, north
_EAST, _SOUTH, _WEST, _NORTH = (1, 0), (0, 1), (-1, 0), (0, -1)


def _even_odd(vertices: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Crossing parity of a ray cast towards +x.

    Half-open in both axes: an edge counts when it spans py with
    y0 <= py < y1 (either direction) and lies strictly right of px. Top-left
    fill: centers on top and left edges fall inside, on bottom and right
    edges outside, so polygons sharing an edge never both claim a pixel.
    """
    px, py = np.broadcast_arrays(px, py)
    inside = np.zeros(px.shape, dtype=bool)
    start, end = vertices, np.roll(vertices, -1, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        for (x0, y0), (x1, y1) in zip(start, end):
            crosses = (y0 > py) != (y1 > py)
            if not np.any(crosses):
                continue
            xi = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            inside ^= crosses & (px < xi)
    return inside


def _on_boundary(vertices: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Points lying exactly on some polygon edge"""
    px, py = np.broadcast_arrays(px, py)
    hit = np.zeros(px.shape, dtype=bool)
    start, end = vertices, np.roll(vertices, -1, axis=0)
    for (x0, y0), (x1, y1) in zip(start, end):
        cross = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        within = (
            (px >= min(x0, x1)) & (px <= max(x0, x1))
            & (py >= min(y0, y1)) & (py <= max(y0, y1))
        )
        hit |= (cross == 0) & within
    return hit


def points_in_polygon(vertices: np.ndarray, x: np.ndarray, y: np.ndarray, closed: bool = True) -> np.ndarray:
    """Even-odd membership of arbitrary points; closed includes the edges"""
    vertices = np.asarray(vertices, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    inside = _even_odd(vertices, x, y)
    if closed:
        inside |= _on_boundary(vertices, x, y)
    return inside


def rasterize_polygon(poly: Polygon, height: int, width: int, closed: bool = False) -> BinaryMask:
    """Pixel (r, c) is foreground iff its center lies inside poly (even-odd)"""
    if not isinstance(poly, Polygon):
        poly = Polygon(poly)
    if len(poly) < 3:
        raise DegeneratePolygonError("polygon needs at least 3 vertices", vertex_count=len(poly))
    if height < 1 or width < 1:
        raise DimensionError("raster height and width must be at least 1", actual=[height, width])
    cx = (np.arange(width, dtype=np.float64) + 0.5)[None, :]
    cy = (np.arange(height, dtype=np.float64) + 0.5)[:, None]
    cells = _even_odd(poly.vertices, cx, cy)
    if closed:
        cells |= _on_boundary(poly.vertices, cx, cy)
    return BinaryMask(cells)


def mask_from_array(array: np.ndarray) -> BinaryMask:
    """Any nonzero cell is foreground"""
    return BinaryMask(np.asarray(array) != 0)


def _check_same_shape(a: BinaryMask, b: BinaryMask) -> None:
    if a.shape != b.shape:
        raise DimensionError("masks must share height and width", expected=list(a.shape), actual=list(b.shape))


def mask_iou(a: BinaryMask, b: BinaryMask) -> float:
    """|a & b| / |a | b|; two empty masks agree perfectly"""
    _check_same_shape(a, b)
    union = int(np.count_nonzero(a.cells | b.cells))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(a.cells & b.cells)) / union


def boundary_points(mask: BinaryMask) -> BoundaryPointSet:
    """Centers of foreground pixels with a 4-neighbour that is background or off-grid"""
    if mask.is_empty():
        raise EmptyMaskError()
    padded = np.pad(mask.cells, 1, constant_values=False)
    core = padded[1:-1, 1:-1]
    exposed = ~padded[:-2, 1:-1] | ~padded[2:, 1:-1] | ~padded[1:-1, :-2] | ~padded[1:-1, 2:]
    rows, cols = np.nonzero(core & exposed)
    points = np.column_stack([cols + 0.5, rows + 0.5])
    logger.debug("boundary extracted", extra={"boundary_points": len(points), "area": mask.area})
    return BoundaryPointSet(points, mask.height, mask.width)


def rle_encode(mask: BinaryMask) -> List[int]:
    """COCO uncompressed RLE: column-major runs, first run counts background"""
    flat = mask.cells.reshape(-1, order="F")
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate([[0], change, [flat.size]])
    counts = np.diff(bounds).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return [int(c) for c in counts]


def rle_decode(counts: Sequence[int], height: int, width: int) -> BinaryMask:
    """Inverse of rle_encode"""
    counts = np.asarray(list(counts), dtype=np.int64)
    if height < 1 or width < 1:
        raise MalformedRLEError(f"RLE size must be positive, got {[height, width]}")
    if counts.ndim != 1 or np.any(counts < 0):
        raise MalformedRLEError("RLE counts must be non-negative integers")
    total = int(counts.sum())
    if total != height * width:
        raise MalformedRLEError(
            f"RLE counts sum to {total}, expected {height * width}",
            details={"sum": total, "size": [height, width]}
        )
    values = (np.arange(len(counts)) % 2).astype(bool)
    flat = np.repeat(values, counts)
    return BinaryMask(flat.reshape((height, width), order="F"))


def rle_to_dict(mask: BinaryMask) -> Dict[str, List[int]]:
    """COCO field layout {"size": [h, w], "counts": [...]}"""
    return {"size": [mask.height, mask.width], "counts": rle_encode(mask)}


def mask_bbox(mask: BinaryMask) -> Box:
    """Box over foreground pixel centers; single-pixel extents widen by 0.25 px each way"""
    if mask.is_empty():
        raise EmptyMaskError()
    rows, cols = np.nonzero(mask.cells)
    x_min, x_max = cols.min() + 0.5, cols.max() + 0.5
    y_min, y_max = rows.min() + 0.5, rows.max() + 0.5
    if x_min == x_max:
        x_min, x_max = x_min - 0.25, x_max + 0.25
    if y_min == y_max:
        y_min, y_max = y_min - 0.25, y_max + 0.25
    return Box(float(x_min), float(y_min), float(x_max), float(y_max))


def largest_component(mask: BinaryMask) -> BinaryMask:
    """Largest 4-connected foreground component; ties go to the lowest label"""
    if mask.is_empty():
        raise EmptyMaskError()
    labels, count = ndimage.label(mask.cells)
    if count == 1:
        return mask
    sizes = np.bincount(labels.reshape(-1))[1:]
    return BinaryMask(labels == int(np.argmax(sizes)) + 1)


def _crack_edges(cells: np.ndarray) -> Dict[Tuple[int, int], List[Tuple[int, int]]]:
    padded = np.pad(cells, 1, constant_values=False)
    core = padded[1:-1, 1:-1]
    outgoing: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    sides = (
        (~padded[:-2, 1:-1], (0, 0), _EAST),
        (~padded[1:-1, 2:], (1, 0), _SOUTH),
        (~padded[2:, 1:-1], (1, 1), _WEST),
        (~padded[1:-1, :-2], (0, 1), _NORTH),
    )
    for exposed, (ox, oy), direction in sides:
        rows, cols = np.nonzero(core & exposed)
        for r, c in zip(rows.tolist(), cols.tolist()):
            outgoing.setdefault((c + ox, r + oy), []).append(direction)
    return outgoing


def _trace_loops(outgoing: Dict[Tuple[int, int], List[Tuple[int, int]]]) -> List[List[Tuple[int, int]]]:
    loops = []
    remaining = {vertex: list(dirs) for vertex, dirs in outgoing.items()}
    for start in sorted(outgoing, key=lambda v: (v[1], v[0])):
        while remaining.get(start):
            direction = remaining[start].pop(0)
            corners = [start]
            vertex = (start[0] + direction[0], start[1] + direction[1])
            while True:
                choices = remaining.get(vertex) or []
                if not choices:
                    break
                # right turn first keeps diagonal neighbours in separate loops
                dx, dy = direction
                for preferred in ((-dy, dx), (dx, dy), (dy, -dx)):
                    if preferred in choices:
                        break
                else:
                    preferred = choices[0]
                choices.remove(preferred)
                if preferred != direction:
                    corners.append(vertex)
                direction = preferred
                vertex = (vertex[0] + direction[0], vertex[1] + direction[1])
            if len(corners) >= 3:
                loops.append(corners)
    return loops


def _shoelace(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def trace_contour(mask: BinaryMask) -> Polygon:
    """Outer pixel-edge contour of the largest 4-connected component.

    Vertices sit on pixel corners, start at the top-left corner and run
    clockwise on screen; collinear corners are dropped.
    """
    component = largest_component(mask)
    loops = _trace_loops(_crack_edges(component.cells))
    best = max(loops, key=lambda loop: _shoelace(np.asarray(loop, dtype=np.float64)))
    vertices = np.asarray(best, dtype=np.float64)
    first = int(np.lexsort((vertices[:, 0], vertices[:, 1]))[0])
    return Polygon(np.roll(vertices, -first, axis=0))


def polygon_area(poly: Polygon) -> float:
    """Absolute shoelace area"""
    return abs(_shoelace(poly.vertices))


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Monotone chain hull, counterclockwise in (x, y), collinear points dropped"""
    pts = np.unique(np.asarray(points, dtype=np.float64).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        return pts

    def cross(o, a, b) -> float:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.asarray(lower[:-1] + upper[:-1])
