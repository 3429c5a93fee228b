"""
Point-set encoders: boundary, grid and distance transform sampling
"""
from functools import cached_property
from typing import Optional

import numpy as np

from core.exceptions.handlers import (
    DegeneratePolygonError,
    DensePointsException,
    InfeasibleCountError,
    InvalidCountError,
    OutOfBoundsError,
)
from core.logging.setup import get_logger
from geometry.distance_field import band_support, distance_map, sampling_probability, widen_band
from geometry.mask_core import boundary_points, mask_bbox, trace_contour
from models.configs import GridSpec, SamplingBandConfig
from models.enums import Strategy
from models.fields import DistanceField, ProbField
from models.geometry import BinaryMask, Box, DensePointSet, Polygon, SamplerSeed

logger = get_logger("geometry.sampling")


def _check_count(n: int) -> None:
    if n < 1:
        raise InvalidCountError(f"point count must be at least 1, got {n}", count=n)


def sample_boundary(poly: Polygon, n: int) -> DensePointSet:
    """n points at uniform arc length along the closed polygon, from vertex 0; scores 1"""
    _check_count(n)
    start, end = poly.edges()
    lengths = np.hypot(end[:, 0] - start[:, 0], end[:, 1] - start[:, 1])
    perimeter = float(np.sum(lengths))
    if not perimeter > 0.0:
        raise DegeneratePolygonError("polygon has zero perimeter", vertex_count=len(poly))

    offsets = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    positions = np.arange(n, dtype=np.float64) * (perimeter / n)
    edge = np.clip(np.searchsorted(offsets, positions, side="right") - 1, 0, len(lengths) - 1)
    fraction = (positions - offsets[edge]) / lengths[edge]
    xy = start[edge] + fraction[:, None] * (end[edge] - start[edge])
    return DensePointSet.from_xy(xy, 1.0)


def sample_grid(box: Box, spec: GridSpec) -> DensePointSet:
    """s x s lattice spanning the box, row-major (point r*s + c); scores 1"""
    side = spec.side
    steps = np.arange(side, dtype=np.float64) / (side - 1)
    xs = box.x_min + spec.alpha * steps
    ys = box.y_min + spec.beta * steps
    grid_x, grid_y = np.meshgrid(xs, ys)
    return DensePointSet.from_xy(np.column_stack([grid_x.reshape(-1), grid_y.reshape(-1)]), 1.0)


def sample_dts(
    prob: ProbField,
    n: int,
    seed: SamplerSeed,
    band: SamplingBandConfig,
    d: DistanceField,
) -> DensePointSet:
    """n distinct pixel centers drawn uniformly without replacement from the band support.

    When the support holds fewer than n pixels the band is widened from d
    until it does. Scores start at 1.
    """
    _check_count(n)
    total = prob.height * prob.width
    if n > total:
        raise InfeasibleCountError(
            f"cannot draw {n} distinct pixels from a {prob.height}x{prob.width} grid",
            count=n,
            available=total
        )
    support = prob.support
    if int(np.count_nonzero(support)) < n:
        band = widen_band(d, band, n)
        support = band_support(d, band.delta)

    candidates = np.flatnonzero(support.reshape(-1))
    chosen = candidates[seed.generator().choice(len(candidates), size=n, replace=False)]
    rows, cols = np.divmod(chosen, prob.width)
    return DensePointSet.from_xy(np.column_stack([cols + 0.5, rows + 0.5]), 1.0)


def assign_attributes(pts: DensePointSet, mask: BinaryMask) -> DensePointSet:
    """Score 1 where the containing pixel is foreground, else 0"""
    cols = np.floor(pts.xy[:, 0]).astype(np.int64)
    rows = np.floor(pts.xy[:, 1]).astype(np.int64)
    outside = (rows < 0) | (rows >= mask.height) | (cols < 0) | (cols >= mask.width)
    if np.any(outside):
        index = int(np.flatnonzero(outside)[0])
        raise OutOfBoundsError(
            f"point {index} at {pts.xy[index].tolist()} lies outside the {mask.height}x{mask.width} grid",
            index=index
        )
    return pts.with_scores(mask.cells[rows, cols].astype(np.float64))


def point_set_bbox(pts: DensePointSet) -> Box:
    """Tight box around the point coordinates"""
    lo = pts.xy.min(axis=0)
    hi = pts.xy.max(axis=0)
    return Box(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


class MaskEncoder:
    """Encodes one mask with any strategy, caching the per-mask geometry"""

    def __init__(self, mask: BinaryMask, band: Optional[SamplingBandConfig] = None):
        self.mask = mask
        self.band = band or SamplingBandConfig()

    @cached_property
    def contour(self) -> Polygon:
        return trace_contour(self.mask)

    @cached_property
    def box(self) -> Box:
        return mask_bbox(self.mask)

    @cached_property
    def distance(self) -> DistanceField:
        return distance_map(boundary_points(self.mask), self.mask.height, self.mask.width)

    @cached_property
    def probability(self) -> ProbField:
        return sampling_probability(self.distance, self.band)

    @property
    def denominator_clamped(self) -> bool:
        """True when the distance normalization hit the 1-pixel extent clamp; false if no field exists"""
        try:
            return self.distance.denominator_clamped
        except DensePointsException:
            return False

    def encode(self, strategy: Strategy, n: int, seed: Optional[SamplerSeed] = None) -> DensePointSet:
        """Sample n points; grid and DTS points carry ground-truth scores, boundary points keep 1"""
        strategy = Strategy(strategy)
        if strategy is Strategy.BOUNDARY:
            return sample_boundary(self.contour, n)
        if strategy is Strategy.GRID:
            points = sample_grid(self.box, GridSpec.for_box(self.box, n))
        else:
            points = sample_dts(self.probability, n, seed or SamplerSeed(), self.band, self.distance)
        return assign_attributes(points, self.mask)


def encode_mask(
    mask: BinaryMask,
    strategy: Strategy,
    n: int,
    band: Optional[SamplingBandConfig] = None,
    seed: Optional[SamplerSeed] = None,
) -> DensePointSet:
    """One-shot encoding of a mask into n attributed points"""
    return MaskEncoder(mask, band).encode(strategy, n, seed)
