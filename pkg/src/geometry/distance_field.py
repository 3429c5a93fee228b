"""
Exact Euclidean distance to a boundary set and the band sampling field built on it
"""
import math
from typing import List

import numpy as np

from core.exceptions.handlers import EmptyBandError, EmptyBoundaryError, OutOfBoundsError
from core.logging.setup import get_logger
from models.configs import SamplingBandConfig
from models.fields import DistanceField, ProbField
from models.geometry import BoundaryPointSet

logger = get_logger("geometry.distance_field")


def _lower_envelope(f: np.ndarray) -> np.ndarray:
    """1-D squared distance transform: min over q of (p - q)^2 + f[q].

    Lower envelope of parabolas rooted at the finite entries of f;
    returns inf everywhere when f has no finite entry.
    """
    n = len(f)
    out = np.full(n, np.inf)
    sites = np.flatnonzero(np.isfinite(f)).tolist()
    if not sites:
        return out
    values = f.tolist()

    def meet(p: int, q: int) -> float:
        return ((values[q] + q * q) - (values[p] + p * p)) / (2 * q - 2 * p)

    roots: List[int] = [sites[0]]
    bounds: List[float] = [-math.inf, math.inf]
    for q in sites[1:]:
        s = meet(roots[-1], q)
        while s <= bounds[-2]:
            roots.pop()
            bounds.pop()
            bounds[-1] = math.inf
            s = meet(roots[-1], q)
        roots.append(q)
        bounds[-1] = s
        bounds.append(math.inf)

    k = 0
    for p in range(n):
        while bounds[k + 1] < p:
            k += 1
        root = roots[k]
        out[p] = (p - root) * (p - root) + values[root]
    return out


def squared_distance_grid(seeds: np.ndarray) -> np.ndarray:
    """Squared pixel-center distance to the nearest True cell, two separable passes"""
    height, width = seeds.shape
    columns = np.where(seeds, 0.0, np.inf)
    for c in range(width):
        columns[:, c] = _lower_envelope(columns[:, c])
    result = np.empty_like(columns)
    for r in range(height):
        result[r] = _lower_envelope(columns[r])
    return result


def distance_map(boundary: BoundaryPointSet, height: int, width: int) -> DistanceField:
    """Normalized distance D(p) from every pixel center to the boundary set.

    The denominator is sqrt(w * h) over the boundary set's coordinate extents,
    each extent clamped below at 1 pixel.
    """
    if len(boundary) == 0:
        raise EmptyBoundaryError()
    rows, cols = boundary.pixel_indices()
    outside = (rows < 0) | (rows >= height) | (cols < 0) | (cols >= width)
    if np.any(outside):
        raise OutOfBoundsError(
            "boundary point outside the distance grid",
            index=int(np.flatnonzero(outside)[0])
        )

    seeds = np.zeros((height, width), dtype=bool)
    seeds[rows, cols] = True
    raw = np.sqrt(squared_distance_grid(seeds))

    extent_x = float(np.ptp(boundary.points[:, 0]))
    extent_y = float(np.ptp(boundary.points[:, 1]))
    clamped = extent_x < 1.0 or extent_y < 1.0
    denominator = math.sqrt(max(extent_x, 1.0) * max(extent_y, 1.0))
    if clamped:
        logger.debug(
            "degenerate boundary extent clamped",
            extra={"extent_x": extent_x, "extent_y": extent_y}
        )
    return DistanceField(
        values=raw / denominator,
        raw=raw,
        denominator=denominator,
        denominator_clamped=clamped,
    )


def band_support(d: DistanceField, delta: float) -> np.ndarray:
    """Pixels inside the closed band D(p) <= delta"""
    return d.values <= delta


def sampling_probability(d: DistanceField, band: SamplingBandConfig) -> ProbField:
    """Uniform probability over the band support, zero elsewhere"""
    support = band_support(d, band.delta)
    count = int(np.count_nonzero(support))
    if count == 0:
        raise EmptyBandError(f"no pixel within delta={band.delta}", delta=band.delta)
    return ProbField(values=np.where(support, 1.0 / count, 0.0), delta=band.delta)


def widen_band(d: DistanceField, band: SamplingBandConfig, needed: int) -> SamplingBandConfig:
    """Double delta until at least `needed` pixels qualify.

    A zero delta first jumps to the smallest positive distance so doubling
    can make progress.
    """
    total = d.height * d.width
    needed = min(needed, total)
    current = band
    while int(np.count_nonzero(band_support(d, current.delta))) < needed:
        if current.delta == 0.0:
            positive = d.values[d.values > 0]
            current = SamplingBandConfig(delta=float(positive.min()))
        else:
            current = current.widened()
    if current != band:
        logger.debug(
            "sampling band widened",
            extra={"delta": band.delta, "effective_delta": current.delta, "needed": needed}
        )
    return current
