"""
Deterministic synthetic mask corpus: Fourier blobs, rectangles and rings
"""
from typing import List

import numpy as np

from core.exceptions.handlers import InvalidCountError
from core.logging.setup import get_logger
from geometry.mask_core import rasterize_polygon
from models.geometry import BinaryMask, Polygon, SamplerSeed

logger = get_logger("harness.synthetic")

CONTOUR_SAMPLES = 96
HARMONICS = 4


def _centers(size: int):
    c = np.arange(size, dtype=np.float64) + 0.5
    return c[None, :], c[:, None]


def fourier_blob(rng: np.random.Generator, size: int) -> BinaryMask:
    """Star-shaped blob whose radius is a low-order random Fourier series"""
    center = rng.uniform(0.35, 0.65, size=2) * size
    base = rng.uniform(0.06, 0.36) * size
    theta = np.linspace(0.0, 2.0 * np.pi, CONTOUR_SAMPLES, endpoint=False)
    radius = np.ones_like(theta)
    for k in range(1, HARMONICS + 1):
        amplitude = rng.uniform(0.0, 0.3 / k)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        radius += amplitude * np.cos(k * theta + phase)
    radius = base * np.maximum(radius, 0.2)
    xy = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    return rasterize_polygon(Polygon(np.clip(xy, 0.0, size)), size, size)


def random_rectangle(rng: np.random.Generator, size: int) -> BinaryMask:
    """Axis-aligned solid rectangle on whole pixels"""
    w, h = rng.integers(max(1, size // 10), max(2, int(size * 0.8)) + 1, size=2)
    x0 = int(rng.integers(0, size - w + 1))
    y0 = int(rng.integers(0, size - h + 1))
    cells = np.zeros((size, size), dtype=bool)
    cells[y0:y0 + h, x0:x0 + w] = True
    return BinaryMask(cells)


def ring(rng: np.random.Generator, size: int) -> BinaryMask:
    """Annulus: outer disk minus a concentric inner disk"""
    outer = rng.uniform(0.15, 0.42) * size
    inner = outer * rng.uniform(0.3, 0.7)
    cx, cy = rng.uniform(0.45, 0.55, size=2) * size
    px, py = _centers(size)
    dist2 = (px - cx) ** 2 + (py - cy) ** 2
    return BinaryMask((dist2 <= outer * outer) & ~(dist2 <= inner * inner))


_GENERATORS = (fourier_blob, random_rectangle, ring)


def synthetic_corpus(seed: SamplerSeed, count: int, size: int) -> List[BinaryMask]:
    """count masks of size x size, cycling blob, rectangle, ring; reproducible from seed"""
    if count < 1:
        raise InvalidCountError(f"corpus size must be at least 1, got {count}", count=count)
    if size < 8:
        raise InvalidCountError(f"synthetic masks need at least 8x8 pixels, got {size}", count=size)
    masks = []
    for index in range(count):
        rng = seed.derive(index).generator()
        mask = _GENERATORS[index % len(_GENERATORS)](rng, size)
        if mask.is_empty():
            cells = mask.to_array()
            cells[size // 2, size // 2] = True
            mask = BinaryMask(cells)
        masks.append(mask)
    logger.debug("synthetic corpus generated", extra={"count": count, "size": size})
    return masks
