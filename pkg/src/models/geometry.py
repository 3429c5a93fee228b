"""
Geometry value types: masks, polygons, boxes and point sets
Pixel (r, c) covers [c, c+1) x [r, r+1); its center is (c + 0.5, r + 0.5)
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from core.exceptions.handlers import (
    CardinalityError,
    DegeneratePolygonError,
    DimensionError,
    InputException,
)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Row-major grid of foreground (True) / background (False) cells"""
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.ndim != 2:
            raise DimensionError("mask cells must be a 2-D grid", expected=2, actual=cells.ndim)
        if cells.shape[0] < 1 or cells.shape[1] < 1:
            raise DimensionError("mask height and width must be at least 1", actual=list(cells.shape))
        object.__setattr__(self, "cells", _frozen(cells != 0))

    @classmethod
    def empty(cls, height: int, width: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def height(self) -> int:
        return int(self.cells.shape[0])

    @property
    def width(self) -> int:
        return int(self.cells.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def area(self) -> int:
        return int(np.count_nonzero(self.cells))

    def is_empty(self) -> bool:
        return self.area == 0

    def to_array(self) -> np.ndarray:
        return np.array(self.cells, dtype=bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.cells, other.cells))

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class Polygon:
    """Implicitly closed polygon; consecutive duplicate vertices are dropped"""
    vertices: np.ndarray

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=np.float64)
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise DegeneratePolygonError("polygon vertices must be (x, y) pairs")
        if len(vertices) > 1:
            keep = np.any(vertices != np.roll(vertices, 1, axis=0), axis=1)
            keep[0] = True
            vertices = vertices[keep]
            # the closing edge may still repeat the first vertex
            while len(vertices) > 1 and np.array_equal(vertices[-1], vertices[0]):
                vertices = vertices[:-1]
        if len(vertices) < 3:
            raise DegeneratePolygonError(
                f"polygon needs at least 3 distinct vertices, got {len(vertices)}",
                vertex_count=len(vertices)
            )
        if not np.all(np.isfinite(vertices)):
            raise DegeneratePolygonError("polygon vertices must be finite", vertex_count=len(vertices))
        object.__setattr__(self, "vertices", _frozen(vertices))

    @classmethod
    def from_flat(cls, coords: Sequence[float]) -> "Polygon":
        """COCO layout [x0, y0, x1, y1, ...]"""
        coords = np.asarray(coords, dtype=np.float64)
        if coords.size % 2:
            raise DegeneratePolygonError("flat polygon needs an even number of coordinates")
        return cls(coords.reshape(-1, 2))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Edge start and end points, closing edge included"""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def perimeter(self) -> float:
        start, end = self.edges()
        return float(np.sum(np.hypot(end[:, 0] - start[:, 0], end[:, 1] - start[:, 1])))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in pixel coordinates"""
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min <= self.x_max and self.y_min <= self.y_max):
            raise InputException(f"box corners out of order: {self}", error_code="INVALID_BOX")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x >= self.x_min) & (x <= self.x_max) & (y >= self.y_min) & (y <= self.y_max)

    def to_list(self) -> List[float]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(frozen=True, eq=False)
class BoundaryPointSet:
    """Centers of boundary pixels, (x, y) rows"""
    points: np.ndarray
    height: int
    width: int

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)
        object.__setattr__(self, "points", _frozen(points))

    def __len__(self) -> int:
        return len(self.points)

    def pixel_indices(self) -> Tuple[np.ndarray, np.ndarray]:
        """(rows, cols) of the pixels holding the points"""
        return (
            np.floor(self.points[:, 1]).astype(np.int64),
            np.floor(self.points[:, 0]).astype(np.int64),
        )


@dataclass(frozen=True, eq=False)
class DensePointSet:
    """n attributed points (x, y, a) with a in [0, 1]"""
    points: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 3:
            raise CardinalityError("points must be (x, y, a) triples")
        if len(points) < 1:
            raise CardinalityError("a dense point set needs at least one point")
        if not np.all(np.isfinite(points)):
            raise InputException("point coordinates and scores must be finite", error_code="NON_FINITE_POINTS")
        if np.any(points[:, 2] < 0.0) or np.any(points[:, 2] > 1.0):
            raise InputException("attribute scores must lie in [0, 1]", error_code="SCORE_RANGE")
        object.__setattr__(self, "points", _frozen(points))

    @classmethod
    def from_xy(cls, xy: np.ndarray, scores: Any = 1.0) -> "DensePointSet":
        xy = np.asarray(xy, dtype=np.float64).reshape(-1, 2)
        attributes = np.broadcast_to(np.asarray(scores, dtype=np.float64), (len(xy),))
        return cls(np.column_stack([xy, attributes]))

    @property
    def n(self) -> int:
        return int(len(self.points))

    @property
    def xy(self) -> np.ndarray:
        return self.points[:, :2]

    @property
    def scores(self) -> np.ndarray:
        return self.points[:, 2]

    def __len__(self) -> int:
        return self.n

    def with_scores(self, scores: np.ndarray) -> "DensePointSet":
        return DensePointSet(np.column_stack([self.xy, np.asarray(scores, dtype=np.float64)]))

    def with_xy(self, xy: np.ndarray) -> "DensePointSet":
        return DensePointSet(np.column_stack([np.asarray(xy, dtype=np.float64), self.scores]))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {"n": self.n, "points": self.points.tolist()}


@dataclass(frozen=True)
class SamplerSeed:
    """Seed of the PCG64 generator used by stochastic encoders"""
    seed: int = 0
    keys: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise InputException(f"seed must be a 64-bit unsigned integer, got {self.seed}", error_code="INVALID_SEED")

    def derive(self, *keys: int) -> "SamplerSeed":
        """Child seed for an independent, order-free stream"""
        return SamplerSeed(self.seed, self.keys + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.keys)
        return np.random.Generator(np.random.PCG64(sequence))
