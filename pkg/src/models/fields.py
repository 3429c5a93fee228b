"""
Per-pixel fields, triangulations and feature stacks
"""
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from core.exceptions.handlers import DimensionError, InputException
from models.enums import HeadMode
from models.geometry import DensePointSet


def _frozen(array: np.ndarray, dtype=np.float64) -> np.ndarray:
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Normalized distance D(p) to the boundary set, plus the raw distances"""
    values: np.ndarray
    raw: np.ndarray
    denominator: float
    denominator_clamped: bool = False

    def __post_init__(self):
        values = _frozen(self.values)
        raw = _frozen(self.raw)
        if values.ndim != 2 or values.shape != raw.shape:
            raise DimensionError("distance field grids must be 2-D and agree", actual=list(values.shape))
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise InputException("distances must be finite and non-negative", error_code="INVALID_FIELD")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "raw", raw)

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    def header(self) -> Dict[str, Any]:
        return {
            "kind": "distance",
            "height": self.height,
            "width": self.width,
            "denominator": self.denominator,
            "denominator_clamped": self.denominator_clamped,
        }


@dataclass(frozen=True, eq=False)
class ProbField:
    """Sampling probability P(p); uniform over the band support"""
    values: np.ndarray
    delta: float

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise DimensionError("probability field must be 2-D", actual=values.ndim)
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def support(self) -> np.ndarray:
        return self.values > 0

    def header(self) -> Dict[str, Any]:
        return {"kind": "probability", "height": self.height, "width": self.width, "delta": self.delta}


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Counterclockwise triangles over deduplicated, lexicographically sorted vertices"""
    vertices: DensePointSet
    triangles: np.ndarray

    def __post_init__(self):
        triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if len(triangles) and (triangles.min() < 0 or triangles.max() >= self.vertices.n):
            raise InputException("triangle references a missing vertex", error_code="INVALID_TRIANGULATION")
        triangles.setflags(write=False)
        object.__setattr__(self, "triangles", triangles)

    def __len__(self) -> int:
        return int(len(self.triangles))

    def signed_areas(self) -> np.ndarray:
        xy = self.vertices.xy
        a, b, c = xy[self.triangles[:, 0]], xy[self.triangles[:, 1]], xy[self.triangles[:, 2]]
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    def area(self) -> float:
        return float(np.sum(self.signed_areas()))

    def to_dict(self) -> Dict[str, List]:
        """Convert to dictionary for JSON serialization"""
        return {"vertices": self.vertices.points.tolist(), "triangles": self.triangles.tolist()}


@dataclass(frozen=True, eq=False)
class ScoreMap:
    """Per-pixel interpolated score in [0, 1]"""
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True, eq=False)
class FeatureField:
    """Channel-major feature grid (C, H, W); value of cell (r, c) sits at coordinate (c, r)"""
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 2:
            values = values[None]
        if values.ndim != 3 or values.shape[0] < 1:
            raise DimensionError("feature field must be (channels, height, width)", actual=list(values.shape))
        if not np.all(np.isfinite(values)):
            raise InputException("feature values must be finite", error_code="INVALID_FIELD")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def channels(self) -> int:
        return int(self.values.shape[0])

    @property
    def height(self) -> int:
        return int(self.values.shape[1])

    @property
    def width(self) -> int:
        return int(self.values.shape[2])


@dataclass(frozen=True, eq=False)
class OffsetFieldStack:
    """n (dx, dy) displacement grids, shape (n, 2, H, W)"""
    fields: np.ndarray
    stride: float = 1.0

    def __post_init__(self):
        fields = np.asarray(self.fields, dtype=np.float64)
        if fields.ndim != 4 or fields.shape[1] != 2:
            raise DimensionError("offset fields must be shaped (n, 2, height, width)", actual=list(fields.shape))
        object.__setattr__(self, "fields", _frozen(fields))

    @property
    def n(self) -> int:
        return int(self.fields.shape[0])

    def field(self, index: int) -> FeatureField:
        return FeatureField(self.fields[index])


@dataclass(frozen=True, eq=False)
class AttributeMapStack:
    """s*s position-sensitive score grids, shape (s*s, H, W); bin (row, col) is map row*s + col"""
    maps: np.ndarray
    bins: int
    stride: float = 1.0

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=np.float64)
        if self.bins < 1:
            raise DimensionError("attribute maps need at least one bin per side", actual=self.bins)
        if maps.ndim != 3 or maps.shape[0] != self.bins * self.bins:
            raise DimensionError(
                "attribute maps must be shaped (bins*bins, height, width)",
                expected=self.bins * self.bins,
                actual=list(maps.shape)
            )
        object.__setattr__(self, "maps", _frozen(maps))

    def map(self, row: int, col: int) -> FeatureField:
        return FeatureField(self.maps[row * self.bins + col])


@dataclass(frozen=True)
class HeadCost:
    """Per-object multiply-accumulate counts of one head layout"""
    n: int
    k: int
    channels: int
    mode: HeadMode
    tower: int
    classification: int
    regression: int
    attribute: int

    @property
    def total(self) -> int:
        return self.tower + self.classification + self.regression + self.attribute

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "channels": self.channels,
            "mode": self.mode.value,
            "macs": self.total,
            "tower": self.tower,
            "classification": self.classification,
            "regression": self.regression,
            "attribute": self.attribute,
        }
