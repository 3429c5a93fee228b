"""
JSON interchange schemas for masks, point sets and triangulations
"""
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from geometry.mask_core import rle_decode, rle_encode
from models.fields import Triangulation
from models.geometry import BinaryMask, DensePointSet


class RLEModel(BaseModel):
    """COCO uncompressed RLE: {"size": [h, w], "counts": [...]}"""
    size: List[int] = Field(..., min_length=2, max_length=2)
    counts: List[int]

    @field_validator("size")
    @classmethod
    def validate_size(cls, v):
        if any(dim < 1 for dim in v):
            raise ValueError("RLE size entries must be positive")
        return v

    @classmethod
    def from_mask(cls, mask: BinaryMask) -> "RLEModel":
        return cls(size=[mask.height, mask.width], counts=rle_encode(mask))

    def to_mask(self) -> BinaryMask:
        return rle_decode(self.counts, self.size[0], self.size[1])


class PointSetModel(BaseModel):
    """{"n": int, "points": [[x, y, a], ...]} with optional image extent"""
    n: int = Field(..., ge=1)
    points: List[List[float]]
    height: Optional[int] = Field(None, ge=1)
    width: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def validate_points(self):
        if len(self.points) != self.n:
            raise ValueError(f"n={self.n} but {len(self.points)} points given")
        if any(len(point) != 3 for point in self.points):
            raise ValueError("each point must be [x, y, a]")
        return self

    @classmethod
    def from_points(cls, pts: DensePointSet, height: Optional[int] = None, width: Optional[int] = None) -> "PointSetModel":
        return cls(**pts.to_dict(), height=height, width=width)

    def to_points(self) -> DensePointSet:
        return DensePointSet(np.asarray(self.points, dtype=np.float64))


class TriangulationModel(BaseModel):
    """{"vertices": [[x, y, a], ...], "triangles": [[i, j, k], ...]}"""
    vertices: List[List[float]]
    triangles: List[List[int]]

    @classmethod
    def from_triangulation(cls, tri: Triangulation) -> "TriangulationModel":
        return cls(**tri.to_dict())

    def to_triangulation(self) -> Triangulation:
        return Triangulation(
            vertices=DensePointSet(np.asarray(self.vertices, dtype=np.float64)),
            triangles=np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3),
        )
