"""
Point-set decoders
"""
from geometry.decode.decoders import (
    concave_hull,
    decode,
    decode_grid,
    decode_mesh,
    decode_triangulation,
    grid_layout,
    interpolate_scores,
)
from geometry.decode.delaunay import delaunay

__all__ = [
    "concave_hull",
    "decode",
    "decode_grid",
    "decode_mesh",
    "decode_triangulation",
    "delaunay",
    "grid_layout",
    "interpolate_scores",
]
