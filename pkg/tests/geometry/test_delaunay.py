"""
Tests for robust predicates and the Delaunay triangulation
"""
from fractions import Fraction

import numpy as np
import pytest

from core.exceptions.handlers import DegenerateInputError
from geometry.decode.delaunay import canonical_points, delaunay
from geometry.decode.predicates import incircle, orient2d
from geometry.mask_core import convex_hull, polygon_area
from models.geometry import DensePointSet, Polygon


def circumcircle_violations(tri) -> int:
    """Vertices strictly inside some triangle's circumcircle, with a relative tolerance"""
    xy = tri.vertices.xy
    a, b, c = (xy[tri.triangles[:, i]][:, None, :] for i in range(3))
    d = xy[None, :, :]
    ad, bd, cd = a - d, b - d, c - d
    alift = (ad ** 2).sum(axis=2)
    blift = (bd ** 2).sum(axis=2)
    clift = (cd ** 2).sum(axis=2)
    det = (
        alift * (bd[..., 0] * cd[..., 1] - cd[..., 0] * bd[..., 1])
        + blift * (cd[..., 0] * ad[..., 1] - ad[..., 0] * cd[..., 1])
        + clift * (ad[..., 0] * bd[..., 1] - bd[..., 0] * ad[..., 1])
    )
    scale = (alift + blift + clift) ** 2
    return int(np.count_nonzero(det > 1e-10 * scale))


class TestPredicates:
    """Orientation and incircle signs"""

    def test_orient(self):
        """Orientation sign for left turns, right turns and collinear points"""
        assert orient2d((0, 0), (1, 0), (0, 1)) == 1
        assert orient2d((0, 0), (0, 1), (1, 0)) == -1
        assert orient2d((0, 0), (1, 1), (2, 2)) == 0

    def test_orient_near_collinear_is_exact(self):
        """Orientation agrees with exact rational arithmetic near collinearity"""
        a, b = (0.5, 0.5), (12.0, 12.0)
        for k in range(64):
            c = (24.0 + k * 2.0 ** -50, 24.0)
            ax, ay, bx, by, cx, cy = (Fraction(v) for v in (*a, *b, *c))
            exact = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
            assert orient2d(a, b, c) == (exact > 0) - (exact < 0)

    def test_incircle(self):
        """Incircle sign inside, outside and on the circle"""
        a, b, c = (0, 0), (2, 0), (0, 2)
        assert incircle(a, b, c, (0.5, 0.5)) == 1
        assert incircle(a, b, c, (5, 5)) == -1
        assert incircle(a, b, c, (2, 2)) == 0


class TestDelaunay:
    """Incremental Delaunay triangulation"""

    def test_single_triangle(self):
        """Three points give one counterclockwise triangle"""
        tri = delaunay(DensePointSet.from_xy([[0, 0], [4, 1], [1, 3]]))
        assert len(tri) == 1
        assert np.all(tri.signed_areas() > 0)

    def test_unit_square(self):
        """A square splits into two Delaunay triangles"""
        tri = delaunay(DensePointSet.from_xy([[0, 0], [1, 0], [1, 1], [0, 1]]))
        assert len(tri) == 2
        assert np.all(tri.signed_areas() > 0)
        assert tri.area() == pytest.approx(1.0)
        assert circumcircle_violations(tri) == 0

    def test_collinear(self):
        """Collinear input cannot be triangulated"""
        with pytest.raises(DegenerateInputError):
            delaunay(DensePointSet.from_xy([[0, 0], [1, 1], [2, 2], [3, 3]]))

    def test_too_few_distinct(self):
        """Duplicates do not count towards the three distinct points"""
        with pytest.raises(DegenerateInputError):
            delaunay(DensePointSet.from_xy([[0, 0], [1, 1], [0, 0], [1, 1]]))

    def test_duplicates_keep_highest_score(self):
        """Merged duplicates keep the highest score"""
        pts = DensePointSet(np.array([[0, 0, 0.2], [0, 0, 0.9], [1, 0, 0.0], [0, 1, 1.0]]))
        canonical = canonical_points(pts)
        assert canonical.n == 3
        assert canonical.points[0].tolist() == [0.0, 0.0, 0.9]

    def test_random_points_empty_circumcircle(self, rng):
        """Random clouds triangulate their convex hull with empty circumcircles"""
        for _ in range(20):
            pts = DensePointSet.from_xy(rng.uniform(0, 100, size=(200, 2)))
            tri = delaunay(pts)
            assert np.all(tri.signed_areas() > 0)
            assert circumcircle_violations(tri) == 0
            hull_area = polygon_area(Polygon(convex_hull(pts.xy)))
            assert tri.area() == pytest.approx(hull_area, rel=1e-6)

    def test_pixel_lattice(self):
        """Cocircular lattices still triangulate cleanly"""
        # maximally cocircular input
        xs, ys = np.meshgrid(np.arange(8) + 0.5, np.arange(6) + 0.5)
        tri = delaunay(DensePointSet.from_xy(np.column_stack([xs.ravel(), ys.ravel()])))
        assert len(tri) == 2 * 7 * 5
        assert tri.area() == pytest.approx(35.0)
        assert np.all(tri.signed_areas() > 0)
        assert circumcircle_violations(tri) == 0

    def test_permutation_invariant(self, rng):
        """Input order does not change the triangulation"""
        points = rng.uniform(0, 30, size=(60, 2)).round(0)
        a = delaunay(DensePointSet.from_xy(points))
        b = delaunay(DensePointSet.from_xy(points[rng.permutation(60)]))
        assert np.array_equal(a.vertices.points, b.vertices.points)
        assert np.array_equal(a.triangles, b.triangles)

    def test_five_hundred_points(self, rng):
        """Five hundred random points stay Delaunay"""
        tri = delaunay(DensePointSet.from_xy(rng.uniform(0, 64, size=(500, 2))))
        assert circumcircle_violations(tri) == 0
