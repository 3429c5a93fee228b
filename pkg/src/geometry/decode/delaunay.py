"""
Incremental Delaunay triangulation (Bowyer-Watson with ghost triangles)

Points are deduplicated and sorted lexicographically before insertion, so
vertex i of the output is the i-th smallest distinct point and the result
does not depend on input order. Inserting in sorted order puts every new
point strictly outside the current hull; the cavity is seeded from a
conflicting ghost triangle and grown across shared edges.
"""
from collections import deque
from typing import Dict, List, Set, Tuple

import numpy as np

from core.exceptions.handlers import DegenerateInputError
from core.logging.setup import get_logger
from geometry.decode.predicates import incircle, orient2d
from models.fields import Triangulation
from models.geometry import DensePointSet

logger = get_logger("geometry.delaunay")

GHOST = -1

Triangle = Tuple[int, int, int]


def canonical_points(pts: DensePointSet) -> DensePointSet:
    """Distinct points in lexicographic (x, y) order; duplicates keep their largest score"""
    x, y, a = pts.points[:, 0], pts.points[:, 1], pts.points[:, 2]
    order = np.lexsort((-a, y, x))
    ordered = pts.points[order]
    keep = np.ones(len(ordered), dtype=bool)
    keep[1:] = np.any(ordered[1:, :2] != ordered[:-1, :2], axis=1)
    return DensePointSet(ordered[keep])


class _Mesh:
    """Triangles keyed by id with a directed-edge index; GHOST marks the vertex at infinity"""

    def __init__(self, coords: List[Tuple[float, float]]):
        self.coords = coords
        self.triangles: Dict[int, Triangle] = {}
        self.edges: Dict[Tuple[int, int], int] = {}
        self.ghosts: Set[int] = set()
        self._next_id = 0

    def add(self, tri: Triangle) -> None:
        tid = self._next_id
        self._next_id += 1
        self.triangles[tid] = tri
        a, b, c = tri
        for edge in ((a, b), (b, c), (c, a)):
            self.edges[edge] = tid
        if c == GHOST:
            self.ghosts.add(tid)

    def remove(self, tid: int) -> None:
        a, b, c = self.triangles.pop(tid)
        for edge in ((a, b), (b, c), (c, a)):
            if self.edges.get(edge) == tid:
                del self.edges[edge]
        self.ghosts.discard(tid)

    def conflicts(self, tid: int, p: int) -> bool:
        a, b, c = self.triangles[tid]
        pc = self.coords[p]
        if c != GHOST:
            return incircle(self.coords[a], self.coords[b], self.coords[c], pc) > 0
        turn = orient2d(self.coords[a], self.coords[b], pc)
        if turn != 0:
            return turn > 0
        # collinear: conflict only strictly inside the hull edge
        (ax, ay), (bx, by) = self.coords[a], self.coords[b]
        return min(ax, bx) <= pc[0] <= max(ax, bx) and min(ay, by) <= pc[1] <= max(ay, by) \
            and pc != self.coords[a] and pc != self.coords[b]

    def insert(self, p: int) -> None:
        seed = next((tid for tid in sorted(self.ghosts) if self.conflicts(tid, p)), None)
        if seed is None:
            raise DegenerateInputError(f"point {p} is not outside the current hull")

        cavity = {seed}
        boundary: List[Tuple[int, int]] = []
        queue = deque([seed])
        while queue:
            tid = queue.popleft()
            a, b, c = self.triangles[tid]
            for u, v in ((a, b), (b, c), (c, a)):
                neighbour = self.edges.get((v, u))
                if neighbour is None:
                    boundary.append((u, v))
                elif neighbour in cavity:
                    continue
                elif self.conflicts(neighbour, p):
                    cavity.add(neighbour)
                    queue.append(neighbour)
                else:
                    boundary.append((u, v))

        for tid in cavity:
            self.remove(tid)
        for u, v in boundary:
            if u == GHOST:
                self.add((v, p, GHOST))
            elif v == GHOST:
                self.add((p, u, GHOST))
            else:
                self.add((u, v, p))

    def real_triangles(self) -> List[Triangle]:
        return [tri for tri in self.triangles.values() if GHOST not in tri]


def _first_off_line(coords: List[Tuple[float, float]]) -> int:
    for j in range(2, len(coords)):
        if orient2d(coords[0], coords[1], coords[j]) != 0:
            return j
    return -1


def _canonical_triangle(tri: Triangle) -> Triangle:
    i = tri.index(min(tri))
    return tri[i:] + tri[:i]


def delaunay(pts: DensePointSet) -> Triangulation:
    """Delaunay triangulation of the distinct points, counterclockwise in (x, y)"""
    vertices = canonical_points(pts)
    coords = [(float(x), float(y)) for x, y in vertices.xy]
    if len(coords) < 3:
        raise DegenerateInputError(f"triangulation needs 3 distinct points, got {len(coords)}")
    pivot = _first_off_line(coords)
    if pivot < 0:
        raise DegenerateInputError("all points are collinear")

    mesh = _Mesh(coords)
    first = (0, 1, pivot) if orient2d(coords[0], coords[1], coords[pivot]) > 0 else (0, pivot, 1)
    mesh.add(first)
    a, b, c = first
    for u, v in ((a, b), (b, c), (c, a)):
        mesh.add((v, u, GHOST))

    order = list(range(2, pivot)) + list(range(pivot + 1, len(coords)))
    for p in order:
        mesh.insert(p)

    triangles = sorted(_canonical_triangle(tri) for tri in mesh.real_triangles())
    logger.debug("triangulated", extra={"vertices": len(coords), "triangles": len(triangles)})
    return Triangulation(vertices=vertices, triangles=np.asarray(triangles, dtype=np.int64).reshape(-1, 3))
