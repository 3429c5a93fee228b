"""
k-nearest-neighbour concave hull

Gift wrapping restricted to the k nearest unvisited points: from the
topmost point, each step sweeps clockwise from the edge just walked and
takes the first neighbour whose edge does not cross the hull so far. A
failed walk, or a hull that leaves points outside, retries with k + 1;
once k covers every point the convex hull is returned.
"""
import math
from typing import List, Optional

import numpy as np

from core.logging.setup import get_logger
from geometry.mask_core import convex_hull, points_in_polygon

logger = get_logger("geometry.concave_hull")

_TWO_PI = 2.0 * math.pi


def _cross(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _crosses_any(p: np.ndarray, q: np.ndarray, starts: np.ndarray, ends: np.ndarray) -> bool:
    """Segment pq touches or crosses any of the given segments"""
    if not len(starts):
        return False
    d1 = _cross(starts[:, 0], starts[:, 1], ends[:, 0], ends[:, 1], p[0], p[1])
    d2 = _cross(starts[:, 0], starts[:, 1], ends[:, 0], ends[:, 1], q[0], q[1])
    d3 = _cross(p[0], p[1], q[0], q[1], starts[:, 0], starts[:, 1])
    d4 = _cross(p[0], p[1], q[0], q[1], ends[:, 0], ends[:, 1])
    proper = (np.sign(d1) * np.sign(d2) < 0) & (np.sign(d3) * np.sign(d4) < 0)
    if np.any(proper):
        return True

    def on_segment(d, ax, ay, bx, by, px, py):
        return (d == 0) & (np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx)) \
            & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by))

    touching = (
        on_segment(d1, starts[:, 0], starts[:, 1], ends[:, 0], ends[:, 1], p[0], p[1])
        | on_segment(d2, starts[:, 0], starts[:, 1], ends[:, 0], ends[:, 1], q[0], q[1])
        | on_segment(d3, p[0], p[1], q[0], q[1], starts[:, 0], starts[:, 1])
        | on_segment(d4, p[0], p[1], q[0], q[1], ends[:, 0], ends[:, 1])
    )
    return bool(np.any(touching))


class ConcaveHull:
    """Concave hull of distinct 2-D points"""

    def __init__(self, points: np.ndarray):
        self.points = np.unique(np.asarray(points, dtype=np.float64).reshape(-1, 2), axis=0)

    def _start(self) -> int:
        return int(np.lexsort((self.points[:, 0], self.points[:, 1]))[0])

    def _walk(self, k: int) -> Optional[List[int]]:
        pts = self.points
        first = self._start()
        available = np.ones(len(pts), dtype=bool)
        available[first] = False
        hull = [first]
        current = first
        back_angle = math.pi
        step = 2

        while (current != first or step == 2) and available.any():
            if step == 5:
                available[first] = True
            candidates = np.flatnonzero(available)
            offsets = pts[candidates] - pts[current]
            distances = np.hypot(offsets[:, 0], offsets[:, 1])
            nearest = np.lexsort((candidates, distances))[:k]
            candidates, offsets, distances = candidates[nearest], offsets[nearest], distances[nearest]

            sweep = np.mod(back_angle - np.arctan2(offsets[:, 1], offsets[:, 0]), _TWO_PI)
            sweep[sweep == 0.0] = _TWO_PI
            ranked = candidates[np.lexsort((distances, sweep))]

            hull_pts = pts[hull]
            chosen = None
            for candidate in ranked.tolist():
                closing = candidate == first
                # skip the edge ending at current, and the one starting at first when closing
                lo = 1 if closing else 0
                starts, ends = hull_pts[lo:-2], hull_pts[lo + 1:-1]
                if not _crosses_any(pts[current], pts[candidate], starts, ends):
                    chosen = candidate
                    break
            if chosen is None:
                return None

            back = pts[current] - pts[chosen]
            back_angle = math.atan2(back[1], back[0])
            current = chosen
            hull.append(chosen)
            available[chosen] = False
            step += 1

        if hull[-1] == first:
            hull.pop()
        elif len(hull) > 3 and _crosses_any(pts[hull[-1]], pts[first], pts[hull[1:-2]], pts[hull[2:-1]]):
            return None
        if len(hull) < 3:
            return None
        inside = points_in_polygon(pts[hull], pts[:, 0], pts[:, 1], closed=True)
        if not inside.all():
            return None
        return hull

    def compute(self, k: int = 3) -> np.ndarray:
        """Hull vertices in walking order; convex hull when no k succeeds"""
        if len(self.points) <= 3:
            return self.points
        for kk in range(max(k, 3), len(self.points)):
            hull = self._walk(kk)
            if hull is not None:
                logger.debug("concave hull closed", extra={"k": kk, "vertices": len(hull)})
                return self.points[hull]
        logger.debug("concave hull fell back to convex hull", extra={"points": len(self.points)})
        return convex_hull(self.points)
