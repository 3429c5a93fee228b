"""
Robust orientation and incircle signs

Floating-point evaluation with a static error bound; anything the bound
cannot certify is recomputed exactly with rationals.
"""
from fractions import Fraction
from typing import Tuple

Point = Tuple[float, float]

_EPSILON = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_ICC_BOUND = (10.0 + 96.0 * _EPSILON) * _EPSILON


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def orient2d(a: Point, b: Point, c: Point) -> int:
    """+1 if a, b, c turn counterclockwise (x right, y up), -1 clockwise, 0 collinear"""
    left = (a[0] - c[0]) * (b[1] - c[1])
    right = (a[1] - c[1]) * (b[0] - c[0])
    det = left - right
    bound = _CCW_BOUND * (abs(left) + abs(right))
    if abs(det) > bound or (left == 0.0 and right == 0.0):
        return _sign(det)
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (*a, *b, *c))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle(a: Point, b: Point, c: Point, d: Point) -> int:
    """+1 if d lies strictly inside the circle through counterclockwise a, b, c"""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if abs(det) > _ICC_BOUND * permanent:
        return _sign(det)
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a: Point, b: Point, c: Point, d: Point) -> int:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    rows = []
    for p in (a, b, c):
        px, py = Fraction(p[0]) - dx, Fraction(p[1]) - dy
        rows.append((px, py, px * px + py * py))
    (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
    det = (
        al * (bx * cy - cx * by)
        + bl * (cx * ay - ax * cy)
        + cl * (ax * by - bx * ay)
    )
    return _sign(det)
