"""Exact planar predicates on integer and rational coordinates.

Every predicate here is evaluated with Python integers or
:class:`fractions.Fraction`, so no rounding ever takes place.
"""
from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from typing import NamedTuple, Sequence

#: Largest coordinate magnitude accepted from external input.
COORD_LIMIT = 2**40


class Point(NamedTuple):
    x: int
    y: int


class RationalPoint(NamedTuple):
    x: Fraction
    y: Fraction


class Segment(NamedTuple):
    a: Point
    b: Point


PointSet = Sequence[Point]


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class NotApplicable(ValueError):
    """Raised when a predicate is called outside its precondition."""


def cross(p, q, r):
    """Twice the signed area of the triangle ``pqr``."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orientation(p, q, r) -> Orientation:
    d = cross(p, q, r)
    if d > 0:
        return Orientation.CCW
    if d < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def as_points(coords) -> list[Point]:
    return [Point(int(x), int(y)) for x, y in coords]


def is_general_position(ps: PointSet) -> bool:
    if len(set(map(tuple, ps))) != len(ps):
        return False
    for p, q, r in itertools.combinations(ps, 3):
        if cross(p, q, r) == 0:
            return False
    return True


def segments_properly_cross(s, t) -> bool:
    """True iff the relative interiors of ``s`` and ``t`` meet.

    Segments sharing an endpoint never cross; collinear overlaps are not
    considered since inputs are in general position.
    """
    a, b = s
    c, d = t
    if a == c or a == d or b == c or b == d:
        return False
    d1 = cross(a, b, c)
    d2 = cross(a, b, d)
    d3 = cross(c, d, a)
    d4 = cross(c, d, b)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4)


def convex_hull(ps: PointSet) -> list[int]:
    """Indices of the hull vertices of ``ps`` in counterclockwise order.

    Monotone chain; collinear boundary points are dropped. For fewer than
    three points every index is returned.
    """
    n = len(ps)
    if n < 3:
        return list(range(n))
    order = sorted(range(n), key=lambda i: (ps[i][0], ps[i][1]))

    def chain(idx):
        out: list[int] = []
        for i in idx:
            while len(out) >= 2 and cross(ps[out[-2]], ps[out[-1]], ps[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def point_in_triangle_interior(p, a, b, c) -> bool:
    o = cross(a, b, c)
    if o == 0:
        raise NotApplicable("degenerate triangle")
    s = 1 if o > 0 else -1
    return cross(a, b, p) * s > 0 and cross(b, c, p) * s > 0 and cross(c, a, p) * s > 0


def _interior_endpoint(s, t):
    """The unique endpoint of ``s`` or ``t`` strictly inside the hull of the
    other three, or None when the four endpoints are in convex position."""
    pts = [s[0], s[1], t[0], t[1]]
    for i, p in enumerate(pts):
        a, b, c = (q for j, q in enumerate(pts) if j != i)
        if point_in_triangle_interior(p, a, b, c):
            return i
    return None


def in_stabbing_position(s, t) -> bool:
    """Convex hull of the four endpoints is a triangle."""
    return _interior_endpoint(s, t) is not None


def stabs(l, s) -> bool:
    """``l`` stabs ``s``: an endpoint of ``l`` is interior to the hull."""
    i = _interior_endpoint(l, s)
    if i is None:
        raise NotApplicable("segments are not in stabbing position")
    return i < 2


def clip_convex_region(region, p, q):
    """Intersect a convex polygon with the open half-plane left of ``p -> q``.

    ``region`` lists vertices counterclockwise with :class:`Fraction` (or int)
    coordinates. Returns the clipped polygon with exact rational vertices, or
    an empty list when the intersection has empty interior.
    """
    if not region:
        return []
    # closed clipping yields the closure of the open intersection
    out: list[RationalPoint] = []
    m = len(region)
    side = [cross(p, q, v) for v in region]
    for i in range(m):
        u, v = region[i], region[(i + 1) % m]
        su, sv = side[i], side[(i + 1) % m]
        if su >= 0:
            out.append(RationalPoint(Fraction(u[0]), Fraction(u[1])))
        if su * sv < 0:
            t = Fraction(su) / (su - sv)
            out.append(RationalPoint(u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1])))
    dedup: list[RationalPoint] = []
    for v in out:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    if len(dedup) < 3 or polygon_area2(dedup) <= 0:
        return []
    return dedup


def polygon_area2(poly) -> Fraction:
    m = len(poly)
    return sum(
        poly[i][0] * poly[(i + 1) % m][1] - poly[(i + 1) % m][0] * poly[i][1]
        for i in range(m)
    )


def centroid(poly) -> RationalPoint:
    """Area centroid of a convex polygon with positive area."""
    a2 = polygon_area2(poly)
    cx = cy = Fraction(0)
    m = len(poly)
    for i in range(m):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % m]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return RationalPoint(cx / (3 * a2), cy / (3 * a2))


def box(xmin, ymin, xmax, ymax) -> list[RationalPoint]:
    f = Fraction
    return [
        RationalPoint(f(xmin), f(ymin)),
        RationalPoint(f(xmax), f(ymin)),
        RationalPoint(f(xmax), f(ymax)),
        RationalPoint(f(xmin), f(ymax)),
    ]


def bounding_box(ps: PointSet) -> tuple[int, int, int, int]:
    xs = [p[0] for p in ps]
    ys = [p[1] for p in ps]
    return min(xs), min(ys), max(xs), max(ys)


def crossing_number(ps: PointSet) -> int:
    """Number of properly crossing pairs of edges of the complete graph."""
    edges = list(itertools.combinations(range(len(ps)), 2))
    return sum(
        segments_properly_cross((ps[a], ps[b]), (ps[c], ps[d]))
        for (a, b), (c, d) in itertools.combinations(edges, 2)
    )


def read_points(text: str) -> list[Point]:
    """Parse the point-set text format: ``n`` then ``n`` lines ``x y``."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty point file")
    try:
        n = int(lines[0][0])
        pts = [Point(int(a), int(b)) for a, b in lines[1 : n + 1]]
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed point file: {exc}") from None
    if len(pts) != n or len(lines) != n + 1:
        raise ValueError(f"expected {n} points, found {len(lines) - 1}")
    for p in pts:
        if abs(p.x) > COORD_LIMIT or abs(p.y) > COORD_LIMIT:
            raise ValueError(f"coordinate out of range: {p}")
    return pts


def write_points(ps: PointSet) -> str:
    return "".join([f"{len(ps)}\n"] + [f"{p[0]} {p[1]}\n" for p in ps])
