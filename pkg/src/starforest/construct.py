"""Explicit decompositions: broken double stars, staircases, comets, blow-ups."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from . import geom
from .geom import Point, Segment, cross
from .model import (
    Decomposition,
    Star,
    StarForest,
    is_plane,
    uncentered_vertices,
    validate_decomposition,
)

log = logging.getLogger(__name__)

MAX_K = 24


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SegmentArrangement:
    segments: tuple[Segment, ...]

    @property
    def points(self) -> list[Point]:
        """Endpoints ordered ``a_1..a_k, b_1..b_k``."""
        return [s.a for s in self.segments] + [s.b for s in self.segments]

    def matching(self) -> StarForest:
        k = len(self.segments)
        return StarForest(tuple(Star(i, (k + i,)) for i in range(k)))


@dataclass(frozen=True)
class ClusterPointSet:
    base: tuple[Point, ...]
    k: int
    points: tuple[Point, ...]
    cluster_of: tuple[tuple[int, int], ...]

    def index(self, j: int, l: int) -> int:
        return j * self.k + l


def broken_double_stars(n: int) -> Decomposition:
    """Matching ``{v_i, v_{i+k}}`` plus ``k`` forests of two balanced stars."""
    if n % 2 or not 4 <= n <= 64:
        raise ValueError(f"n must be even and in 4..64, got {n}")
    k = n // 2
    forests = [StarForest(tuple(Star(i, (i + k,)) for i in range(k)))]
    for i in range(k):
        left = Star(i, tuple((i + d) % n for d in range(1, k)))
        right = Star(i + k, tuple((i + k + d) % n for d in range(1, k)))
        forests.append(StarForest((left, right)))
    return Decomposition(n, tuple(forests))


def staircase_decomposition(k: int) -> Decomposition:
    """The ``k + 1`` forests shared by staircases, comets and hybrids.

    Vertex ``i`` is ``a_{i+1}``, vertex ``k + i`` is ``b_{i+1}``. Forest 0 is
    the matching with ``a_i`` designated as center.
    """
    A = lambda i: i
    B = lambda i: k + i
    forests = [StarForest(tuple(Star(A(i), (B(i),)) for i in range(k)))]
    for i in range(k):
        sa = Star(A(i), tuple([A(j) for j in range(i + 1, k)] + [B(m) for m in range(i)]))
        sb = Star(B(i), tuple([B(j) for j in range(i + 1, k)] + [A(m) for m in range(i)]))
        forests.append(StarForest(tuple(s for s in (sa, sb) if s.leaves)))
    return Decomposition(2 * k, tuple(forests))


def staircase_triangles(k: int):
    """Triangles ``(a_l, b_l, a_j)`` with ``l < j <= i`` required for each ``b_i``.

    Yields ``(i, [(l, j), ...])`` with 0-based indices.
    """
    for i in range(1, k):
        yield i, [(l, j) for l in range(i) for j in range(l + 1, i + 1)]


def _ccw(a, b, c):
    return (a, b, c) if cross(a, b, c) > 0 else (a, c, b)


def _cut(region, a, b, pairs):
    for l, j in pairs:
        t = _ccw(a[l], b[l], a[j])
        for u, v in zip(t, t[1:] + t[:1]):
            region = geom.clip_convex_region(region, u, v)
    return region


def _start_region(a, b):
    """Open top-right quadrant inside a box four times the current spread."""
    spread = max(abs(v) for p in a + b for v in p)
    region = geom.box(-4 * spread, -4 * spread, 4 * spread, 4 * spread)
    region = geom.clip_convex_region(region, (0, 0), (0, -1))
    return geom.clip_convex_region(region, (0, 0), (1, 0))


def _candidates(region, existing):
    c = geom.centroid(region)
    pulls = [
        ((c[0] * w + v[0]) / (w + 1), (c[1] * w + v[1]) / (w + 1))
        for w in (Fraction(1, 2), 1, 3, 7, 15)
        for v in region
    ]
    seen = set()
    for q in [c] + pulls:
        cand = Point(round(q[0]), round(q[1]))
        if cand in seen or cand in existing:
            continue
        seen.add(cand)
        inside = all(cross(u, v, cand) > 0 for u, v in zip(region, region[1:] + region[:1]))
        if inside and all(cross(p, r, cand) != 0 for p, r in itertools.combinations(existing, 2)):
            yield cand


def _place_b(a_chain: list[Point], k: int) -> list[Point]:
    """Place ``b_2..b_k`` on integer points inside the required open regions.

    The region for ``b_i`` is the region for ``b_{i-1}`` cut by the new
    triangles with apex ``a_i``, clipped exactly. Candidates are lattice
    roundings of the centroid and of points pulled toward its vertices; the
    one leaving the largest region for the next ``b`` wins. When no candidate
    is strictly inside and in general position, all coordinates are doubled.
    """
    a = list(a_chain)
    b = [Point(-a[0].x, 0)]
    new = {i: [(l, j) for l, j in pairs if j == i] for i, pairs in staircase_triangles(k)}
    region = _start_region(a, b)
    i = 1
    doublings = 0
    while i < k:
        here = _cut(region, a, b, new[i])
        if not here:
            raise ConstructionError(f"empty placement region for b_{i + 1}")
        best, best_area = None, -1
        for cand in _candidates(here, a + b):
            if i + 1 == k:
                best, best_area = cand, 1
                break
            nxt = _cut(here, a, b + [cand], new[i + 1])
            area = geom.polygon_area2(nxt) if nxt else 0
            if area > best_area:
                best, best_area = cand, area
        if best is None or best_area == 0:
            doublings += 1
            if doublings > 64:
                raise ConstructionError(f"could not place b_{i + 1}")
            a = [Point(2 * p.x, 2 * p.y) for p in a]
            b = [Point(2 * p.x, 2 * p.y) for p in b]
            region = [type(v)(2 * v[0], 2 * v[1]) for v in region]
            continue
        b.append(best)
        region = here
        i += 1
    return a + b


def _arrangement(points: list[Point], k: int) -> SegmentArrangement:
    return SegmentArrangement(tuple(Segment(points[i], points[k + i]) for i in range(k)))


def _check_k(k: int, low: int = 1):
    if not low <= k <= MAX_K:
        raise ValueError(f"k must be in {low}..{MAX_K}, got {k}")


def _finish(points, k):
    d = staircase_decomposition(k)
    if not geom.is_general_position(points):
        raise ConstructionError("constructed points are not in general position")
    bad = [fi for fi, f in enumerate(d.forests) if not is_plane(points, f)]
    if bad:
        raise ConstructionError(f"forests {bad} are not plane")
    return list(points), d, _arrangement(points, k)


def _arc(k: int, q: int, radius: int, shift: int) -> list[Point]:
    # rational points on a circle: s = i/sqrt(q) gives cos = (q-i^2)/(q+i^2), sin = 2 s/(1+s^2)
    return [
        Point(
            round(Fraction(radius * (q - i * i), q + i * i)) + shift,
            round(Fraction(2 * radius * i * math.isqrt(q), q + i * i)),
        )
        for i in range(k)
    ]


def _scaled_chain(make, hull_size, monotone=False) -> list[Point]:
    radius = 4
    while True:
        chain = make(radius)
        ps = chain + [Point(-chain[0].x, 0)]
        steps = all(q.x < p.x and q.y > p.y for p, q in zip(chain, chain[1:]))
        if (
            geom.is_general_position(ps)
            and len(geom.convex_hull(ps)) == hull_size(len(ps))
            and (steps or not monotone)
        ):
            return chain
        radius *= 2


def staircase_chain(k: int) -> list[Point]:
    """``a_1, ..., a_k`` on the upper-left quarter of a circle through
    ``a_1 = (-R, 0)``, at roughly equal angles, so that ``a_1..a_k, b_1`` is
    convex. Equal angles keep the placement regions from collapsing."""
    return _scaled_chain(lambda r: [Point(-p.x, p.y) for p in _arc(k, k * k, r, 0)], lambda m: m)


def comet_chain(k: int) -> list[Point]:
    """``a_1, ..., a_k`` on a circle centered at ``(-2R, 0)``, going up and to
    the left from ``a_1 = (-R, 0)``. The arc stays within 53 degrees, so all of
    ``a_2..a_{k-1}`` fall inside the triangle ``a_1 a_k b_1``."""
    return _scaled_chain(lambda r: _arc(k, 4 * k * k, r, -2 * r), lambda m: 3, monotone=True)


def staircase(k: int):
    """Points, decomposition and matching arrangement of the ``k``-staircase."""
    _check_k(k)
    return _finish(_place_b(staircase_chain(k), k), k)


def hybrid_chain(k: int, h: int, spread: int | None = None) -> list[Point]:
    """An a-chain that is concave up to ``a_m`` and convex afterwards.

    With ``m = k + 3 - h`` the hull of the finished point set is
    ``a_1, a_m, ..., a_k, b_1``, i.e. ``h`` points.
    """
    m = k + 3 - h
    y = spread or 4 * k
    pts = [Point(-y, 0)]
    pts += [Point(-i * y, (i - 1) * y * y - (i - 1) ** 2) for i in range(2, m + 1)]
    xm, ym = pts[-1]
    pts += [Point(xm - j * y, ym + y * y * j + j * j * y) for j in range(1, k - m + 1)]
    return pts


def hybrid(k: int, h: int):
    if not 2 <= k <= MAX_K:
        raise ValueError(f"k must be in 2..{MAX_K}, got {k}")
    if not 3 <= h <= k + 1:
        raise ValueError(f"hull size must be in 3..{k + 1}, got {h}")
    spread = 4 * k
    while True:
        chain = hybrid_chain(k, h, spread)
        if geom.is_general_position(chain + [Point(-chain[0].x, 0)]):
            break
        spread += 1
    return _finish(_place_b(chain, k), k)


def comet(k: int):
    """``k``-comet: same decomposition as the staircase, hull of size 3."""
    _check_k(k)
    if k == 1:
        return staircase(1)
    return _finish(_place_b(comet_chain(k), k), k)


def convex_ngon(n: int) -> list[Point]:
    if not 3 <= n <= 64:
        raise ValueError(f"n must be in 3..64, got {n}")
    return [Point(i, i * i) for i in range(n)]


def cluster_placement(base, k: int, scale: int = 2**20, attempts: int = 16) -> ClusterPointSet:
    """Replace every base point by ``k`` nearby points on a tiny parabola.

    Every transversal (one point per cluster) has the base's order type.
    """
    base = tuple(Point(*p) for p in base)
    if not geom.is_general_position(base):
        raise ValueError("base point set is not in general position")
    if k == 1:
        return ClusterPointSet(base, 1, base, tuple((j, 0) for j in range(len(base))))
    for _ in range(attempts):
        pts = tuple(
            Point(p.x * scale + l, p.y * scale + l * l) for p in base for l in range(1, k + 1)
        )
        cs = ClusterPointSet(base, k, pts, tuple((j, l) for j in range(len(base)) for l in range(k)))
        if _transversals_ok(cs) and geom.is_general_position(pts):
            return cs
        scale *= 2
    raise ConstructionError("cluster placement failed to preserve the order type")


def _transversals_ok(cs: ClusterPointSet) -> bool:
    k = cs.k
    for i, j, m in itertools.combinations(range(len(cs.base)), 3):
        want = geom.orientation(cs.base[i], cs.base[j], cs.base[m])
        for x, y, z in itertools.product(range(k), repeat=3):
            got = geom.orientation(
                cs.points[cs.index(i, x)], cs.points[cs.index(j, y)], cs.points[cs.index(m, z)]
            )
            if got != want:
                return False
    return True


def blow_up(base, d: Decomposition, k: int):
    """Blow every point up into ``k`` points and every forest into ``k`` forests.

    Requires every base vertex to be a designated center somewhere; the
    cluster edges of ``A_j`` go to the first forest in which ``a_j`` is a
    center.
    """
    if k < 1:
        raise ValueError("k must be positive")
    problems = validate_decomposition(d)
    if problems:
        raise ValueError(f"invalid base decomposition: {problems[0]}")
    missing = uncentered_vertices(d)
    if missing:
        raise ValueError(f"vertex {missing[0]} is never a center")
    for fi, f in enumerate(d.forests):
        if not is_plane(base, f):
            raise ValueError(f"forest {fi} is not plane on the base points")
    first: dict[int, int] = {}
    for fi, f in enumerate(d.forests):
        for c in sorted(f.centers()):
            first.setdefault(c, fi)
    cs = cluster_placement(base, k)
    idx = cs.index
    forests = []
    for fi, f in enumerate(d.forests):
        for l in range(k):
            stars = []
            for s in f.stars:
                if not s.leaves:
                    continue
                leaves = [idx(leaf, m) for leaf in s.leaves for m in range(k)]
                if first[s.center] == fi:
                    leaves += [idx(s.center, m) for m in range(l + 1, k)]
                stars.append(Star(idx(s.center, l), tuple(leaves)))
            forests.append(StarForest(tuple(stars)))
    return cs, Decomposition(len(cs.points), tuple(forests))


def remove_vertex(points, d: Decomposition, v: int):
    """Delete ``v`` and its edges; drop forests that become empty."""
    relabel = lambda u: u - (u > v)
    forests = []
    for f in d.forests:
        stars = []
        for s in f.stars:
            if s.center == v:
                continue
            leaves = tuple(relabel(u) for u in s.leaves if u != v)
            if leaves:
                stars.append(Star(relabel(s.center), leaves))
        if stars:
            forests.append(StarForest(tuple(stars)))
    pts = [p for i, p in enumerate(points) if i != v]
    return pts, Decomposition(d.n - 1, tuple(forests))


#: Crossing-minimal 6-point set (3 crossings, triangular hull) that splits
#: into 4 plane star-forests with every point a center.
WITNESS6 = (
    Point(0, 0), Point(255, 0), Point(0, 255), Point(85, 85), Point(155, 71), Point(63, 163),
)


def witness6():
    """WITNESS6 with a decomposition into 4 plane star-forests, every vertex a center."""
    from .search import SearchOptions, exists_decomposition

    pts = list(WITNESS6)
    d = exists_decomposition(6, SearchOptions(t=4, points=pts, require_all_centers=True))
    if d is None:
        raise ConstructionError("witness search failed")
    return pts, d
