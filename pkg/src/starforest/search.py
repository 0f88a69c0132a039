"""Backtracking search for (plane) star-forest decompositions of ``K_n``.

Edges are assigned to forests in lexicographic order. Each forest tracks a
role per vertex:

    FREE    not yet touched by the forest
    PAIRED  endpoint of a single-edge component (center still undecided)
    LEAF    attached to a center
    CENTER  center of a star with at least two leaves

An edge ``uv`` fits a forest iff one endpoint is FREE and the other is not a
LEAF, which is exactly the condition for staying a star-forest. Every edge
added therefore covers exactly one new vertex, or two when it opens a new
component, which gives the capacity bound used for pruning.

The next edge to branch on is the unassigned edge with the fewest fitting
forests (all unopened forests count as one option); forests are opened in
increasing index order, so each partition of the edges is reached once.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import geom
from .model import Decomposition, StarForest, bipartite_matching, forest_from_edges

FREE, PAIRED, LEAF, CENTER = 0, 1, 2, 3

MAX_SEARCH_N = 14


@dataclass
class SearchOptions:
    t: int
    points: Sequence | None = None
    require_all_centers: bool = False
    fixed_matching: Sequence[tuple[int, int]] | None = None
    enumerate_limit: int | None = None
    canonical_only: bool = True

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be at least 1")


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    seconds: float = 0.0
    pruned: dict = field(
        default_factory=lambda: {"capacity": 0, "forward": 0, "centers": 0}
    )


def crossing_masks(points, edges) -> list[int]:
    """Bitmask per edge of the edges it properly crosses."""
    m = len(edges)
    masks = [0] * m
    segs = [(points[u], points[v]) for u, v in edges]
    for i, j in itertools.combinations(range(m), 2):
        if geom.segments_properly_cross(segs[i], segs[j]):
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


def _check_inputs(n: int, opts: SearchOptions):
    if not 2 <= n <= MAX_SEARCH_N:
        raise ValueError(f"n must be in 2..{MAX_SEARCH_N}, got {n}")
    if opts.points is not None:
        if len(opts.points) != n:
            raise ValueError("point count does not match n")
        if not geom.is_general_position(opts.points):
            raise ValueError("points are not in general position")


class _Search:
    def __init__(self, n: int, opts: SearchOptions, stats: SearchStats):
        self.n = n
        self.t = opts.t
        self.opts = opts
        self.stats = stats
        self.edges = list(itertools.combinations(range(n), 2))
        m = len(self.edges)
        self.eindex = {e: i for i, e in enumerate(self.edges)}
        self.cross = crossing_masks(opts.points, self.edges) if opts.points is not None else [0] * m
        # inc[S]: edges touching some vertex of the vertex set S
        vinc = [0] * n
        for i, (u, v) in enumerate(self.edges):
            vinc[u] |= 1 << i
            vinc[v] |= 1 << i
        inc = [0] * (1 << n)
        for s in range(1, 1 << n):
            low = s & -s
            inc[s] = inc[s ^ low] | vinc[low.bit_length() - 1]
        self.inc = inc

    def run(self) -> Iterator[tuple[list[int], dict | None]]:
        """Yield ``(forest index per edge, center choices)`` per canonical solution."""
        n, t = self.n, self.t
        m = len(self.edges)
        self.st = st = [[FREE] * n for _ in range(t)]
        self.nb = nb = [[-1] * n for _ in range(t)]
        self.cover = cover = [0] * t
        self.fmask = fmask = [0] * t
        self.assign = assign = [-1] * m
        self.rem = [n - 1] * n
        self.free = [(1 << n) - 1] * t
        self.leaf = [0] * t
        self.xmask = [0] * t
        self.unassigned = (1 << m) - 1
        self.first_free = self.opened = 0
        self.left = m
        if self.opts.fixed_matching is not None:
            if t < 2:
                return
            for u, v in self.opts.fixed_matching:
                if u == v or not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"bad matching edge ({u}, {v})")
                e = self.eindex[(min(u, v), max(u, v))]
                if st[0][u] != FREE or st[0][v] != FREE or fmask[0] & self.cross[e]:
                    return
                self._apply(0, e, u, v, 0)
            self.first_free = self.opened = 1
        yield from self._descend()

    def _descend(self):
        t, n = self.t, self.n
        st, edges, assign = self.st, self.edges, self.assign
        pruned = self.stats.pruned
        if self.left == 0:
            if self.opened < t:
                return
            centers = None
            if self.opts.require_all_centers:
                centers = self.designate(st, self.nb)
                if centers is None:
                    pruned["centers"] += 1
                    return
            yield list(assign), centers
            return
        opened, first = self.opened, self.first_free
        if self.left < t - opened:
            pruned["capacity"] += 1
            return
        cap = (t - opened) * (n - 1) + sum(n - self.cover[f] for f in range(first, opened))
        if cap < self.left:
            pruned["capacity"] += 1
            return
        # most constrained unassigned edge; new forests count as one option.
        # An edge fits forest f iff it touches a free vertex, no leaf, and
        # crosses nothing in f; ge[c] holds the edges fitting >= c forests.
        inc, free, leaf, xmask = self.inc, self.free, self.leaf, self.xmask
        todo = self.unassigned
        fits = [inc[free[f]] & ~inc[leaf[f]] & ~xmask[f] & todo for f in range(first, opened)]
        ge = [todo] + [0] * len(fits)
        for i, fit in enumerate(fits, 1):
            for c in range(i, 0, -1):
                ge[c] |= ge[c - 1] & fit
        extra = 1 if opened < t else 0
        if not extra and todo & ~(ge[1] if fits else 0):
            pruned["forward"] += 1
            return
        ge.append(0)
        for c in range(1 - extra, len(ge) - 1):
            exact = ge[c] & ~ge[c + 1]
            if exact:
                best = (exact & -exact).bit_length() - 1
                break
        best_dom = [f for f, fit in zip(range(first, opened), fits) if fit >> best & 1]
        if extra:
            best_dom.append(opened)
        u, v = edges[best]
        need_centers = self.opts.require_all_centers
        for f in best_dom:
            self.stats.nodes += 1
            rec = self._apply(f, best, u, v, opened)
            if not need_centers or self._closed_ok(u, v):
                yield from self._descend()
            self._undo(rec)

    def _closed_ok(self, u, v) -> bool:
        st = self.st
        for w in (u, v):
            if self.rem[w] == 0 and not any(s[w] == CENTER or s[w] == PAIRED for s in st):
                self.stats.pruned["centers"] += 1
                return False
        return True

    def _apply(self, f, e, u, v, opened):
        s = self.st[f]
        nb = self.nb[f]
        su, sv = s[u], s[v]
        w = -1
        saved = (self.free[f], self.leaf[f], self.xmask[f])
        if su == FREE and sv == FREE:
            s[u] = s[v] = PAIRED
            nb[u], nb[v] = v, u
            grown = 2
        else:
            if su != FREE:
                u, v, su, sv = v, u, sv, su
            # u is free, v is paired or center
            s[u] = LEAF
            nb[u] = v
            if sv == PAIRED:
                w = nb[v]
                s[v] = CENTER
                s[w] = LEAF
            grown = 1
        self.cover[f] += grown
        self.fmask[f] |= 1 << e
        self.free[f] &= ~(1 << u | 1 << v)
        if s[u] == LEAF:
            self.leaf[f] |= 1 << u
        if w >= 0:
            self.leaf[f] |= 1 << w
        self.xmask[f] |= self.cross[e]
        self.unassigned &= ~(1 << e)
        self.assign[e] = f
        self.rem[u] -= 1
        self.rem[v] -= 1
        self.left -= 1
        if f == self.opened:
            self.opened += 1
        return (f, e, u, v, su, sv, w, grown, opened, saved)

    def _undo(self, rec):
        f, e, u, v, su, sv, w, grown, opened, saved = rec
        self.free[f], self.leaf[f], self.xmask[f] = saved
        self.unassigned |= 1 << e
        s = self.st[f]
        s[u], s[v] = su, sv
        if w >= 0:
            s[w] = PAIRED
        self.cover[f] -= grown
        self.fmask[f] &= ~(1 << e)
        self.assign[e] = -1
        self.rem[u] += 1
        self.rem[v] += 1
        self.left += 1
        self.opened = opened

    def designate(self, st, nb):
        """Choose centers of single-edge components so every vertex is a
        center somewhere; returns ``{(forest, u, v): center}`` or None."""
        n, t = self.n, self.t
        fixed = {v for f in range(t) for v in range(n) if st[f][v] == CENTER}
        pairs = [(f, v, nb[f][v]) for f in range(t) for v in range(n) if st[f][v] == PAIRED and v < nb[f][v]]
        need = [v for v in range(n) if v not in fixed]
        options = [[i for i, (f, a, b) in enumerate(pairs) if x in (a, b)] for x in need]
        match = bipartite_matching(options)
        if len(match) < len(need):
            return None
        return {pairs[i]: need[x] for x, i in match.items()}


def _decomposition(n, t, edges, assign, centers=None) -> Decomposition:
    groups = [[] for _ in range(t)]
    for e, f in enumerate(assign):
        groups[f].append(edges[e])
    forests = []
    for f, es in enumerate(groups):
        prefer = []
        if centers:
            prefer = [c for (g, a, b), c in centers.items() if g == f]
        forests.append(forest_from_edges(es, prefer))
    return Decomposition(n, tuple(forests))


def enumerate_decompositions(
    n: int, opts: SearchOptions, stats: SearchStats | None = None
) -> Iterator[Decomposition]:
    """Every decomposition of ``K_n`` into exactly ``opts.t`` non-empty
    star-forests meeting the options.

    With ``canonical_only`` each partition of the edges is produced once;
    otherwise every ordering of the forests is produced (a pinned matching
    stays in front).
    """
    _check_inputs(n, opts)
    stats = stats if stats is not None else SearchStats()
    search = _Search(n, opts, stats)
    start = time.perf_counter()
    emitted = 0
    limit = opts.enumerate_limit
    pinned = 1 if opts.fixed_matching is not None else 0
    try:
        for assign, centers in search.run():
            stats.solutions += 1
            d = _decomposition(n, opts.t, search.edges, assign, centers)
            if opts.canonical_only:
                variants = [d]
            else:
                head, rest = d.forests[:pinned], d.forests[pinned:]
                variants = (
                    Decomposition(n, head + perm) for perm in itertools.permutations(rest)
                )
            for out in variants:
                yield out
                emitted += 1
                if limit is not None and emitted >= limit:
                    return
    finally:
        stats.seconds += time.perf_counter() - start


def exists_decomposition(
    n: int, opts: SearchOptions, stats: SearchStats | None = None
) -> Decomposition | None:
    for d in enumerate_decompositions(n, opts, stats):
        return d
    return None


def abstract_lower_bound(n: int) -> int:
    """Fewest star-forests any decomposition of ``K_n`` can use."""
    if n <= 1:
        return 0
    if n <= 3:
        return n - 1
    return math.ceil(n / 2) + 1


def stars_decomposition(n: int) -> Decomposition:
    """``n - 1`` stars: vertex ``i`` takes every edge to a larger vertex."""
    from .model import Star

    return Decomposition(
        n, tuple(StarForest((Star(i, tuple(range(i + 1, n))),)) for i in range(n - 1))
    )


def min_plane_star_forests(points, stats: SearchStats | None = None) -> tuple[int, Decomposition]:
    """Smallest number of plane star-forests decomposing the geometric ``K_n``."""
    n = len(points)
    if n == 2:
        return 1, stars_decomposition(2)
    for t in range(abstract_lower_bound(n), n - 1):
        d = exists_decomposition(n, SearchOptions(t=t, points=points), stats)
        if d is not None:
            return t, d
    return n - 1, stars_decomposition(n)


def sf_extendable(arrangement, stats: SearchStats | None = None) -> Decomposition | None:
    """A decomposition into ``k + 1`` plane star-forests whose first forest is
    the arrangement's matching, if one exists."""
    points = arrangement.points
    k = len(arrangement.segments)
    matching = [(i, k + i) for i in range(k)]
    opts = SearchOptions(t=k + 1, points=points, fixed_matching=matching)
    return exists_decomposition(2 * k, opts, stats)


def verify_unique_bds(n: int, stats: SearchStats | None = None) -> bool:
    """Whether every decomposition of ``K_n`` into ``n/2 + 1`` star-forests is
    a broken double stars decomposition."""
    from .model import is_broken_double_stars

    if n % 2:
        raise ValueError("n must be even")
    opts = SearchOptions(t=n // 2 + 1)
    stats = stats if stats is not None else SearchStats()
    return all(is_broken_double_stars(d) for d in enumerate_decompositions(n, opts, stats))
