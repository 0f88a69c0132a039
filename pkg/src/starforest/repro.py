"""One-shot reproduction runners, one per headline computational claim.

Each runner returns a :class:`ClaimResult`; ``slow`` claims take minutes to
hours and are skipped unless asked for.
"""
from __future__ import annotations

import functools
import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

from . import construct, geom, otypes, search
from .geom import Point, Segment
from .model import (
    Decomposition,
    is_broken_double_stars,
    is_perfect_matching,
    is_plane,
    validate_decomposition,
)
from .oracles import naive_partitions


@dataclass
class ClaimResult:
    ok: bool
    detail: str
    seconds: float = 0.0


@dataclass(frozen=True)
class Claim:
    id: str
    description: str
    run: Callable[[], ClaimResult]
    slow: bool = False


def _plane_valid(points, d: Decomposition) -> bool:
    return not validate_decomposition(d) and all(is_plane(points, f) for f in d.forests)


def matching_forest(d: Decomposition):
    return next((f for f in d.forests if is_perfect_matching(f, d.n)), None)


def matching_pairwise_stabbing(points, d: Decomposition) -> bool:
    f = matching_forest(d)
    if f is None:
        return False
    segs = [Segment(points[u], points[v]) for u, v in f.edges()]
    return all(geom.in_stabbing_position(s, t) for s, t in itertools.combinations(segs, 2))


def bds_range() -> ClaimResult:
    bad = []
    for n in range(4, 41, 2):
        d = construct.broken_double_stars(n)
        if validate_decomposition(d) or not is_broken_double_stars(d) or d.edge_count() != n * (n - 1) // 2:
            bad.append(n)
    return ClaimResult(not bad, f"failing n: {bad}" if bad else "n = 4, 6, ..., 40 valid")


def akiyama_kano() -> ClaimResult:
    def has(n, t):
        return search.exists_decomposition(n, search.SearchOptions(t=t)) is not None

    got = {(4, 2): has(4, 2), (6, 3): has(6, 3), (4, 3): has(4, 3), (6, 4): has(6, 4)}
    want = {(4, 2): False, (6, 3): False, (4, 3): True, (6, 4): True}
    return ClaimResult(got == want, f"exists: {got}")


def unique_bds(n: int) -> ClaimResult:
    stats = search.SearchStats()
    sols = list(search.enumerate_decompositions(n, search.SearchOptions(t=n // 2 + 1), stats))
    bds = sum(map(is_broken_double_stars, sols))
    ok = bool(sols) and bds == len(sols)
    return ClaimResult(ok, f"K_{n} into {n // 2 + 1}: {len(sols)} decompositions, {bds} broken double stars, {stats.nodes} nodes")


def staircases() -> ClaimResult:
    bad = []
    for k in range(1, 17):
        pts, d, arr = construct.staircase(k)
        hull = len(geom.convex_hull(pts))
        ok = (
            len(d.forests) == k + 1
            and _plane_valid(pts, d)
            and hull == k + 1
            and all(geom.in_stabbing_position(s, t) for s, t in itertools.combinations(arr.segments, 2))
        )
        if not ok:
            bad.append(k)
    return ClaimResult(not bad, f"failing k: {bad}" if bad else "k = 1..16 valid, plane, hull k+1, stabbing")


def comets() -> ClaimResult:
    bad = []
    for k in range(2, 17):
        pts, d, _ = construct.comet(k)
        if not (_plane_valid(pts, d) and len(d.forests) == k + 1 and len(geom.convex_hull(pts)) == 3):
            bad.append(("comet", k))
    for h in range(3, 8):
        pts, d, _ = construct.hybrid(6, h)
        if not (_plane_valid(pts, d) and len(geom.convex_hull(pts)) == h):
            bad.append(("hybrid", h))
    return ClaimResult(not bad, f"failing: {bad}" if bad else "comet k = 2..16 hull 3; hybrid(6, h) hull h")


def blowup() -> ClaimResult:
    pts, d, _ = construct.staircase(2)
    cs, big = construct.blow_up(pts, d, 3)
    ok = (
        len(cs.points) == 12
        and len(big.forests) == 9
        and big.edge_count() == 66
        and _plane_valid(cs.points, big)
    )
    # stars from each vertex to all larger ones: the last vertex is never a center
    square = construct.convex_ngon(4)
    stripped = search.stars_decomposition(4)
    try:
        construct.blow_up(square, stripped, 3)
        rejected = False
    except ValueError:
        rejected = True
    return ClaimResult(ok and rejected, f"12 points / 9 plane forests / 66 edges: {ok}; missing-center input rejected: {rejected}")


def convex_min(n: int) -> ClaimResult:
    t, d = search.min_plane_star_forests(construct.convex_ngon(n))
    return ClaimResult(t == n - 1, f"convex {n}-gon needs {t} plane star-forests")


@functools.lru_cache(maxsize=None)
def scan_database(n: int, t: int) -> otypes.ScanReport:
    return otypes.scan(otypes.load_database(n), t, require_all_centers=True)


def scan_claim(n: int, t: int, total: int, positive: int) -> ClaimResult:
    sets = otypes.load_database(n)
    if len(sets) != total:
        return ClaimResult(False, f"parsed {len(sets)} sets, expected {total}")
    rep = scan_database(n, t)
    ok = rep.centers_condition == positive
    return ClaimResult(
        ok, f"{rep.centers_condition}/{rep.total} admit {t} plane star-forests with every vertex a center ({rep.decomposable} without the center condition)"
    )


def hull_evidence(n: int) -> ClaimResult:
    k = n // 2
    rep = scan_database(n, k + 1)
    stair = otypes.order_type_signature(construct.staircase(k)[0])
    pos = [e for e in rep.entries if e.centers_condition]
    too_big = [e.index for e in pos if e.hull_size > k + 1]
    odd = [e.index for e in pos if e.hull_size == k + 1 and e.signature != stair]
    present = any(e.signature == stair for e in pos)
    ok = not too_big and not odd and present
    return ClaimResult(ok, f"{len(pos)} positive; hull > {k + 1}: {too_big}; hull {k + 1} but not a staircase: {odd}; staircase({k}) present: {present}")


def necessary_condition() -> ClaimResult:
    witnesses = []
    for k in (2, 3, 4):
        for make in (construct.staircase, construct.comet):
            pts, _, arr = make(k)
            d = search.sf_extendable(arr)
            if d is None:
                return ClaimResult(False, f"{make.__name__}({k}) not SF-extendable")
            witnesses.append((pts, d))
    for e in scan_database(6, 4).entries:
        if e.witness:
            ps = otypes.load_database(6)[e.index]
            witnesses.append((ps, otypes.witness_of(e)))
    bad = sum(not matching_pairwise_stabbing(p, d) for p, d in witnesses)
    # the diagonals of a convex quadrilateral: not in stabbing position
    diagonals = construct.SegmentArrangement(
        (Segment(Point(0, 0), Point(4, 5)), Segment(Point(4, 1), Point(0, 4)))
    )
    absent = search.sf_extendable(diagonals) is None
    extendable = non_stabbing_extendable(6)
    ok = bad == 0 and absent and not extendable
    return ClaimResult(
        ok,
        f"{len(witnesses)} witnesses, {bad} with a non-stabbing pair; convex 2-segment arrangement "
        f"absent: {absent}; non-stabbing 6-point matchings that extend: {len(extendable)}",
    )


def non_stabbing_extendable(n: int) -> list[tuple[int, tuple]]:
    """(database index, matching) for every perfect matching with a
    non-stabbing pair that is nevertheless SF-extendable."""
    found = []
    for idx, ps in enumerate(otypes.load_database(n)):
        for m in perfect_matchings(list(range(n))):
            segs = [Segment(ps[u], ps[v]) for u, v in m]
            if all(geom.in_stabbing_position(s, t) for s, t in itertools.combinations(segs, 2)):
                continue
            arr = construct.SegmentArrangement(tuple(segs))
            if search.sf_extendable(arr) is not None:
                found.append((idx, tuple(m)))
    return found


def perfect_matchings(vs: list[int]):
    if not vs:
        yield []
        return
    u = vs[0]
    for i in range(1, len(vs)):
        rest = vs[1:i] + vs[i + 1:]
        for m in perfect_matchings(rest):
            yield [(u, vs[i])] + m


def oracle_equivalence() -> ClaimResult:
    bad = []
    for n in range(2, 6):
        for t in range(1, 5):
            raw, parts = naive_partitions(n, t)
            sols = list(search.enumerate_decompositions(n, search.SearchOptions(t=t)))
            mine = {frozenset(frozenset(f.edges()) for f in d.forests) for d in sols}
            if mine != parts or raw != len(sols) * math.factorial(t) or len(mine) != len(sols):
                bad.append((n, t))
    return ClaimResult(not bad, f"mismatches: {bad}" if bad else "n <= 5, t <= 4: counts and partitions agree")


CLAIMS: dict[str, Claim] = {
    c.id: c
    for c in [
        Claim("bds-4-40", "broken double stars valid for even n in 4..40", bds_range),
        Claim("ak-tight", "no K_4 into 2 or K_6 into 3; K_4 into 3 and K_6 into 4 exist", akiyama_kano),
        Claim("obs-k6-unique", "every decomposition of K_6 into 4 star-forests is broken double stars", functools.partial(unique_bds, 6)),
        Claim("k8-unique", "every decomposition of K_8 into 5 star-forests is broken double stars", functools.partial(unique_bds, 8), slow=True),
        Claim("staircase", "k-staircase valid for k = 1..16", staircases),
        Claim("comet-hybrid", "k-comet hull 3, hybrid hull h", comets),
        Claim("blowup-stair2-k3", "blow-up of the 2-staircase: 12 points, 9 plane forests", blowup),
        Claim("convex5-min=4", "convex 5-gon needs 4 plane star-forests", functools.partial(convex_min, 5)),
        Claim("convex6-min=5", "convex 6-gon needs 5 plane star-forests", functools.partial(convex_min, 6)),
        Claim("scan6-centers=6/16", "6 of 16 order types on 6 points decompose into 4", functools.partial(scan_claim, 6, 4, 16, 6)),
        Claim("scan8-centers=411/3315", "411 of 3315 order types on 8 points decompose into 5", functools.partial(scan_claim, 8, 5, 3315, 411), slow=True),
        Claim("hull-evidence-6", "positive 6-point sets: hull <= 4, hull 4 only the 3-staircase", functools.partial(hull_evidence, 6)),
        Claim("hull-evidence-8", "positive 8-point sets: hull <= 5, hull 5 only the 4-staircase", functools.partial(hull_evidence, 8), slow=True),
        Claim("necessary-condition", "SF-extendable matchings are pairwise stabbing", necessary_condition),
        Claim("oracle-n5", "enumeration equals the naive oracle for n <= 5, t <= 4", oracle_equivalence),
    ]
}


def run_claim(claim_id: str) -> ClaimResult:
    if claim_id not in CLAIMS:
        raise KeyError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIMS)}")
    start = time.perf_counter()
    res = CLAIMS[claim_id].run()
    res.seconds = time.perf_counter() - start
    return res
