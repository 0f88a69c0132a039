import math

import pytest

from starforest import construct, search
from starforest.model import (
    all_vertices_are_centers,
    edge_partition,
    is_broken_double_stars,
    is_perfect_matching,
    is_plane,
    validate_decomposition,
)
from starforest.oracles import naive_partitions
from starforest.search import SearchOptions, SearchStats


def count(n, **kw):
    return sum(1 for _ in search.enumerate_decompositions(n, SearchOptions(**kw)))


def test_small_counts():
    assert count(4, t=2) == 0
    assert count(4, t=3) == 27
    assert count(6, t=3) == 0
    assert count(6, t=4) == 120
    assert count(7, t=4) == 0


def test_k6_all_bds():
    stats = SearchStats()
    sols = list(search.enumerate_decompositions(6, SearchOptions(t=4), stats))
    assert sols and all(is_broken_double_stars(d) for d in sols)
    assert all(validate_decomposition(d) == [] for d in sols)
    assert stats.solutions == 120 and stats.nodes > 0


def test_k4_solutions_need_not_contain_a_matching():
    sols = list(search.enumerate_decompositions(4, SearchOptions(t=3)))
    with_matching = [d for d in sols if any(is_perfect_matching(f, 4) for f in d.forests)]
    assert 0 < len(with_matching) < len(sols)
    assert not search.verify_unique_bds(4)


def test_verify_unique_bds_six():
    assert search.verify_unique_bds(6)
    with pytest.raises(ValueError):
        search.verify_unique_bds(5)


@pytest.mark.parametrize("n,t", [(3, 2), (4, 3), (5, 3), (5, 4)])
def test_matches_naive_oracle(n, t):
    raw, parts = naive_partitions(n, t)
    sols = list(search.enumerate_decompositions(n, SearchOptions(t=t)))
    assert {edge_partition(d) for d in sols} == parts
    assert raw == len(sols) * math.factorial(t)
    ordered = list(search.enumerate_decompositions(n, SearchOptions(t=t, canonical_only=False)))
    assert len(ordered) == raw


def test_geometric_examples():
    assert search.exists_decomposition(6, SearchOptions(t=4, points=construct.convex_ngon(6))) is None
    pts = construct.staircase(3)[0]
    d = search.exists_decomposition(6, SearchOptions(t=4, points=pts))
    assert d is not None and all(is_plane(pts, f) for f in d.forests)
    w = list(construct.WITNESS6)
    d = search.exists_decomposition(6, SearchOptions(t=4, points=w, require_all_centers=True))
    assert d is not None and all_vertices_are_centers(d)


def test_min_plane_star_forests():
    assert search.min_plane_star_forests(construct.staircase(3)[0])[0] == 4
    assert search.min_plane_star_forests(construct.convex_ngon(5))[0] == 4
    t, d = search.min_plane_star_forests(construct.convex_ngon(6))
    assert t == 5 and len(d.forests) == 5
    assert search.min_plane_star_forests(construct.staircase(3)[0][:5])[0] == 4


def test_sf_extendable():
    for make in (construct.staircase, construct.comet):
        pts, _, arr = make(3)
        d = search.sf_extendable(arr)
        assert d is not None
        assert set(d.forests[0].edges()) == {(i, i + 3) for i in range(3)}
        assert all(is_plane(pts, f) for f in d.forests)


def test_sf_extendable_two_segments():
    from starforest.construct import SegmentArrangement
    from starforest.geom import Point, Segment

    diagonals = SegmentArrangement((Segment(Point(0, 0), Point(4, 5)), Segment(Point(4, 1), Point(0, 4))))
    assert search.sf_extendable(diagonals) is None
    # opposite sides of a convex quadrilateral do extend: two stars at a and b
    sides = SegmentArrangement((Segment(Point(0, 0), Point(4, 1)), Segment(Point(0, 4), Point(4, 5))))
    assert search.sf_extendable(sides) is not None


def test_fixed_matching_count():
    opts = SearchOptions(t=4, fixed_matching=[(0, 3), (1, 4), (2, 5)])
    assert sum(1 for _ in search.enumerate_decompositions(6, opts)) == 120 // 15


def test_require_all_centers_k6():
    # in K_6 with 4 forests every vertex already centers a two-leaf star
    assert count(6, t=4, require_all_centers=True) == 120


def test_limit_and_determinism():
    a = [d.to_json() for d in search.enumerate_decompositions(6, SearchOptions(t=4, enumerate_limit=5))]
    b = [d.to_json() for d in search.enumerate_decompositions(6, SearchOptions(t=4, enumerate_limit=5))]
    assert len(a) == 5 and a == b


def test_input_checks():
    with pytest.raises(ValueError):
        list(search.enumerate_decompositions(15, SearchOptions(t=9)))
    with pytest.raises(ValueError):
        SearchOptions(t=0)
    from starforest.geom import Point

    collinear = [Point(0, 0), Point(1, 1), Point(2, 2), Point(0, 1)]
    with pytest.raises(ValueError):
        search.exists_decomposition(4, SearchOptions(t=3, points=collinear))


def test_lower_bound():
    assert [search.abstract_lower_bound(n) for n in range(2, 9)] == [1, 2, 3, 4, 4, 5, 5]


@pytest.mark.slow
def test_k8_unique_bds():
    stats = SearchStats()
    sols = list(search.enumerate_decompositions(8, SearchOptions(t=5), stats))
    assert len(sols) == 6720
    assert all(is_broken_double_stars(d) for d in sols)
