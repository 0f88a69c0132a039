import itertools
import random

import pytest

from starforest import construct, geom, otypes
from starforest.geom import Point
from starforest.model import is_plane, validate_decomposition
from starforest.oracles import same_order_type_bruteforce


@pytest.fixture(scope="module")
def six():
    return otypes.load_database(6)


def test_six_point_database(six):
    raw = otypes.database_path(6).read_bytes()
    assert len(raw) == 192
    assert len(six) == 16
    assert all(geom.is_general_position(ps) for ps in six)
    assert len({otypes.order_type_signature(ps) for ps in six}) == 16


def test_six_point_database_is_complete(six):
    for a, b in itertools.combinations(six, 2):
        assert not same_order_type_bruteforce(a, b)


def test_parse_errors():
    raw = otypes.database_path(6).read_bytes()
    with pytest.raises(ValueError, match="length"):
        otypes.parse_otypes(raw[:-1], 6, 8)
    collinear = bytes([0, 0, 1, 1, 2, 2])
    with pytest.raises(ValueError, match="general position"):
        otypes.parse_otypes(collinear, 3, 8)


def test_roundtrip_bit_exact():
    rng = random.Random(5)
    sets = []
    while len(sets) < 20:
        ps = [Point(rng.randrange(256), rng.randrange(256)) for _ in range(5)]
        if geom.is_general_position(ps):
            sets.append(ps)
    raw = otypes.serialize_otypes(sets, 8)
    assert otypes.parse_otypes(raw, 5, 8) == sets
    assert otypes.serialize_otypes(otypes.parse_otypes(raw, 5, 8), 8) == raw
    wide = [[Point(p.x * 200, p.y * 200) for p in ps] for ps in sets]
    raw16 = otypes.serialize_otypes(wide, 16)
    assert otypes.parse_otypes(raw16, 5, 16) == wide


def test_little_endian_16_bit():
    raw = bytes([1, 2, 0, 0, 0, 0, 5, 0, 0, 0, 0, 1])
    assert otypes.parse_otypes(raw, 3, 16) == [[Point(0x201, 0), Point(0, 5), Point(0, 0x100)]]


def test_signature_invariance():
    rng = random.Random(9)
    for _ in range(20):
        ps = [Point(rng.randrange(100), rng.randrange(100)) for _ in range(7)]
        if not geom.is_general_position(ps):
            continue
        sig = otypes.order_type_signature(ps)
        perm = ps[:]
        rng.shuffle(perm)
        assert otypes.order_type_signature(perm) == sig
        assert otypes.order_type_signature([Point(-p.x, p.y) for p in ps]) == sig
        assert otypes.order_type_signature([Point(3 * p.x + 1, 3 * p.y - 7) for p in ps]) == sig


def test_signature_agrees_with_bruteforce():
    rng = random.Random(2)
    sets = []
    while len(sets) < 30:
        ps = [Point(rng.randrange(20), rng.randrange(20)) for _ in range(5)]
        if geom.is_general_position(ps):
            sets.append(ps)
    for a, b in itertools.combinations(sets[:14], 2):
        same = otypes.order_type_signature(a) == otypes.order_type_signature(b)
        assert same == same_order_type_bruteforce(a, b)


def test_enumeration_small():
    assert [len(otypes.enumerate_order_types(n)) for n in (3, 4, 5)] == [1, 2, 3]


def test_scan_six(six):
    rep = otypes.scan(six, 4, require_all_centers=True)
    assert rep.total == 16
    assert rep.decomposable == sum(e.decomposable for e in rep.entries)
    assert rep.centers_condition == sum(e.centers_condition for e in rep.entries)
    assert rep.centers_condition == rep.decomposable
    stair = otypes.order_type_signature(construct.staircase(3)[0])
    assert any(e.signature == stair and e.centers_condition for e in rep.entries)
    for e in rep.entries:
        if e.centers_condition:
            assert e.hull_size <= 4
    assert [e.signature for e in rep.entries] == sorted(e.signature for e in rep.entries)


def test_scan_six_count_and_extra_hull_four_set(six):
    # an exhaustive search finds 7 positive order types; the seventh has hull 4
    # but its only matchings join two hull vertices across a diagonal, so it is
    # not a 3-staircase
    rep = otypes.scan(six, 4)
    assert rep.centers_condition == 7
    stair = otypes.order_type_signature(construct.staircase(3)[0])
    odd = [e for e in rep.entries if e.centers_condition and e.hull_size == 4 and e.signature != stair]
    assert len(odd) == 1
    ps = six[odd[0].index]
    d = otypes.witness_of(odd[0])
    hull = geom.convex_hull(ps)
    hull_edges = {frozenset((hull[i], hull[(i + 1) % 4])) for i in range(4)}
    from starforest.repro import matching_forest

    m = matching_forest(d).edges()
    across = [e for e in m if e[0] in hull and e[1] in hull]
    assert across and all(frozenset(e) not in hull_edges for e in across)


def test_eight_point_database():
    eight = otypes.load_database(8)
    assert len(otypes.database_path(8).read_bytes()) == 3315 * 16
    assert len(eight) == 3315
    assert all(geom.is_general_position(ps) for ps in eight)
    sigs = {otypes.order_type_signature(ps) for ps in eight}
    assert len(sigs) == 3315
    for make in (construct.staircase, construct.comet):
        assert otypes.order_type_signature(make(4)[0]) in sigs


def test_eight_point_hull_five_set_beyond_the_staircase():
    ps = [Point(*p) for p in [(0, 0), (255, 0), (0, 255), (170, 170), (227, 99), (230, 64), (224, 67), (215, 82)]]
    assert len(geom.convex_hull(ps)) == 5
    assert not same_order_type_bruteforce(construct.staircase(4)[0], ps)
    e = otypes.scan_one(0, ps, 5)
    assert e.centers_condition
    d = otypes.witness_of(e)
    assert not validate_decomposition(d)
    assert all(is_plane(ps, f) for f in d.forests)


def test_scan_order_independent(six):
    a = otypes.scan(six[:6], 4)
    b = otypes.scan(list(reversed(six[:6])), 4)
    assert [(e.signature, e.decomposable) for e in a.entries] == [(e.signature, e.decomposable) for e in b.entries]


def test_scan_checkpoint_resume(six, tmp_path):
    ck = tmp_path / "ck.jsonl"
    first = otypes.scan(six[:5], 4, checkpoint=ck)
    assert len(ck.read_text().splitlines()) == 5
    seen = []
    again = otypes.scan(six[:8], 4, checkpoint=ck, progress=seen.append)
    assert len(seen) == 3
    assert again.total == 8
    assert {e.signature for e in first.entries} <= {e.signature for e in again.entries}


def test_scan_parallel_matches_serial(six):
    a = otypes.scan(six, 4, jobs=2)
    b = otypes.scan(six, 4, jobs=1)
    assert a.to_dict() == b.to_dict()


def test_summary_table(six):
    text = otypes.scan(six, 4).summary()
    assert "total" in text and "16" in text


def test_data_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv("STARFOREST_DATA", str(tmp_path))
    assert otypes.database_path(6).parent == tmp_path
    with pytest.raises(FileNotFoundError):
        otypes.load_database(6)
