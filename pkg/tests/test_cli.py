import json

import pytest

from starforest import geom
from starforest.cli import main
from starforest.model import from_json, validate_decomposition


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_and_verify_staircase(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "staircase", "--k", "3", "--out", str(tmp_path))
    assert code == 0
    pts = geom.read_points((tmp_path / "staircase.points").read_text())
    d = from_json((tmp_path / "staircase.json").read_text())
    assert len(pts) == 6 and len(d.forests) == 4 and validate_decomposition(d) == []
    code, out, _ = run(capsys, "verify", str(tmp_path / "staircase.json"), "--points", str(tmp_path / "staircase.points"))
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out


@pytest.mark.parametrize(
    "argv,points,forests",
    [
        (["bds", "--n", "6"], None, 4),
        (["blowup", "--base", "stair2", "--k", "3"], 12, 9),
        (["comet", "--k", "4"], 8, 5),
        (["hybrid", "--k", "5", "--h", "4"], 10, 6),
        (["convex", "--n", "5"], 5, 4),
    ],
)
def test_construct_kinds(tmp_path, capsys, argv, points, forests):
    code, _, _ = run(capsys, "construct", *argv, "--out", str(tmp_path), "--name", "x")
    assert code == 0
    d = from_json((tmp_path / "x.json").read_text())
    assert len(d.forests) == forests and validate_decomposition(d) == []
    if points:
        assert len(geom.read_points((tmp_path / "x.points").read_text())) == points


def test_construct_bad_params(tmp_path, capsys):
    assert run(capsys, "construct", "bds", "--n", "5", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "construct", "staircase", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "construct", "nonsense")[0] == 2


def test_verify_detects_crossing(tmp_path, capsys):
    (tmp_path / "sq.points").write_text("4\n0 0\n1 0\n1 1\n0 1\n")
    d = {"n": 4, "forests": [
        [{"center": 0, "leaves": [2]}, {"center": 1, "leaves": [3]}],
        [{"center": 0, "leaves": [1, 3]}],
        [{"center": 2, "leaves": [1, 3]}],
    ]}
    (tmp_path / "d.json").write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(tmp_path / "d.json"), "--points", str(tmp_path / "sq.points"), "--checks", "partition,plane")
    assert code == 1
    assert "PASS partition" in out and "FAIL plane" in out


def test_verify_bds_fails_on_stars(tmp_path, capsys):
    run(capsys, "construct", "convex", "--n", "6", "--out", str(tmp_path))
    code, out, _ = run(capsys, "verify", str(tmp_path / "convex.json"), "--checks", "partition,bds")
    assert code == 1 and "FAIL bds" in out


def test_verify_parse_errors(tmp_path, capsys):
    (tmp_path / "bad.json").write_text("{not json")
    assert run(capsys, "verify", str(tmp_path / "bad.json"))[0] == 2
    (tmp_path / "d.json").write_text(json.dumps({"n": 3, "forests": [[{"center": 0, "leaves": [7]}]]}))
    assert run(capsys, "verify", str(tmp_path / "d.json"))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


def test_search_cli(tmp_path, capsys):
    code, out, _ = run(capsys, "search", "--n", "6", "--t", "4", "--limit", "3", "--stats")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    for line in lines[:3]:
        assert validate_decomposition(from_json(line)) == []
    assert json.loads(lines[-1])["stats"]["solutions"] == 3
    assert run(capsys, "search", "--n", "6", "--t", "3")[0] == 1


def test_search_pinned_matching(tmp_path, capsys):
    (tmp_path / "m.txt").write_text("0 3\n1 4\n2 5\n")
    code, out, _ = run(capsys, "search", "--n", "6", "--t", "4", "--pin-matching", str(tmp_path / "m.txt"))
    sols = [from_json(line) for line in out.strip().splitlines()]
    assert code == 0 and len(sols) == 8
    assert all(set(d.forests[0].edges()) == {(0, 3), (1, 4), (2, 5)} for d in sols)


def test_search_geometric(tmp_path, capsys):
    run(capsys, "construct", "convex", "--n", "6", "--out", str(tmp_path))
    code, _, _ = run(capsys, "search", "--points", str(tmp_path / "convex.points"), "--t", "4")
    assert code == 1


def test_render_cli(tmp_path, capsys):
    run(capsys, "construct", "staircase", "--k", "4", "--out", str(tmp_path))
    out = tmp_path / "s.svg"
    code, _, _ = run(capsys, "render", str(tmp_path / "staircase.points"), str(tmp_path / "staircase.json"), "--out", str(out))
    first = out.read_bytes()
    run(capsys, "render", str(tmp_path / "staircase.points"), str(tmp_path / "staircase.json"), "--out", str(out))
    assert code == 0 and first == out.read_bytes()
    code, _, err = run(capsys, "render", str(tmp_path / "staircase.points"), str(tmp_path / "staircase.json"), "--palette", "#000")
    assert code == 2 and "palette" in err
    code, svg, _ = run(capsys, "render", str(tmp_path / "staircase.points"))
    assert code == 0 and "<line" not in svg


def test_scan_cli(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "scan", "--n", "6", "--t", "4", "--require-centers", "--report", str(report))
    assert code == 0 and "total" in out
    data = json.loads(report.read_text())
    assert data["total"] == 16
    for e in data["entries"]:
        if e["witness"]:
            assert validate_decomposition(from_json(json.dumps(e["witness"]))) == []


def test_repro_cli(capsys):
    code, out, _ = run(capsys, "repro", "obs-k6-unique", "convex6-min=5")
    assert code == 0 and out.count("PASS") == 2
    assert run(capsys, "repro", "no-such-claim")[0] == 2
    code, out, _ = run(capsys, "repro", "--list")
    assert code == 0 and "scan6-centers=6/16" in out


def test_no_command(capsys):
    assert main([]) == 2
