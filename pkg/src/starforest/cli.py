"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import construct, geom, otypes, repro, search
from .model import (
    Decomposition,
    all_vertices_are_centers,
    from_json,
    is_broken_double_stars,
    is_plane,
    validate_decomposition,
)
from .render import PALETTE, RenderSpec, render_svg

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_points(path) -> list[geom.Point]:
    try:
        return geom.read_points(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _read_decomposition(path) -> Decomposition:
    try:
        return from_json(Path(path).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _check_indices(points, d: Decomposition):
    if points is not None and len(points) != d.n:
        raise UsageError(f"decomposition has n={d.n} but the point file has {len(points)} points")
    for f in d.forests:
        for u, v in f.edges():
            if not (0 <= u < d.n and 0 <= v < d.n):
                raise UsageError(f"vertex index out of range in edge ({u}, {v})")


# ------------------------------------------------------------------ construct


BASES = {
    "stair2": lambda: construct.staircase(2)[:2],
    "stair3": lambda: construct.staircase(3)[:2],
    "comet3": lambda: construct.comet(3)[:2],
}


def _build(args):
    kind = args.kind
    need = {"bds": ["n"], "staircase": ["k"], "comet": ["k"], "hybrid": ["k", "h"], "blowup": ["k"], "convex": ["n"]}
    for name in need[kind]:
        if getattr(args, name) is None:
            raise UsageError(f"construct {kind} needs --{name}")
    try:
        if kind == "bds":
            return None, construct.broken_double_stars(args.n)
        if kind == "staircase":
            return construct.staircase(args.k)[:2]
        if kind == "comet":
            return construct.comet(args.k)[:2]
        if kind == "hybrid":
            return construct.hybrid(args.k, args.h)[:2]
        if kind == "convex":
            pts = construct.convex_ngon(args.n)
            return pts, search.stars_decomposition(args.n)
        if args.base in BASES:
            bp, bd = BASES[args.base]()
        elif args.base_points and args.base_decomposition:
            bp, bd = _read_points(args.base_points), _read_decomposition(args.base_decomposition)
        else:
            raise UsageError(f"--base must be one of {sorted(BASES)} or give --base-points and --base-decomposition")
        cs, d = construct.blow_up(bp, bd, args.k)
        return cs.points, d
    except (ValueError, construct.ConstructionError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_construct(args) -> int:
    points, d = _build(args)
    problems = validate_decomposition(d)
    if points is not None:
        problems += [f"forest {i} is not plane" for i, f in enumerate(d.forests) if not is_plane(points, f)]
    if problems:
        print(f"internal error: construction failed validation: {problems[0]}", file=sys.stderr)
        return FAILED
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.name or args.kind
    if points is not None:
        (out / f"{stem}.points").write_text(geom.write_points(points))
    (out / f"{stem}.json").write_text(d.to_json() + "\n")
    what = f"{len(points)} points, " if points is not None else ""
    print(f"{stem}: {what}{len(d.forests)} forests -> {out}")
    return OK


# --------------------------------------------------------------------- verify

CHECKS = ("partition", "plane", "matching", "bds", "centers", "stabbing")


def run_checks(points, d: Decomposition, checks) -> list[tuple[str, bool, str]]:
    results = []
    for c in checks:
        if c == "partition":
            problems = validate_decomposition(d)
            results.append((c, not problems, problems[0] if problems else ""))
        elif c == "plane":
            if points is None:
                raise UsageError("the plane check needs --points")
            bad = [i for i, f in enumerate(d.forests) if not is_plane(points, f)]
            results.append((c, not bad, f"crossing forests: {bad}" if bad else ""))
        elif c == "matching":
            f = repro.matching_forest(d)
            results.append((c, f is not None, "" if f else "no perfect-matching forest"))
        elif c == "bds":
            results.append((c, is_broken_double_stars(d), ""))
        elif c == "centers":
            results.append((c, all_vertices_are_centers(d), ""))
        elif c == "stabbing":
            if points is None:
                raise UsageError("the stabbing check needs --points")
            results.append((c, repro.matching_pairwise_stabbing(points, d), ""))
    return results


def cmd_verify(args) -> int:
    d = _read_decomposition(args.decomposition)
    points = _read_points(args.points) if args.points else None
    _check_indices(points, d)
    checks = args.checks.split(",") if args.checks else [
        c for c in CHECKS if points is not None or c not in ("plane", "stabbing")
    ]
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}; choose from {', '.join(CHECKS)}")
    results = run_checks(points, d, checks)
    for name, ok, note in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  ({note})" if note and not ok else ""))
    return OK if all(ok for _, ok, _ in results) else FAILED


# --------------------------------------------------------------------- search


def cmd_search(args) -> int:
    points = _read_points(args.points) if args.points else None
    n = args.n if args.n is not None else (len(points) if points else None)
    if n is None:
        raise UsageError("give --n or --points")
    pin = None
    if args.pin_matching:
        try:
            pin = [tuple(map(int, line.split())) for line in Path(args.pin_matching).read_text().splitlines() if line.strip()]
        except (OSError, ValueError) as exc:
            raise UsageError(f"{args.pin_matching}: {exc}") from exc
        if any(len(e) != 2 for e in pin):
            raise UsageError("matching file needs one 'u v' pair per line")
    try:
        opts = search.SearchOptions(
            t=args.t,
            points=points,
            require_all_centers=args.require_centers,
            fixed_matching=pin,
            enumerate_limit=args.limit,
        )
        stats = search.SearchStats()
        count = 0
        for d in search.enumerate_decompositions(n, opts, stats):
            print(d.to_json())
            count += 1
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.stats:
        print(json.dumps({"stats": {"solutions": count, "nodes": stats.nodes, "seconds": round(stats.seconds, 3), "pruned": stats.pruned}}))
    return OK if count else FAILED


# ----------------------------------------------------------------------- scan


def cmd_scan(args) -> int:
    try:
        if args.file:
            sets = otypes.parse_otypes(Path(args.file).read_bytes(), args.n, args.width)
        else:
            sets = otypes.load_database(args.n)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    rep = otypes.scan(sets, args.t, require_all_centers=args.require_centers, jobs=args.jobs, checkpoint=args.checkpoint)
    if args.report:
        Path(args.report).write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
    print(rep.summary())
    return OK


def cmd_gen_otypes(args) -> int:
    sets = otypes.enumerate_order_types(args.n, grid_size=args.grid)
    path = Path(args.out) if args.out else otypes.database_path(args.n)
    path.write_bytes(otypes.serialize_otypes(sets, otypes.width_for(args.n)))
    print(f"{len(sets)} order types on {args.n} points -> {path}")
    expected = otypes.KNOWN_COUNTS.get(args.n)
    return OK if expected in (None, len(sets)) else FAILED


# --------------------------------------------------------------------- render


def cmd_render(args) -> int:
    points = _read_points(args.points)
    d = _read_decomposition(args.decomposition) if args.decomposition else None
    if d is not None:
        _check_indices(points, d)
    palette = tuple(args.palette.split(",")) if args.palette else PALETTE
    spec = RenderSpec(
        size=args.size,
        palette=palette,
        point_radius=args.radius,
        labels=not args.no_labels,
        highlight_centers=not args.no_centers,
    )
    try:
        svg = render_svg(points, d, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return OK


# ---------------------------------------------------------------------- repro


def cmd_repro(args) -> int:
    if args.list or not args.claims:
        for c in repro.CLAIMS.values():
            print(f"{c.id:<24} {'(slow) ' if c.slow else ''}{c.description}")
        return OK
    ids = list(repro.CLAIMS) if args.claims == ["all"] else args.claims
    worst = OK
    for cid in ids:
        if cid not in repro.CLAIMS:
            raise UsageError(f"unknown claim {cid!r}; run 'repro --list'")
        if args.claims == ["all"] and repro.CLAIMS[cid].slow and not args.slow:
            print(f"SKIP {cid}  (slow; add --slow)")
            continue
        try:
            res = repro.run_claim(cid)
        except FileNotFoundError as exc:
            raise UsageError(f"missing data file: {exc.filename}") from exc
        print(f"{'PASS' if res.ok else 'FAIL'} {cid}  {res.seconds:.2f}s  {res.detail}")
        if not res.ok:
            worst = FAILED
    return worst


# ----------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starforest", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a point set and decomposition")
    c.add_argument("kind", choices=["bds", "staircase", "comet", "hybrid", "blowup", "convex"])
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--h", type=int)
    c.add_argument("--base", default="stair2", help=f"blow-up base: {', '.join(BASES)}")
    c.add_argument("--base-points")
    c.add_argument("--base-decomposition")
    c.add_argument("--out", default=".")
    c.add_argument("--name", help="output file stem (default: the kind)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a decomposition")
    v.add_argument("decomposition")
    v.add_argument("--points")
    v.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search for star-forest decompositions")
    s.add_argument("--n", type=int)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--points")
    s.add_argument("--require-centers", action="store_true")
    s.add_argument("--pin-matching", help="file with one 'u v' pair per line, placed in forest 0")
    s.add_argument("--limit", type=int)
    s.add_argument("--stats", action="store_true")
    s.set_defaults(func=cmd_search)

    sc = sub.add_parser("scan", help="scan an order-type database")
    sc.add_argument("--n", type=int, required=True)
    sc.add_argument("--t", type=int, required=True)
    sc.add_argument("--file", help="database file (default: bundled)")
    sc.add_argument("--width", type=int, choices=[8, 16])
    sc.add_argument("--require-centers", action="store_true")
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--checkpoint")
    sc.add_argument("--report", help="write the JSON report here")
    sc.set_defaults(func=cmd_scan)

    g = sub.add_parser("gen-otypes", help="enumerate order types and write a database file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--grid", type=int, default=256)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_otypes)

    r = sub.add_parser("render", help="draw a decomposition as SVG")
    r.add_argument("points")
    r.add_argument("decomposition", nargs="?")
    r.add_argument("--out")
    r.add_argument("--size", type=int, default=800)
    r.add_argument("--radius", type=int, default=6)
    r.add_argument("--palette", help="comma-separated colors")
    r.add_argument("--no-labels", action="store_true")
    r.add_argument("--no-centers", action="store_true")
    r.set_defaults(func=cmd_render)

    rp = sub.add_parser("repro", help="re-run a computational claim")
    rp.add_argument("claims", nargs="*", help="claim ids, or 'all'")
    rp.add_argument("--list", action="store_true")
    rp.add_argument("--slow", action="store_true", help="include slow claims with 'all'")
    rp.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
