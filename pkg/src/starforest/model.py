"""Stars, star-forests and decompositions of the complete graph."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .geom import segments_properly_cross

MAX_N = 64


def edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Star:
    center: int
    leaves: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))
        if self.center in self.leaves or len(set(self.leaves)) != len(self.leaves):
            raise ValueError(f"star at {self.center} has a repeated vertex")

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.center,) + self.leaves

    def edges(self) -> list[tuple[int, int]]:
        return [edge(self.center, leaf) for leaf in self.leaves]


@dataclass(frozen=True)
class StarForest:
    stars: tuple[Star, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "stars", tuple(self.stars))

    def edges(self) -> list[tuple[int, int]]:
        return [e for s in self.stars for e in s.edges()]

    def vertices(self) -> set[int]:
        return {v for s in self.stars for v in s.vertices}

    def centers(self) -> set[int]:
        return {s.center for s in self.stars if s.leaves}

    @classmethod
    def from_dict(cls, stars: dict[int, list[int]]) -> "StarForest":
        return cls(tuple(Star(c, tuple(ls)) for c, ls in stars.items()))


@dataclass(frozen=True)
class Decomposition:
    n: int
    forests: tuple[StarForest, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "forests", tuple(self.forests))

    def edge_count(self) -> int:
        return sum(len(f.edges()) for f in self.forests)

    def nonempty(self) -> "Decomposition":
        return Decomposition(self.n, tuple(f for f in self.forests if f.edges()))

    def to_json(self) -> str:
        return json.dumps(to_dict(self), separators=(",", ":"))


def to_dict(d: Decomposition) -> dict:
    return {
        "n": d.n,
        "forests": [
            [{"center": s.center, "leaves": list(s.leaves)} for s in f.stars]
            for f in d.forests
        ],
    }


def from_dict(obj: dict) -> Decomposition:
    try:
        n = int(obj["n"])
        forests = tuple(
            StarForest(tuple(Star(int(s["center"]), tuple(int(v) for v in s["leaves"])) for s in f))
            for f in obj["forests"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed decomposition: {exc!r}") from None
    return Decomposition(n, forests)


def from_json(text: str) -> Decomposition:
    return from_dict(json.loads(text))


def complete_edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def validate_decomposition(d: Decomposition) -> list[str]:
    """Return every structural problem found in ``d``; empty means valid."""
    problems: list[str] = []
    n = d.n
    if not 1 <= n <= MAX_N:
        problems.append(f"n={n} outside 1..{MAX_N}")
        return problems
    seen: dict[tuple[int, int], int] = {}
    for fi, f in enumerate(d.forests):
        used: dict[int, int] = {}
        for s in f.stars:
            verts = s.vertices
            if any(not 0 <= v < n for v in verts):
                problems.append(f"forest {fi}: star {s.center} has vertex out of range")
                continue
            if s.center in s.leaves:
                problems.append(f"forest {fi}: star {s.center} lists its center as a leaf")
            if len(set(s.leaves)) != len(s.leaves):
                problems.append(f"forest {fi}: star {s.center} repeats a leaf")
            for v in set(verts):
                if v in used:
                    problems.append(f"forest {fi}: stars {used[v]} and {s.center} share vertex {v}")
                used[v] = s.center
            for e in s.edges():
                if e[0] == e[1]:
                    continue
                if e in seen:
                    problems.append(f"duplicate edge {e} in forests {seen[e]} and {fi}")
                else:
                    seen[e] = fi
    for e in complete_edges(n):
        if e not in seen:
            problems.append(f"uncovered edge {e}")
    return problems


def is_plane(points, f: StarForest) -> bool:
    segs = [(points[u], points[v]) for u, v in f.edges()]
    return not any(segments_properly_cross(s, t) for s, t in itertools.combinations(segs, 2))


def component_count(f: StarForest) -> int:
    return len(f.stars)


def is_spanning(f: StarForest, n: int) -> bool:
    return n > 0 and f.vertices() == set(range(n))


def is_perfect_matching(f: StarForest, n: int) -> bool:
    if n % 2 or len(f.stars) != n // 2:
        return False
    return all(len(s.leaves) == 1 for s in f.stars) and is_spanning(f, n)


def _degrees(f: StarForest) -> dict[int, int]:
    deg: dict[int, int] = {}
    for u, v in f.edges():
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return deg


def broken_double_stars_violations(d: Decomposition) -> list[str]:
    """Reasons ``d`` fails to be a broken double stars decomposition.

    Uses degrees rather than center designations, so the arbitrary center
    of single-edge stars does not matter.
    """
    n = d.n
    if n % 2 or n < 4:
        return [f"n={n} is not an even number >= 4"]
    k = n // 2
    if len(d.forests) != k + 1:
        return [f"expected {k + 1} forests, got {len(d.forests)}"]
    if validate_decomposition(d):
        return ["not a valid decomposition"]
    matchings = [i for i, f in enumerate(d.forests) if is_perfect_matching(f, n)]
    if not matchings:
        return ["no perfect matching forest"]
    for mi in matchings:
        problems = _bds_given_matching(d, mi)
        if not problems:
            return []
    return problems


def _bds_given_matching(d: Decomposition, mi: int) -> list[str]:
    k = d.n // 2
    pairs = [frozenset(e) for e in d.forests[mi].edges()]
    options: list[list[int]] = []
    problems = []
    for fi, f in enumerate(d.forests):
        if fi == mi:
            continue
        deg = _degrees(f)
        ok = []
        if component_count(_normalized(f)) == 2:
            for pi, p in enumerate(pairs):
                u, v = sorted(p)
                if deg.get(u) != k - 1 or deg.get(v) != k - 1:
                    continue
                if all((a in p) != (b in p) for a, b in f.edges()):
                    ok.append(pi)
        if not ok:
            problems.append(f"forest {fi}: not two balanced stars centered on a matching edge")
        options.append(ok)
    if problems:
        return problems
    if len(bipartite_matching(options)) < len(options):
        return ["forests cannot be assigned to distinct matching edges"]
    return []


def bipartite_matching(options: list[list[int]]) -> dict[int, int]:
    """Maximum matching of left items to right items (Kuhn's algorithm).

    ``options[i]`` lists the right items acceptable to left item ``i``;
    returns ``{left: right}``.
    """
    owner: dict[int, int] = {}

    def augment(i, seen):
        for r in options[i]:
            if r in seen:
                continue
            seen.add(r)
            if r not in owner or augment(owner[r], seen):
                owner[r] = i
                return True
        return False

    for i in range(len(options)):
        augment(i, set())
    return {i: r for r, i in owner.items()}


def _normalized(f: StarForest) -> StarForest:
    """Regroup edges into maximal stars (merges nothing for valid forests)."""
    adj: dict[int, set[int]] = {}
    for u, v in f.edges():
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    stars, done = [], set()
    for c in sorted(adj, key=lambda v: (-len(adj[v]), v)):
        if c in done:
            continue
        leaves = adj[c] - done
        done |= {c} | leaves
        stars.append(Star(c, tuple(leaves)))
    return StarForest(tuple(stars))


def is_broken_double_stars(d: Decomposition) -> bool:
    return not broken_double_stars_violations(d)


def all_vertices_are_centers(d: Decomposition) -> bool:
    return not uncentered_vertices(d)


def uncentered_vertices(d: Decomposition) -> list[int]:
    centers = set()
    for f in d.forests:
        centers |= f.centers()
    return [v for v in range(d.n) if v not in centers]


def canonical(d: Decomposition) -> Decomposition:
    forests = []
    for f in d.forests:
        stars = sorted((s for s in f.stars if s.leaves), key=lambda s: s.center)
        forests.append(StarForest(tuple(stars)))
    forests.sort(key=lambda f: sorted(f.edges()))
    return Decomposition(d.n, tuple(forests))


def canonical_serialize(d: Decomposition) -> str:
    """One forest per line: ``center:(leaf,leaf);center:(leaf)``."""
    c = canonical(d)
    lines = [f"n={c.n}"]
    for f in c.forests:
        lines.append(";".join(f"{s.center}:({','.join(map(str, s.leaves))})" for s in f.stars))
    return "\n".join(lines) + "\n"


def parse_canonical(text: str) -> Decomposition:
    lines = text.rstrip("\n").split("\n")
    if not lines[0].startswith("n="):
        raise ValueError("missing n= header")
    n = int(lines[0][2:])
    forests = []
    for line in lines[1:]:
        stars = []
        for chunk in filter(None, line.split(";")):
            center, rest = chunk.split(":", 1)
            leaves = rest.strip("()")
            stars.append(Star(int(center), tuple(int(v) for v in leaves.split(",") if v)))
        forests.append(StarForest(tuple(stars)))
    return Decomposition(n, tuple(forests))


def edge_partition(d: Decomposition) -> frozenset[frozenset[tuple[int, int]]]:
    """The decomposition as an unordered set of edge sets (forget centers)."""
    return frozenset(frozenset(f.edges()) for f in d.forests if f.edges())


def forest_from_edges(edges, prefer=()) -> StarForest:
    """Build a star-forest from an edge set that is known to be one.

    Single-edge components take the endpoint listed first in ``prefer``
    (else the smaller index) as center.
    """
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    rank = {v: i for i, v in enumerate(prefer)}
    stars, done = [], set()
    for c in sorted(adj, key=lambda v: (-len(adj[v]), rank.get(v, len(rank)), v)):
        if c in done:
            continue
        done |= {c} | adj[c]
        stars.append(Star(c, tuple(adj[c])))
    return StarForest(tuple(sorted(stars, key=lambda s: s.center)))
