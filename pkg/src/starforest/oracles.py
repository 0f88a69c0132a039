"""Slow, obviously-correct reference implementations used for cross-checks."""
from __future__ import annotations

import itertools

import numpy as np

from .geom import cross, orientation, point_in_triangle_interior


def naive_assignments(n: int, t: int, chunk: int = 1 << 18):
    """All maps edge -> forest (``t ** C(n,2)`` of them) whose classes are
    non-empty star-forests. Yields arrays of shape (k, C(n,2))."""
    edges = list(itertools.combinations(range(n), 2))
    m = len(edges)
    total = t**m
    inc = np.zeros((m, n), dtype=np.int64)
    for i, (u, v) in enumerate(edges):
        inc[i, u] = inc[i, v] = 1
    us = np.array([u for u, _ in edges])
    vs = np.array([v for _, v in edges])
    powers = t ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        A = (codes[:, None] // powers[None, :]) % t
        ok = np.ones(len(A), dtype=bool)
        for f in range(t):
            M = A == f
            ok &= M.any(axis=1)
            deg = M.astype(np.int64) @ inc
            both = (deg[:, us] >= 2) & (deg[:, vs] >= 2) & M
            ok &= ~both.any(axis=1)
        yield A[ok]


def naive_partitions(n: int, t: int):
    """Raw valid assignment count and the set of distinct edge partitions."""
    edges = list(itertools.combinations(range(n), 2))
    raw = 0
    parts = set()
    for block in naive_assignments(n, t):
        raw += len(block)
        for row in block:
            groups = [frozenset(e for e, f in zip(edges, row) if f == g) for g in range(t)]
            parts.add(frozenset(groups))
    return raw, parts


def hull_vertices_bruteforce(ps) -> set[int]:
    """Points not strictly inside any triangle of the other points."""
    n = len(ps)
    inside = set()
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for a, b, c in itertools.combinations(others, 3):
            if cross(ps[a], ps[b], ps[c]) and point_in_triangle_interior(ps[i], ps[a], ps[b], ps[c]):
                inside.add(i)
                break
    return set(range(n)) - inside


def same_order_type_bruteforce(p, q) -> bool:
    """Try every relabeling of ``q`` (and its mirror image) against ``p``."""
    n = len(p)
    if n != len(q):
        return False
    ref = [orientation(p[i], p[j], p[k]) for i, j, k in itertools.combinations(range(n), 3)]
    for perm in itertools.permutations(range(n)):
        got = [
            orientation(q[perm[i]], q[perm[j]], q[perm[k]])
            for i, j, k in itertools.combinations(range(n), 3)
        ]
        if got == ref or [-x for x in got] == ref:
            return True
    return False
