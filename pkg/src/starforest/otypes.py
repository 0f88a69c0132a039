"""Order types of small point sets: database I/O, signatures, scans."""
from __future__ import annotations

import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import geom
from .geom import Point
from .model import from_dict, to_dict
from .search import SearchOptions, exists_decomposition

log = logging.getLogger(__name__)

#: Number of order types of n points in general position.
KNOWN_COUNTS = {3: 1, 4: 2, 5: 3, 6: 16, 7: 135, 8: 3315}

DATA_DIR = Path(__file__).with_name("data")


def data_dir() -> Path:
    return Path(os.environ.get("STARFOREST_DATA", DATA_DIR))


def database_path(n: int) -> Path:
    return data_dir() / f"otypes{n:02d}.b{'08' if n <= 8 else '16'}"


def width_for(n: int) -> int:
    return 8 if n <= 8 else 16


# ---------------------------------------------------------------- file format


def parse_otypes(raw: bytes, n: int, coord_width: int | None = None) -> list[list[Point]]:
    """Split a database file into point sets of ``n`` points each.

    Records are concatenated; each point is ``x`` then ``y`` as unsigned
    8-bit or little-endian unsigned 16-bit integers.
    """
    width = coord_width or width_for(n)
    if width not in (8, 16):
        raise ValueError(f"coordinate width must be 8 or 16, got {width}")
    record = n * 2 * (width // 8)
    if len(raw) % record:
        raise ValueError(f"file length {len(raw)} is not a multiple of the record size {record}")
    arr = np.frombuffer(raw, dtype=np.uint8 if width == 8 else "<u2").reshape(-1, n, 2)
    sets = [[Point(int(x), int(y)) for x, y in rec] for rec in arr]
    for i, ps in enumerate(sets):
        if not geom.is_general_position(ps):
            raise ValueError(f"record {i} is not in general position (wrong n or width?)")
    return sets


def serialize_otypes(point_sets, coord_width: int = 8) -> bytes:
    limit = 2**coord_width
    arr = np.asarray(point_sets, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= limit):
        raise ValueError(f"coordinates do not fit in {coord_width} bits")
    return arr.astype(np.uint8 if coord_width == 8 else "<u2").tobytes()


def load_database(n: int, path: Path | str | None = None) -> list[list[Point]]:
    p = Path(path) if path else database_path(n)
    if not p.exists():
        raise FileNotFoundError(f"order type database not found: {p}")
    return parse_otypes(p.read_bytes(), n)


# ----------------------------------------------------------------- signatures


def _orientation_tensor(pts: np.ndarray) -> np.ndarray:
    """Signs of all ordered triples; ``pts`` has shape (B, n, 2)."""
    p = pts.astype(np.int64)
    d = p[:, None, :, :] - p[:, :, None, :]  # d[b, i, j] = p_j - p_i
    # cross(p_i, p_j, p_k) = d[i,j] x d[i,k]
    c = d[:, :, :, None, 0] * d[:, :, None, :, 1] - d[:, :, :, None, 1] * d[:, :, None, :, 0]
    return np.sign(c).astype(np.int8)


def _triples(n):
    return np.array(list(itertools.combinations(range(n), 3)), dtype=np.intp).reshape(-1, 3)


def signature_batch(pts) -> list[str]:
    """Canonical order-type signature for each point set in the batch.

    Candidate labelings start at a hull vertex and list the remaining
    points in angular order around it, counterclockwise or (for the mirror
    image, with all signs negated) clockwise. The signature is the smallest
    packed sign string among the candidates.
    """
    pts = np.asarray(pts, dtype=np.int64)
    B, n, _ = pts.shape
    O = _orientation_tensor(pts)
    tri = _triples(n)
    # point i precedes j around a hull vertex a iff O[a, i, j] > 0
    before = (O > 0).sum(axis=3)  # before[b, a, i] = #{j : O[a,i,j] > 0}
    rank = (n - 2) - before  # position among the other n-1 points
    eye = np.eye(n, dtype=bool)
    # a is a hull vertex iff the others occupy every rank exactly once
    others = ~eye[None]
    hull = np.ones((B, n), dtype=bool)
    for a in range(n):
        r = rank[:, a, :]
        r = np.where(others[:, a, :], r, -1)
        srt = np.sort(r, axis=1)[:, 1:]
        hull[:, a] = (srt == np.arange(n - 1)).all(axis=1)
    weights = (1 << np.arange(len(tri) - 1, -1, -1, dtype=np.int64)) if len(tri) < 63 else None
    best: list[str | None] = [None] * B
    for a in range(n):
        labels = np.where(others[:, a, :], rank[:, a, :] + 1, 0)  # new label of each point
        for mirror in (False, True):
            lab = labels if not mirror else np.where(others[:, a, :], n - labels, 0)
            inv = np.argsort(lab, axis=1)  # inv[b, newlabel] = old index
            I = inv[:, tri[:, 0]]
            J = inv[:, tri[:, 1]]
            K = inv[:, tri[:, 2]]
            s = O[np.arange(B)[:, None], I, J, K]
            if mirror:
                s = -s
            bits = s > 0
            if weights is not None:
                codes = (bits.astype(np.int64) * weights).sum(axis=1)
                strs = [format(int(c), f"0{(len(tri) + 3) // 4}x") for c in codes]
            else:
                strs = ["".join("1" if x else "0" for x in row) for row in bits]
            for b in np.nonzero(hull[:, a])[0]:
                if best[b] is None or strs[b] < best[b]:
                    best[b] = strs[b]
    return [f"{n}:{s}" for s in best]


def order_type_signature(ps) -> str:
    if len(ps) < 3:
        return f"{len(ps)}:"
    return signature_batch([ps])[0]


# ---------------------------------------------------------------- enumeration


def _grid(size: int) -> np.ndarray:
    g = np.arange(size, dtype=np.int64)
    return np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)


def cell_representatives(pts: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """One grid point per open cell of the arrangement of lines through
    pairs of ``pts`` (the grid point closest to the cell's grid mean)."""
    pairs = list(itertools.combinations(range(len(pts)), 2))
    # line normals and offsets; int32 is exact for coordinates below 2^14
    dt = np.int32 if np.abs(pts).max(initial=0) < 2**14 and np.abs(grid).max() < 2**14 else np.int64
    p = pts[[i for i, _ in pairs]].astype(dt)
    q = pts[[j for _, j in pairs]].astype(dt)
    nx, ny = q[:, 0] - p[:, 0], q[:, 1] - p[:, 1]
    off = nx * p[:, 1] - ny * p[:, 0]
    g32 = grid.astype(dt)
    c = g32[:, 1:2] * nx[None] - g32[:, 0:1] * ny[None] - off[None]
    ok = (c != 0).all(axis=1)
    g = grid[ok]
    bits = c[ok] > 0
    if bits.shape[1] < 63:
        keys = bits @ (np.int64(1) << np.arange(bits.shape[1], dtype=np.int64))
        _, inverse = np.unique(keys, return_inverse=True)
    else:
        _, inverse = np.unique(np.packbits(bits, axis=1), axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if not len(inverse):
        return np.zeros((0, 2), dtype=np.int64)
    cells = inverse.max() + 1
    counts = np.bincount(inverse, minlength=cells)
    mean = np.stack([np.bincount(inverse, weights=g[:, a], minlength=cells) for a in (0, 1)], axis=1)
    mean /= counts[:, None]
    dist = ((g - mean[inverse]) ** 2).sum(axis=1)
    # per cell, the member nearest to the mean (ties: lowest grid index)
    order = np.lexsort((np.arange(len(g)), dist, inverse))
    first = np.r_[0, np.flatnonzero(np.diff(inverse[order])) + 1]
    return g[order[first]].astype(np.int64)


def _extend(found: dict, candidates: list, batch: int = 4096) -> int:
    added = 0
    for s in range(0, len(candidates), batch):
        chunk = candidates[s : s + batch]
        for sig, ps in zip(signature_batch(np.array(chunk)), chunk):
            if sig not in found:
                found[sig] = ps
                added += 1
    return added


def enumerate_order_types(n: int, grid_size: int = 256, target: int | None = None) -> list[list[Point]]:
    """One integer realization per order type of ``n`` points.

    Grows from the single triangle by inserting a point into every cell of
    each representative's line arrangement, then closes the result under
    moving one point into any cell of the others' arrangement. Stops once
    ``target`` types (default: the known count) are found or nothing new
    appears.
    """
    target = target or KNOWN_COUNTS.get(n)
    grid = _grid(grid_size)
    m = grid_size - 1
    level = {order_type_signature([(0, 0), (m, 0), (0, m)]): [[0, 0], [m, 0], [0, m]]}
    for size in range(4, n + 1):
        found: dict[str, list] = {}
        cands = []
        for ps in level.values():
            arr = np.array(ps, dtype=np.int64)
            cands += [ps + [list(map(int, c))] for c in cell_representatives(arr, grid)]
        _extend(found, cands)
        goal = KNOWN_COUNTS.get(size) if size < n else target
        frontier = list(found.values())
        while frontier and (goal is None or len(found) < goal):
            fresh: dict[str, list] = {}
            for ps in frontier:
                arr = np.array(ps, dtype=np.int64)
                cands = []
                for i in range(size):
                    rest = np.delete(arr, i, axis=0)
                    for c in cell_representatives(rest, grid):
                        new = [list(map(int, r)) for r in rest]
                        new.insert(i, list(map(int, c)))
                        cands.append(new)
                before = dict(found)
                _extend(found, cands)
                fresh.update({k: v for k, v in found.items() if k not in before})
                if goal is not None and len(found) >= goal:
                    break
            frontier = list(fresh.values())
            log.info("n=%d: %d order types", size, len(found))
        level = found
    return [[Point(*p) for p in ps] for _, ps in sorted(level.items())]


# ----------------------------------------------------------------------- scan


@dataclass
class ScanEntry:
    index: int
    signature: str
    hull_size: int
    decomposable: bool
    centers_condition: bool
    witness: dict | None = None


@dataclass
class ScanReport:
    n: int
    t: int
    entries: list[ScanEntry] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def decomposable(self) -> int:
        return sum(e.decomposable for e in self.entries)

    @property
    def centers_condition(self) -> int:
        return sum(e.centers_condition for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "total": self.total,
            "decomposable": self.decomposable,
            "centers_condition": self.centers_condition,
            "entries": [asdict(e) for e in self.entries],
        }

    def summary(self) -> str:
        lines = [
            f"order types on {self.n} points, t={self.t}",
            f"{'hull':>6} {'sets':>6} {'plane':>6} {'centers':>8}",
        ]
        for h in sorted({e.hull_size for e in self.entries}):
            es = [e for e in self.entries if e.hull_size == h]
            lines.append(
                f"{h:>6} {len(es):>6} {sum(e.decomposable for e in es):>6} "
                f"{sum(e.centers_condition for e in es):>8}"
            )
        lines.append(
            f"{'total':>6} {self.total:>6} {self.decomposable:>6} {self.centers_condition:>8}"
        )
        return "\n".join(lines)


def scan_one(index: int, ps, t: int, require_all_centers: bool = True) -> ScanEntry:
    """Decomposability of one point set, with and without the centers condition."""
    n = len(ps)
    sig = order_type_signature(ps)
    hull = len(geom.convex_hull(ps))
    plain = exists_decomposition(n, SearchOptions(t=t, points=ps))
    centered = None
    if plain is not None and require_all_centers:
        centered = exists_decomposition(n, SearchOptions(t=t, points=ps, require_all_centers=True))
    witness = centered if require_all_centers else plain
    return ScanEntry(
        index=index,
        signature=sig,
        hull_size=hull,
        decomposable=plain is not None,
        centers_condition=centered is not None,
        witness=to_dict(witness) if witness is not None else None,
    )


def _scan_job(args):
    return scan_one(*args)


def scan(
    point_sets,
    t: int,
    require_all_centers: bool = True,
    jobs: int = 1,
    checkpoint: Path | str | None = None,
    progress=None,
) -> ScanReport:
    """Scan every point set; entries are sorted by signature.

    With ``checkpoint`` each finished entry is appended as a JSON line and
    entries already present (matched by signature) are not recomputed.
    """
    point_sets = [list(ps) for ps in point_sets]
    n = len(point_sets[0]) if point_sets else 0
    done: dict[str, ScanEntry] = {}
    ck = Path(checkpoint) if checkpoint else None
    if ck and ck.exists():
        for line in ck.read_text().splitlines():
            if line.strip():
                e = ScanEntry(**json.loads(line))
                done[e.signature] = e
    sigs = [order_type_signature(ps) for ps in point_sets]
    todo = [(i, ps, t, require_all_centers) for i, (ps, s) in enumerate(zip(point_sets, sigs)) if s not in done]
    log.info("scan: %d done, %d to go", len(point_sets) - len(todo), len(todo))
    fh = open(ck, "a") if ck else None
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = ex.map(_scan_job, todo, chunksize=8)
                for e in results:
                    _record(done, e, fh, progress)
        else:
            for job in todo:
                _record(done, _scan_job(job), fh, progress)
    finally:
        if fh:
            fh.close()
    entries = []
    for i, s in enumerate(sigs):
        e = done[s]
        entries.append(ScanEntry(**{**asdict(e), "index": i}))
    entries.sort(key=lambda e: e.signature)
    return ScanReport(n=n, t=t, entries=entries)


def _record(done, e, fh, progress):
    done[e.signature] = e
    if fh:
        fh.write(json.dumps(asdict(e)) + "\n")
        fh.flush()
    if progress:
        progress(e)


def witness_of(entry: ScanEntry):
    return from_dict(entry.witness) if entry.witness else None
