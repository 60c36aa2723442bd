"""Regular bipartite host graphs with bit-parallel vertex sets.

A vertex is an ``int`` id in ``[0, n)``.  A vertex set is an ``int`` used
as a bitmask: bit ``v`` is set iff vertex ``v`` belongs to the set.  Python
integers give exact, arbitrary-width set algebra for free (``|``, ``&``,
``^``, ``A & ~B``), and ``int.bit_count`` is popcount.

For the hypercube, vertex ``v`` is the 0/1 string whose i-th coordinate is
bit i of ``v``; strings are written most-significant coordinate first, so
``"011"`` is vertex 3.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BipartitenessError,
    DomainError,
    GraphParseError,
    NoPathError,
    RegularityError,
    SizeLimitError,
)

VertexSet = int
Vertex = int

MAX_DIMENSION = 20
MAX_VERTICES = 1 << MAX_DIMENSION

# Above this many vertices, per-vertex neighbour masks are not precomputed.
_MASK_TABLE_LIMIT = 4096


def popcount(mask: VertexSet) -> int:
    return mask.bit_count()


def from_vertices(vertices: Iterable[Vertex]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_to_bool(mask: VertexSet, n: int) -> np.ndarray:
    """Unpack ``mask`` into a length-``n`` boolean array."""
    nbytes = (n + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def bool_to_mask(flags: np.ndarray) -> VertexSet:
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def members(mask: VertexSet) -> list[Vertex]:
    """Members of ``mask`` in ascending id order."""
    if mask.bit_length() > 4096:
        return np.flatnonzero(mask_to_bool(mask, mask.bit_length())).tolist()
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def lowest(mask: VertexSet) -> Vertex:
    if not mask:
        raise DomainError("lowest() of an empty set")
    return (mask & -mask).bit_length() - 1


def parse_vertex(bits: str) -> Vertex:
    """``"011"`` -> 3 (leftmost character is the highest coordinate)."""
    return int(bits, 2)


def format_vertex(v: Vertex, d: int) -> str:
    return format(v, f"0{d}b")


def _ge_threshold(planes: list[int], k: int, full: int) -> int:
    """Bit-sliced comparison: mask of positions whose counter value is >= k."""
    if k <= 0:
        return full
    if k >= 1 << len(planes):
        return 0
    gt, eq = 0, full
    for j in reversed(range(len(planes))):
        p = planes[j]
        if (k >> j) & 1:
            eq &= p
        else:
            gt |= eq & p
            eq &= full ^ p
    return gt | eq


def _accumulate(planes: list[int], x: int) -> None:
    """Add indicator vector ``x`` into a bit-sliced counter (ripple carry)."""
    j = 0
    carry = x
    while carry:
        if j == len(planes):
            planes.append(carry)
            return
        p = planes[j]
        planes[j] = p ^ carry
        carry &= p
        j += 1


class RegularBipartiteGraph:
    """A d-regular bipartite graph with classes X and Y.

    ``adjacency`` is an ``(n, d)`` integer array of neighbour ids.  The
    graph is treated as immutable after construction.
    """

    def __init__(self, adjacency, class_x: VertexSet, class_y: VertexSet | None = None,
                 validate: bool = True):
        adjacency = np.asarray(adjacency, dtype=np.int64)
        if adjacency.ndim != 2:
            raise DomainError("adjacency must be an (n, d) array")
        n, d = adjacency.shape
        if n > MAX_VERTICES:
            raise SizeLimitError(f"{n} vertices exceeds the cap of {MAX_VERTICES}")
        if d < 1:
            raise DomainError("degree must be at least 1")
        self._adjacency = adjacency
        self.n = n
        self.degree = d
        self.full = (1 << n) - 1
        self.class_x = class_x
        self.class_y = self.full ^ class_x if class_y is None else class_y
        if validate:
            self._validate()

    def _validate(self) -> None:
        if self.class_x & self.class_y:
            raise BipartitenessError("classes X and Y intersect")
        if self.class_x | self.class_y != self.full:
            raise BipartitenessError("classes X and Y do not cover V")
        adj = self._adjacency
        if adj.min() < 0 or adj.max() >= self.n:
            raise DomainError("neighbour id out of range")
        in_x = mask_to_bool(self.class_x, self.n)
        if np.any(in_x[adj] == in_x[:, None]):
            raise BipartitenessError("an edge lies inside one class")
        srt = np.sort(adj, axis=1)
        if np.any(srt[:, 1:] == srt[:, :-1]):
            raise RegularityError("duplicate edge")
        # symmetric adjacency: every (u, w) has a matching (w, u)
        u = np.repeat(np.arange(self.n), self.degree)
        w = adj.ravel()
        fwd = np.sort(u * self.n + w)
        bwd = np.sort(w * self.n + u)
        if not np.array_equal(fwd, bwd):
            raise RegularityError("adjacency is not symmetric")

    @property
    def adjacency(self) -> np.ndarray:
        return self._adjacency

    def neighbors(self, v: Vertex) -> list[Vertex]:
        return sorted(self.adjacency[v].tolist())

    @cached_property
    def _neighbor_masks(self) -> list[int] | None:
        if self.n > _MASK_TABLE_LIMIT:
            return None
        return [from_vertices(row) for row in self.adjacency.tolist()]

    def neighbor_mask(self, v: Vertex) -> VertexSet:
        table = self._neighbor_masks
        if table is not None:
            return table[v]
        return from_vertices(self.adjacency[v].tolist())

    def neighborhood(self, A: VertexSet) -> VertexSet:
        if not A:
            return 0
        table = self._neighbor_masks
        if table is not None and A.bit_count() < 64:
            out = 0
            for v in members(A):
                out |= table[v]
            return out
        idx = np.flatnonzero(mask_to_bool(A, self.n))
        flags = np.zeros(self.n, dtype=bool)
        flags[self.adjacency[idx].ravel()] = True
        return bool_to_mask(flags)

    def degree_counts(self, B: VertexSet) -> np.ndarray:
        """``counts[v] = d_B(v)`` for every vertex."""
        return mask_to_bool(B, self.n)[self.adjacency].sum(axis=1)

    def at_least(self, B: VertexSet, k: int) -> VertexSet:
        """Vertices with at least ``k`` neighbours in ``B``."""
        if k <= 0:
            return self.full
        if k > self.degree:
            return 0
        return bool_to_mask(self.degree_counts(B) >= k)

    def incidences(self, A: VertexSet, B: VertexSet) -> int:
        """Sum over u in A of d_B(u)."""
        if not A or not B:
            return 0
        counts = self.degree_counts(B)
        return int(counts[mask_to_bool(A, self.n)].sum())

    def ball(self, A: VertexSet, radius: int) -> VertexSet:
        """All vertices within distance ``radius`` of ``A``."""
        reach = A
        frontier = A
        for _ in range(radius):
            frontier = self.neighborhood(frontier) & ~reach
            if not frontier:
                break
            reach |= frontier
        return reach

    def distance(self, u: Vertex, v: Vertex) -> int:
        if u == v:
            return 0
        target = 1 << v
        reach = frontier = 1 << u
        steps = 0
        while frontier:
            steps += 1
            frontier = self.neighborhood(frontier) & ~reach
            if frontier & target:
                return steps
            reach |= frontier
        raise NoPathError(f"no path between {u} and {v}")

    def class_of(self, A: VertexSet) -> tuple[VertexSet, VertexSet]:
        """(own class, opposite class) for a one-sided set ``A``.

        The empty set is treated as lying in X.
        """
        if A & ~self.class_x == 0:
            return self.class_x, self.class_y
        if A & ~self.class_y == 0:
            return self.class_y, self.class_x
        raise DomainError("vertex set meets both bipartition classes")

    def edges(self) -> Iterator[tuple[Vertex, Vertex]]:
        """Edges as (x, y) with x in X, ascending."""
        for x in members(self.class_x):
            for y in self.neighbors(x):
                yield x, y

    @cached_property
    def codegree(self) -> int:
        return co_degree(self)

    def num_edges(self) -> int:
        return self.class_x.bit_count() * self.degree

    def __repr__(self):
        return (f"{type(self).__name__}(n={self.n}, d={self.degree}, "
                f"|X|={self.class_x.bit_count()}, |Y|={self.class_y.bit_count()})")


class Hypercube(RegularBipartiteGraph):
    """Q_d with X = even-weight vertices and Y = odd-weight vertices."""

    def __init__(self, d: int):
        if isinstance(d, bool) or not isinstance(d, int) or not 1 <= d <= MAX_DIMENSION:
            raise SizeLimitError(f"hypercube dimension must be in [1, {MAX_DIMENSION}], got {d!r}")
        self.d = d
        self.n = 1 << d
        self.degree = d
        self.full = (1 << self.n) - 1
        even, odd = 1, 0
        for i in range(d):
            s = 1 << i
            even, odd = even | (odd << s), odd | (even << s)
        self.class_x = even
        self.class_y = odd
        # _low[i]: positions whose bit i is 0
        self._low = []
        for i in range(d):
            s = 1 << i
            rep = self.full // ((1 << (2 * s)) - 1)
            self._low.append(((1 << s) - 1) * rep)

    @property
    def even(self) -> VertexSet:
        return self.class_x

    @property
    def odd(self) -> VertexSet:
        return self.class_y

    @cached_property
    def _adjacency(self) -> np.ndarray:
        ids = np.arange(self.n, dtype=np.int64)[:, None]
        return ids ^ (np.int64(1) << np.arange(self.d, dtype=np.int64))[None, :]

    def flip(self, A: VertexSet, i: int) -> VertexSet:
        """Image of ``A`` under toggling coordinate ``i``."""
        s = 1 << i
        low = self._low[i]
        return ((A & low) << s) | ((A >> s) & low)

    def neighbors(self, v: Vertex) -> list[Vertex]:
        return sorted(v ^ (1 << i) for i in range(self.d))

    def neighbor_mask(self, v: Vertex) -> VertexSet:
        out = 0
        for i in range(self.d):
            out |= 1 << (v ^ (1 << i))
        return out

    def neighborhood(self, A: VertexSet) -> VertexSet:
        out = 0
        for i in range(self.d):
            out |= self.flip(A, i)
        return out

    def _counter(self, B: VertexSet) -> list[int]:
        planes: list[int] = []
        for i in range(self.d):
            _accumulate(planes, self.flip(B, i))
        return planes

    def at_least(self, B: VertexSet, k: int) -> VertexSet:
        if k <= 0:
            return self.full
        if k > self.d or not B:
            return 0
        if k == 1:
            return self.neighborhood(B)
        return _ge_threshold(self._counter(B), k, self.full)

    def degree_counts(self, B: VertexSet) -> np.ndarray:
        counts = np.zeros(self.n, dtype=np.int64)
        for i in range(self.d):
            counts += mask_to_bool(self.flip(B, i), self.n)
        return counts

    def incidences(self, A: VertexSet, B: VertexSet) -> int:
        return sum((A & self.flip(B, i)).bit_count() for i in range(self.d))

    def distance(self, u: Vertex, v: Vertex) -> int:
        return (u ^ v).bit_count()

    def ball_around(self, center: Vertex, radius: int) -> VertexSet:
        return self.ball(1 << center, radius)

    def __repr__(self):
        return f"Hypercube(d={self.d})"


def build_hypercube(d: int) -> Hypercube:
    return Hypercube(d)


@lru_cache(maxsize=None)
def cached_hypercube(d: int) -> Hypercube:
    """Shared immutable Q_d instance."""
    return Hypercube(d)


def neighborhood(g: RegularBipartiteGraph, A: VertexSet) -> VertexSet:
    return g.neighborhood(A)


def distance(g: RegularBipartiteGraph, u: Vertex, v: Vertex) -> int:
    return g.distance(u, v)


@dataclass(frozen=True)
class EdgeBoundary:
    count: int
    edges: tuple[tuple[Vertex, Vertex], ...] | None = None


def nabla(g: RegularBipartiteGraph, A: VertexSet, B: VertexSet,
          with_edges: bool = False) -> EdgeBoundary:
    """Edges with one end in ``A`` and the other in ``B``.

    Each edge is counted once, including edges inside ``A & B``.
    """
    both = A & B
    count = g.incidences(A, B) - g.incidences(both, both) // 2
    edges = None
    if with_edges:
        found = set()
        for u in members(A):
            for w in g.neighbors(u):
                if B >> w & 1:
                    found.add((min(u, w), max(u, w)))
        edges = tuple(sorted(found))
    return EdgeBoundary(count, edges)


def co_degree(g: RegularBipartiteGraph, side: str = "Y") -> int:
    """Max number of common neighbours over distinct pairs in one class.

    Returns 0 when the class has fewer than two vertices.
    """
    cls = g.class_y if side == "Y" else g.class_x
    if cls.bit_count() < 2:
        return 0
    if isinstance(g, Hypercube):
        # vertex-transitive: one base vertex suffices
        y0 = lowest(cls)
        base = g.neighbor_mask(y0)
        return max((base & g.neighbor_mask(y)).bit_count()
                   for y in members(g.ball_around(y0, 2) & cls) if y != y0)
    best = 0
    for y in members(cls):
        shared = Counter()
        for x in g.neighbors(y):
            for y2 in g.neighbors(x):
                if y2 != y:
                    shared[y2] += 1
        if shared:
            best = max(best, max(shared.values()))
    return best


def complete_bipartite(n: int) -> RegularBipartiteGraph:
    """K_{n,n}: X = 0..n-1, Y = n..2n-1."""
    adj = [list(range(n, 2 * n)) for _ in range(n)] + [list(range(n)) for _ in range(n)]
    return RegularBipartiteGraph(adj, (1 << n) - 1)


def from_edge_list(n_x: int, n_y: int, d: int,
                   edges: Sequence[tuple[int, int]]) -> RegularBipartiteGraph:
    """Build from (x, y) pairs with X = 0..n_x-1 and Y = n_x..n_x+n_y-1."""
    rows: list[list[int]] = [[] for _ in range(n_x + n_y)]
    for x, y in edges:
        rows[x].append(y)
        rows[y].append(x)
    return RegularBipartiteGraph(rows, (1 << n_x) - 1)


def _random_perfect_matching(allowed: list[set[int]], rng: np.random.Generator) -> list[int]:
    """Perfect matching of a regular bipartite graph by shuffled augmenting paths."""
    n = len(allowed)
    match_y = [-1] * n
    order = [list(rng.permutation(sorted(a))) for a in allowed]

    def augment(x, seen):
        for y in order[x]:
            y = int(y)
            if y in seen:
                continue
            seen.add(y)
            if match_y[y] < 0 or augment(match_y[y], seen):
                match_y[y] = x
                return True
        return False

    for x in rng.permutation(n).tolist():
        if not augment(x, set()):
            raise DomainError("no perfect matching")  # impossible for regular graphs
    match_x = [0] * n
    for y, x in enumerate(match_y):
        match_x[x] = y
    return match_x


def random_regular_bipartite(n: int, d: int, rng: np.random.Generator) -> RegularBipartiteGraph:
    """Random simple d-regular bipartite graph on n + n vertices.

    Built as a union of d perfect matchings, each drawn by randomised
    augmenting paths among the pairs not used yet.  The pairs not used form
    a regular bipartite graph, so a perfect matching always exists.  The
    distribution is not uniform over all such graphs.
    """
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    allowed = [set(range(n)) for _ in range(n)]
    for _ in range(d):
        match = _random_perfect_matching(allowed, rng)
        for x, y in enumerate(match):
            allowed[x].discard(y)
    edges = [(x, n + y) for x in range(n) for y in range(n) if y not in allowed[x]]
    return from_edge_list(n, n, d, edges)


def load_graph(path) -> RegularBipartiteGraph:
    """Read the ``bipartite <d> <nX> <nY>`` edge-list format.

    Raises a GraphFormatError subclass carrying the offending line number.
    """
    text = Path(path).read_text(encoding="utf-8")
    header = None
    degrees: list[int] = []
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "bipartite":
                raise GraphParseError("expected header 'bipartite <d> <nX> <nY>'", lineno)
            try:
                d, n_x, n_y = (int(p) for p in parts[1:])
            except ValueError:
                raise GraphParseError("non-integer header field", lineno) from None
            if d < 1 or n_x < 1 or n_y < 1:
                raise GraphParseError("header fields must be positive", lineno)
            if n_x + n_y > MAX_VERTICES:
                raise SizeLimitError(f"line {lineno}: {n_x + n_y} vertices exceeds cap")
            if n_x != n_y:
                raise RegularityError("a regular bipartite graph needs nX == nY", lineno)
            header = (d, n_x, n_y)
            degrees = [0] * (n_x + n_y)
            continue
        d, n_x, n_y = header
        if len(parts) != 2:
            raise GraphParseError("expected '<x> <y>'", lineno)
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("non-integer vertex id", lineno) from None
        if not (0 <= x < n_x + n_y and 0 <= y < n_x + n_y):
            raise GraphParseError("vertex id out of range", lineno)
        if x >= n_x or y < n_x:
            raise BipartitenessError(f"edge ({x}, {y}) does not join X to Y", lineno)
        if (x, y) in seen:
            raise RegularityError(f"duplicate edge ({x}, {y})", lineno)
        seen.add((x, y))
        degrees[x] += 1
        degrees[y] += 1
        if degrees[x] > d or degrees[y] > d:
            raise RegularityError(f"degree exceeds {d}", lineno)
        edges.append((x, y))
    if header is None:
        raise GraphParseError("empty file", max(last_line, 1))
    d, n_x, n_y = header
    short = [v for v, k in enumerate(degrees) if k != d]
    if short:
        raise RegularityError(f"vertex {short[0]} has degree {degrees[short[0]]}, expected {d}",
                              last_line)
    return from_edge_list(n_x, n_y, d, edges)


def dump_graph(g: RegularBipartiteGraph, path) -> None:
    """Write ``g`` in the edge-list format, relabelling X then Y ascending."""
    xs, ys = members(g.class_x), members(g.class_y)
    label = {v: i for i, v in enumerate(xs)}
    label.update({v: len(xs) + i for i, v in enumerate(ys)})
    lines = [f"bipartite {g.degree} {len(xs)} {len(ys)}"]
    for x in xs:
        for y in sorted(label[w] for w in g.neighbors(x)):
            lines.append(f"{label[x]} {y}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
