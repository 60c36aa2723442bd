"""Covering, tree counting, k-linked set counting and binomial estimates."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError, EnumerationLimitError, InfeasibleCoverError
from .graph_core import RegularBipartiteGraph, Vertex, VertexSet, members

BigCount = int


@dataclass(frozen=True)
class CoverInstance:
    """Bipartite incidence between P and Q, stored from the Q side.

    ``neighbors[q]`` is the mask of P-vertices adjacent to ``q``.  Ids in P
    and Q are independent namespaces.
    """

    P: VertexSet
    neighbors: dict[int, VertexSet] = field(hash=False)

    @classmethod
    def from_graph(cls, g: RegularBipartiteGraph, P: VertexSet, Q: VertexSet) -> "CoverInstance":
        return cls(P, {q: g.neighbor_mask(q) & P for q in members(Q)})

    @property
    def Q(self) -> VertexSet:
        out = 0
        for q in self.neighbors:
            out |= 1 << q
        return out

    @property
    def min_degree_p(self) -> int:
        deg = Counter()
        for mask in self.neighbors.values():
            deg.update(members(mask))
        return min((deg[p] for p in members(self.P)), default=0)

    @property
    def max_degree_q(self) -> int:
        return max((m.bit_count() for m in self.neighbors.values()), default=0)


def lovasz_stein_bound(inst: CoverInstance) -> float:
    """(|Q|/a)(1 + ln b) for the instance's a = min P-degree, b = max Q-degree."""
    a, b = inst.min_degree_p, inst.max_degree_q
    if a == 0:
        return math.inf
    return len(inst.neighbors) / a * (1 + math.log(b))


def greedy_cover(inst: CoverInstance) -> VertexSet:
    """Greedy cover of P: take the q covering most uncovered p, ties by id.

    The result is checked against the Lovasz-Stein size bound before it is
    returned.
    """
    reachable = 0
    for mask in inst.neighbors.values():
        reachable |= mask
    missing = inst.P & ~reachable
    if missing:
        raise InfeasibleCoverError(f"P-vertex {members(missing)[0]} has no neighbour in Q")
    order = sorted(inst.neighbors)
    uncovered = inst.P
    chosen = 0
    size = 0
    while uncovered:
        best_q, best_gain = -1, 0
        for q in order:
            gain = (inst.neighbors[q] & uncovered).bit_count()
            if gain > best_gain:
                best_q, best_gain = q, gain
        chosen |= 1 << best_q
        size += 1
        uncovered &= ~inst.neighbors[best_q]
    if inst.P and size > lovasz_stein_bound(inst) + 1e-9:
        raise AssertionError(f"greedy cover of size {size} exceeds the Lovasz-Stein bound")
    return chosen


def rooted_subtree_count(branching: int, n: int) -> BigCount:
    """Number of n-vertex rooted subtrees of the infinite branching-ary tree."""
    if branching < 1 or n < 1:
        raise DomainError("need branching >= 1 and n >= 1")
    num = math.comb(branching * n, n)
    den = (branching - 1) * n + 1
    q, r = divmod(num, den)
    assert r == 0
    return q


def count_k_linked_sets(g: RegularBipartiteGraph, v: Vertex, n: int, k: int,
                        within: str = "class", budget: int = 10**7) -> BigCount:
    """Number of k-linked n-sets containing ``v``.

    ``within="class"`` restricts to v's bipartition class, ``"all"`` allows
    any vertices.  Each set is reached by exactly one include/exclude path.
    """
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    if within == "class":
        domain = g.class_x if g.class_x >> v & 1 else g.class_y
    elif within == "all":
        domain = g.full
    else:
        raise DomainError(f"unknown domain {within!r}")
    aux: dict[int, int] = {}

    def hop(w):
        if w not in aux:
            aux[w] = g.ball(1 << w, k) & domain & ~(1 << w)
        return aux[w]

    nodes = 0

    def rec(S, size, ext, banned):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationLimitError("k-linked enumeration budget exceeded",
                                        {"nodes": nodes})
        if size == n:
            return 1
        total = 0
        while ext:
            w = (ext & -ext).bit_length() - 1
            ext &= ~(1 << w)
            grown = ext | (hop(w) & ~S & ~banned)
            total += rec(S | (1 << w), size + 1, grown & ~(1 << w), banned)
            banned |= 1 << w
        return total

    start = 1 << v
    return rec(start, 1, hop(v), start)


def binary_entropy(x) -> float:
    if not 0 <= x <= 1:
        raise DomainError(f"entropy argument {x} outside [0, 1]")
    if x == 0 or x == 1:
        return 0.0
    x = float(x)
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _entropy_mp(c: Fraction):
    if c == 0 or c == 1:
        return mpmath.mpf(0)
    x = mpmath.mpf(c.numerator) / c.denominator
    return -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)


def entropy_bound_holds(N: int, c) -> bool:
    """Whether sum_{i <= floor(cN)} C(N, i) <= 2^{H(c) N}.

    When cN is an integer k, 2^{H(c)N} = N^N / (k^k (N-k)^{N-k}) and the
    comparison is done in exact integers; otherwise at 256-bit precision.
    """
    c = Fraction(c)
    if N < 1 or not 0 <= c <= Fraction(1, 2):
        raise DomainError("need N >= 1 and 0 <= c <= 1/2")
    cn = c * N
    m = math.floor(cn)
    total = sum(math.comb(N, i) for i in range(m + 1))
    if cn.denominator == 1:
        k = m
        return total * k**k * (N - k) ** (N - k) <= N**N
    with mpmath.workprec(256):
        return mpmath.log(total, 2) <= N * _entropy_mp(c)


def binomial_tail_bound(n: int, k: int) -> tuple[BigCount, float]:
    """(sum_{i<=k} C(n, i), (e n / k)^k).

    For 3k <= n the exact geometric-series bound
    sum <= C(n, k) (n - k + 1) / (n - 2k + 1) is asserted.
    """
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    total = sum(math.comb(n, i) for i in range(k + 1))
    if 3 * k <= n:
        assert total * (n - 2 * k + 1) <= math.comb(n, k) * (n - k + 1)
    return total, (math.e * n / k) ** k
