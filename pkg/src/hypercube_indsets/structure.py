"""Closure, smallness and k-linkage of one-sided vertex sets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .graph_core import RegularBipartiteGraph, VertexSet, lowest


@dataclass(frozen=True)
class SetStats:
    A: VertexSet
    closure: VertexSet
    G: VertexSet
    a: int
    g: int
    t: int


@dataclass(frozen=True)
class ComponentDecomposition:
    parts: tuple[VertexSet, ...]
    k: int

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


def closure(g: RegularBipartiteGraph, A: VertexSet) -> VertexSet:
    """[A]: vertices of A's class whose whole neighbourhood lies in N(A).

    A vertex v is excluded exactly when it has a neighbour in the opposite
    class outside N(A), so [A] = X \\ N(Y \\ N(A)).
    """
    X, Y = g.class_of(A)
    G = g.neighborhood(A)
    return X & ~g.neighborhood(Y & ~G)


def is_small(g: RegularBipartiteGraph, A: VertexSet) -> bool:
    X, _ = g.class_of(A)
    return 2 * closure(g, A).bit_count() <= X.bit_count()


def _grow(g: RegularBipartiteGraph, A: VertexSet, seed: VertexSet, k: int) -> VertexSet:
    """The part of A reachable from ``seed`` in hops of distance <= k."""
    comp = frontier = seed
    while frontier:
        frontier = g.ball(frontier, k) & A & ~comp
        comp |= frontier
    return comp


def is_k_linked(g: RegularBipartiteGraph, A: VertexSet, k: int) -> bool:
    if k < 1:
        raise DomainError("k must be at least 1")
    if A.bit_count() <= 1:
        return True
    return _grow(g, A, A & -A, k) == A


def k_components(g: RegularBipartiteGraph, A: VertexSet, k: int) -> ComponentDecomposition:
    """Maximal k-linked pieces of A, ordered by their smallest member."""
    if k < 1:
        raise DomainError("k must be at least 1")
    parts = []
    rest = A
    while rest:
        comp = _grow(g, rest, rest & -rest, k)
        parts.append(comp)
        rest &= ~comp
    return ComponentDecomposition(tuple(parts), k)


def set_stats(g: RegularBipartiteGraph, A: VertexSet) -> SetStats:
    if not A:
        raise DomainError("set_stats needs a nonempty set")
    G = g.neighborhood(A)
    cl = closure(g, A)
    a, gs = cl.bit_count(), G.bit_count()
    return SetStats(A=A, closure=cl, G=G, a=a, g=gs, t=gs - a)


def anchor(g: RegularBipartiteGraph, A: VertexSet) -> int:
    """Lowest-id vertex of N(A), the default anchor v."""
    return lowest(g.neighborhood(A))
