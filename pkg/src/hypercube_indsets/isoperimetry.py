"""Hamming balls and vertex-boundary measurements in Q_d."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, EnumerationLimitError
from .graph_core import (
    Hypercube,
    RegularBipartiteGraph,
    VertexSet,
    bool_to_mask,
    cached_hypercube,
    members,
)

EXHAUSTIVE_MAX_D = 5

# Locked from the exhaustive d <= 4 sweep and ball/sampled sweeps to d = 12:
# the largest observed d * |A| / |N(A)| with |A| <= d is 16/7 (d = 4).
SMALL_SET_CONSTANT = Fraction(5, 2)


def _class_mask(cube: Hypercube, parity: str) -> VertexSet:
    if parity == "even":
        return cube.even
    if parity == "odd":
        return cube.odd
    raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


def _weights(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(n, dtype=np.uint32)).astype(np.int64)


def hamming_ball(d: int, parity: str, size: int, center: int = 0) -> VertexSet:
    """Even/odd Hamming ball of exactly ``size`` vertices around ``center``.

    Class vertices are taken by distance from the centre; the partial outer
    layer is filled in ascending id.
    """
    cube = cached_hypercube(d)
    cls = _class_mask(cube, parity)
    if not 0 <= size <= cls.bit_count():
        raise DomainError(f"ball size {size} outside [0, {cls.bit_count()}]")
    if not 0 <= center < cube.n:
        raise DomainError("center outside V(Q_d)")
    ids = np.asarray(members(cls), dtype=np.int64)
    dist = _weights(cube.n)[ids ^ center]
    order = np.lexsort((ids, dist))
    flags = np.zeros(cube.n, dtype=bool)
    flags[ids[order[:size]]] = True
    return bool_to_mask(flags)


def ball_layers(d: int, parity: str, center: int) -> list[list[int]]:
    """Class vertices grouped by distance from ``center``, nearest first."""
    cube = cached_hypercube(d)
    cls = _class_mask(cube, parity)
    layers: dict[int, list[int]] = {}
    for v in members(cls):
        layers.setdefault((v ^ center).bit_count(), []).append(v)
    return [layers[r] for r in sorted(layers)]


def all_hamming_balls(d: int, parity: str, size: int):
    """Every even/odd Hamming ball of the given size: all centres, all fills."""
    cube = cached_hypercube(d)
    seen = set()
    for center in range(cube.n):
        inner = 0
        remaining = size
        for layer in ball_layers(d, parity, center):
            if remaining <= len(layer):
                for fill in itertools.combinations(layer, remaining):
                    ball = inner
                    for v in fill:
                        ball |= 1 << v
                    if ball not in seen:
                        seen.add(ball)
                        yield ball
                break
            for v in layer:
                inner |= 1 << v
            remaining -= len(layer)


def min_ball_neighborhood(d: int, parity: str, size: int) -> int:
    cube = cached_hypercube(d)
    return min(cube.neighborhood(b).bit_count() for b in all_hamming_balls(d, parity, size))


def boundary_ratio(g: RegularBipartiteGraph, A: VertexSet) -> Fraction:
    """(|N(A)| - |A|) / |N(A)| for a nonempty one-sided A."""
    if not A:
        raise DomainError("boundary ratio of the empty set")
    g.class_of(A)
    n_a = g.neighborhood(A).bit_count()
    return Fraction(n_a - A.bit_count(), n_a)


def min_neighborhood(d: int, parity: str, size: int, mode: str = "exhaustive",
                     samples: int = 2000, seed: int = 0) -> tuple[int, VertexSet]:
    """Minimum |N(A)| over class subsets of the given size, with a minimiser.

    Exhaustive mode is exact and returns the lexicographically first
    minimiser; sampled mode returns the best of Hamming balls and random
    subsets, which is an upper bound on the minimum.
    """
    cube = cached_hypercube(d)
    cls = _class_mask(cube, parity)
    if not 0 <= size <= cls.bit_count():
        raise DomainError(f"size {size} outside [0, {cls.bit_count()}]")
    if size == 0:
        return 0, 0
    if mode == "exhaustive":
        if d > EXHAUSTIVE_MAX_D:
            raise EnumerationLimitError(
                f"exhaustive min_neighborhood is limited to d <= {EXHAUSTIVE_MAX_D}", {"d": d})
        nbr = {v: cube.neighbor_mask(v) for v in members(cls)}
        best, arg = None, 0
        for combo in itertools.combinations(sorted(nbr), size):
            n_mask = 0
            A = 0
            for v in combo:
                n_mask |= nbr[v]
                A |= 1 << v
            n = n_mask.bit_count()
            if best is None or n < best:
                best, arg = n, A
        return best, arg
    if mode != "sampled":
        raise DomainError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    candidates = [hamming_ball(d, parity, size, c) for c in (0, 1)]
    candidates += [star_ball(d, parity, size, c) for c in (0, 1)]
    pool = np.asarray(members(cls))
    for _ in range(samples):
        pick = rng.choice(pool, size=size, replace=False)
        A = 0
        for v in pick.tolist():
            A |= 1 << v
        candidates.append(A)
    scored = [(cube.neighborhood(A).bit_count(), A) for A in candidates]
    return min(scored)


def star_ball(d: int, parity: str, size: int, center: int = 0) -> VertexSet:
    """Hamming ball whose partial layer is filled in lexicographic order.

    Lexicographic initial segments have the smallest upper shadow, so this
    fill tends to minimise |N|.  Layers are compared on the coordinates
    where a vertex differs from the centre.
    """
    layers = ball_layers(d, parity, center)
    A = 0
    remaining = size
    for layer in layers:
        if remaining <= len(layer):
            def lex_key(v):
                diff = v ^ center
                return [i for i in range(d) if diff >> i & 1]
            for v in sorted(layer, key=lex_key)[:remaining]:
                A |= 1 << v
            break
        for v in layer:
            A |= 1 << v
        remaining -= len(layer)
    return A


def layer_mask(d: int, weight: int) -> VertexSet:
    """All vertices of Hamming weight ``weight``."""
    cube = cached_hypercube(d)
    return bool_to_mask(_weights(cube.n) == weight)


def layer_ratio(d: int, i: int, subset: VertexSet | None = None) -> tuple[Fraction, Fraction]:
    """(|B_i| / |N+(B_i)|, (2i+1)/(d-2i)).

    B_i defaults to the whole weight-2i layer; any subset of that layer may
    be passed instead.  N+(B_i) is the part of N(B_i) at weight 2i+1.
    """
    if not 0 <= 2 * i < d:
        raise DomainError(f"need 0 <= 2i < d, got d={d}, i={i}")
    cube = cached_hypercube(d)
    layer = layer_mask(d, 2 * i)
    B = layer if subset is None else subset
    if B & ~layer:
        raise DomainError("subset is not contained in the weight-2i layer")
    if not B:
        raise DomainError("empty layer subset")
    up = cube.neighborhood(B) & layer_mask(d, 2 * i + 1)
    return Fraction(B.bit_count(), up.bit_count()), Fraction(2 * i + 1, d - 2 * i)


def even_ball_inner_radius(d: int, size: int) -> int:
    """Largest even k with |{v in E : |v| <= k}| <= size (ball centred at 0)."""
    k, total = 0, 1
    while k + 2 <= d and total + math.comb(d, k + 2) <= size:
        k += 2
        total += math.comb(d, k)
    return k


@dataclass(frozen=True)
class ExpansionReport:
    d: int
    max_size: int
    max_ratio: Fraction
    witness: VertexSet
    bound: Fraction
    holds: bool
    mode: str


def check_small_set_expansion(d: int, max_size: int, samples: int = 500,
                              seed: int = 0) -> ExpansionReport:
    """Largest |A|/|N(A)| over nonempty A in E with |A| <= max_size.

    Exhaustive for d <= 4; for 5 <= d <= 12 the maximum is taken over
    Hamming balls (both fills, even and odd centres) and random subsets.
    The constant-free form |A| <= (5/2)(1/d)|N(A)| is checked whenever
    max_size <= d.
    """
    if d < 1 or d > 12:
        raise DomainError("check_small_set_expansion supports 1 <= d <= 12")
    cube = cached_hypercube(d)
    cls = cube.even
    max_size = min(max_size, cls.bit_count())
    best = Fraction(0)
    witness = 0
    if d <= 4:
        mode = "exhaustive"
        ids = members(cls)
        nbr = [cube.neighbor_mask(v) for v in ids]
        for s in range(1, max_size + 1):
            for combo in itertools.combinations(range(len(ids)), s):
                n_mask = 0
                for j in combo:
                    n_mask |= nbr[j]
                r = Fraction(s, n_mask.bit_count())
                if r > best:
                    best = r
                    witness = sum(1 << ids[j] for j in combo)
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        pool = np.asarray(members(cls))
        for s in range(1, max_size + 1):
            cands = [hamming_ball(d, "even", s, c) for c in (0, 1)]
            cands += [star_ball(d, "even", s, c) for c in (0, 1)]
            for _ in range(samples // max_size + 1):
                cands.append(sum(1 << int(v) for v in rng.choice(pool, size=s, replace=False)))
            for A in cands:
                r = Fraction(s, cube.neighborhood(A).bit_count())
                if r > best:
                    best, witness = r, A
    bound = SMALL_SET_CONSTANT / d
    holds = best <= bound if max_size <= d else True
    return ExpansionReport(d, max_size, best, witness, bound, holds, mode)
