"""Exact independent-set counts for Q_d and the bound assembly around them.

Three counting methods are provided and cross-checked:

``branch``
    memoised branching on a vertex of maximum degree, splitting the
    remaining graph into connected components first;
``pairs``
    Q_d = Q_{d-1} x K_2, so an independent set is a pair (I0, I1) of
    disjoint independent sets of Q_{d-1}.  The odd halves of I0 and I1 are
    summed in closed form, leaving a sum over disjoint pairs of even sets;
``sides``
    sum over A in E of 2^{|O \\ N(A)|}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import mpmath
import numpy as np

from .errors import DomainError, EnumerationLimitError, SizeLimitError
from .graph_core import RegularBipartiteGraph, VertexSet, cached_hypercube, members

BigCount = int

MAX_EXACT_D = 5
MAX_EXTENDED_D = 6
LOG_PREC = 128

_METHOD_LIMITS = {"branch": 6, "sides": 5, "pairs": 6}


# ---------------------------------------------------------------- number types

@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2^exponent, kept in lowest terms."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise DomainError("dyadic exponent must be non-negative")
        num, exp = self.numerator, self.exponent
        if num == 0:
            exp = 0
        else:
            shift = min(exp, (num & -num).bit_length() - 1)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, x) -> "DyadicRational":
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1):
            raise DomainError(f"{x} is not dyadic")
        return cls(x.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        e = max(self.exponent, other.exponent)
        return DyadicRational((self.numerator << (e - self.exponent))
                              + (other.numerator << (e - other.exponent)), e)

    def __mul__(self, other: "DyadicRational") -> "DyadicRational":
        return DyadicRational(self.numerator * other.numerator, self.exponent + other.exponent)

    def __float__(self):
        return float(self.to_fraction())

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        num, _, exp = text.partition("/2^")
        return cls(int(num), int(exp or 0))


@total_ordering
@dataclass(frozen=True)
class LogValue:
    """sign * 2^log2, with log2 held at 128 bits of precision.

    ``sign`` is -1, 0 or 1; zero is represented with log2 = -inf.
    """

    log2: mpmath.mpf
    sign: int = 1

    @classmethod
    def from_int(cls, n: int) -> "LogValue":
        if n == 0:
            return cls(mpmath.mpf("-inf"), 0)
        with mpmath.workprec(LOG_PREC):
            return cls(mpmath.log(abs(n), 2), 1 if n > 0 else -1)

    @classmethod
    def power_of_two(cls, exponent) -> "LogValue":
        with mpmath.workprec(LOG_PREC):
            return cls(mpmath.mpf(exponent), 1)

    def __neg__(self):
        return LogValue(self.log2, -self.sign)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue(mpmath.mpf("-inf"), 0)
        with mpmath.workprec(LOG_PREC):
            return LogValue(self.log2 + other.log2, self.sign * other.sign)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log2 >= other.log2 else (other, self)
        with mpmath.workprec(LOG_PREC):
            gap = mpmath.power(2, small.log2 - big.log2)
            if big.sign == small.sign:
                return LogValue(big.log2 + mpmath.log1p(gap) / mpmath.log(2), big.sign)
            if gap == 1:
                return LogValue(mpmath.mpf("-inf"), 0)
            return LogValue(big.log2 + mpmath.log1p(-gap) / mpmath.log(2), big.sign)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def _key(self):
        if self.sign == 0:
            return (0, 0)
        return (self.sign, self.sign * self.log2)

    def __lt__(self, other: "LogValue"):
        return self._key() < other._key()

    def ratio(self, other: "LogValue") -> float:
        """self / other as a float; both must be nonzero."""
        if self.sign == 0:
            return 0.0
        with mpmath.workprec(LOG_PREC):
            return float(self.sign * other.sign * mpmath.power(2, self.log2 - other.log2))

    def __float__(self):
        if self.sign == 0:
            return 0.0
        return float(self.sign * mpmath.power(2, self.log2))

    def __str__(self):
        if self.sign == 0:
            return "0"
        return f"{'-' if self.sign < 0 else ''}2^{mpmath.nstr(self.log2, 20)}"


# ---------------------------------------------------------------- counting

def _check_d(d: int, limit: int) -> None:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if d > limit:
        raise SizeLimitError(f"d={d} exceeds the supported limit {limit}")


def count_graph_independent_sets(g: RegularBipartiteGraph, vertices: VertexSet | None = None,
                                 budget: int = 10**8) -> BigCount:
    """Independent sets of the subgraph induced on ``vertices`` (default all)."""
    memo: dict[int, int] = {}
    nodes = 0

    def component(mask):
        comp = frontier = mask & -mask
        while frontier:
            frontier = g.neighborhood(frontier) & mask & ~comp
            comp |= frontier
        return comp

    def count(mask):
        nonlocal nodes
        if not mask:
            return 1
        hit = memo.get(mask)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > budget:
            raise EnumerationLimitError("branching budget exceeded", {"nodes": nodes})
        comp = component(mask)
        if comp != mask:
            total = count(comp) * count(mask & ~comp)
        else:
            best, best_deg = -1, -1
            for v in members(mask):
                deg = (g.neighbor_mask(v) & mask).bit_count()
                if deg > best_deg:
                    best, best_deg = v, deg
            if best_deg == 0:
                total = 1 << mask.bit_count()
            else:
                rest = mask & ~(1 << best)
                total = count(rest) + count(rest & ~g.neighbor_mask(best))
        memo[mask] = total
        return total

    return count(g.full if vertices is None else vertices)


def _even_neighborhood_table(d: int) -> tuple[np.ndarray, int]:
    """N(A) as a bitmask over the odd class (compact ids), for every A in E.

    A is indexed by its compact form: bit j of the index selects the j-th
    even vertex in ascending id order.  Requires d <= 6.
    """
    cube = cached_hypercube(d)
    evens, odds = members(cube.even), members(cube.odd)
    pos = {v: j for j, v in enumerate(odds)}
    single = np.array([sum(1 << pos[w] for w in cube.neighbors(v)) for v in evens], dtype=np.uint64)
    m = len(evens)
    table = np.zeros(1 << m, dtype=np.uint64)
    for j in range(m):
        span = 1 << j
        table[span:2 * span] = table[:span] | single[j]
    return table, len(odds)


def _count_sides(d: int) -> BigCount:
    table, n_odd = _even_neighborhood_table(d)
    free = n_odd - np.bitwise_count(table).astype(np.int64)
    hist = np.bincount(free, minlength=n_odd + 1)
    return sum(int(c) << s for s, c in enumerate(hist.tolist()))


def _count_pairs(d: int) -> BigCount:
    if d == 1:
        return 3
    table, n_odd = _even_neighborhood_table(d - 1)
    m = int(table.size).bit_length() - 1
    # weight[x, u]: 2^x * 3^(n_odd - u), x = |N0 ^ N1|, u = |N0 | N1|
    weight = np.zeros((n_odd + 1, n_odd + 1), dtype=np.int64)
    for x in range(n_odd + 1):
        for u in range(x, n_odd + 1):
            weight[x, u] = 2**x * 3 ** (n_odd - u)
    full = (1 << m) - 1
    grids = {k: np.arange(1 << k, dtype=np.int64) for k in range(m + 1)}
    total = 0
    for a0 in range(1 << m):
        comp = full ^ a0
        bits = [j for j in range(m) if comp >> j & 1]
        r = grids[len(bits)]
        sub = np.zeros_like(r)
        for i, b in enumerate(bits):
            sub |= ((r >> i) & 1) << b
        n0 = table[a0]
        n1 = table[sub]
        x = np.bitwise_count(n0 ^ n1)
        u = np.bitwise_count(n0 | n1)
        total += int(weight[x, u].sum())
    return total


def count_independent_sets(d: int, method: str = "exact", extended: bool = False) -> BigCount:
    """|I(Q_d)|, the empty set included.

    ``method="exact"`` is branching.  d = 6 needs ``extended=True``.
    """
    _check_d(d, MAX_EXTENDED_D if extended else MAX_EXACT_D)
    if method == "exact":
        method = "branch"
    if method not in _METHOD_LIMITS:
        raise DomainError(f"unknown counting method {method!r}")
    _check_d(d, _METHOD_LIMITS[method])
    if method == "branch":
        return count_graph_independent_sets(cached_hypercube(d))
    if method == "sides":
        return _count_sides(d)
    return _count_pairs(d)


# ---------------------------------------------------------------- small-set sum

def _small_neighborhood_sizes(d: int) -> np.ndarray:
    """|N(A)| for every small A in E (compact indexing), as an int array."""
    cube = cached_hypercube(d)
    table, n_odd = _even_neighborhood_table(d)
    evens, odds = members(cube.even), members(cube.odd)
    # closure: even v is in [A] iff its odd neighbours all lie in N(A)
    epos = {v: j for j, v in enumerate(odds)}
    nbr = [sum(1 << epos[w] for w in cube.neighbors(v)) for v in evens]
    closure = np.zeros(table.size, dtype=np.int64)
    for mask in nbr:
        closure += (table & np.uint64(mask)) == np.uint64(mask)
    small = 2 * closure <= len(evens)
    return np.bitwise_count(table[small]).astype(np.int64)


def sap_sum(d: int) -> DyadicRational:
    """Sum of 2^{-|N(A)|} over small A in E, the empty set included."""
    _check_d(d, MAX_EXACT_D)
    sizes = _small_neighborhood_sizes(d)
    hist = np.bincount(sizes)
    top = len(hist) - 1
    num = sum(int(c) << (top - s) for s, c in enumerate(hist.tolist()))
    return DyadicRational(num, top)


def upper_bound_check(d: int) -> bool:
    """|I(Q_d)| <= 2 * sap_sum(d) * 2^{2^{d-1}}, exactly."""
    s = sap_sum(d)
    count = count_independent_sets(d)
    return count << s.exponent <= (2 * s.numerator) << (1 << (d - 1))


# ---------------------------------------------------------------- f(k)

def _far_graph(d: int) -> list[int]:
    """For each even vertex (compact id), the even vertices at distance >= 4."""
    cube = cached_hypercube(d)
    evens = members(cube.even)
    out = []
    for v in evens:
        near = cube.ball_around(v, 2)
        out.append(sum(1 << j for j, w in enumerate(evens) if not near >> w & 1))
    return out


def f_k(d: int, k: int, budget: int = 10**7) -> BigCount:
    """Number of k-subsets S of E with |N(S)| = kd.

    Equivalently the even vertices of S are pairwise at distance >= 4.
    Closed forms are used for k <= 2; otherwise the sets are enumerated
    (d <= 12), with ``budget`` capping the search nodes.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    _check_d(d, 20)
    half = 1 << (d - 1)
    if k == 0:
        return 1
    if k == 1:
        return half
    if k == 2:
        return half * (half - 1 - math.comb(d, 2)) // 2
    if d > 12:
        raise EnumerationLimitError("f_k enumeration is limited to d <= 12 for k >= 3",
                                    {"d": d, "k": k})
    far = _far_graph(d)
    nodes = 0

    def rec(cands, left):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationLimitError("f_k enumeration budget exceeded", {"nodes": nodes})
        if left == 0:
            return 1
        if cands.bit_count() < left:
            return 0
        total = 0
        while cands:
            j = (cands & -cands).bit_length() - 1
            cands &= cands - 1
            total += rec(cands & far[j], left - 1)
        return total

    return rec((1 << half) - 1, k)


def f_k_lower(d: int, k: int, literal: bool = False) -> Fraction:
    """(1/k!) prod_{j<k} (2^{d-1} - j (C(d,2) + 1)), or 0 once a factor is negative.

    ``literal=True`` shifts the index to (j - 1), which over-counts.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    step = math.comb(d, 2) + 1
    prod = 1
    for j in range(k):
        factor = (1 << (d - 1)) - (j - 1 if literal else j) * step
        if factor < 0:
            return Fraction(0)
        prod *= factor
    return Fraction(prod, math.factorial(k))


# ---------------------------------------------------------------- bounds

@dataclass(frozen=True)
class LowerBoundReport:
    d: int
    main: LogValue
    correction: LogValue
    value: LogValue
    correction_dominates: bool
    main_sum: Fraction  # sum_k f_lower(k) 2^{-kd}

    @property
    def ratio_to_asymptotic(self) -> float:
        return self.value.ratio(asymptotic_estimate(self.d))


def lower_bound_assembly(d: int) -> LowerBoundReport:
    """2 sum_{k<=d} f_lower(k) 2^{2^{d-1} - kd} - 2^{2d^2}, in signed log form."""
    if not 1 <= d <= 30:
        raise DomainError("lower_bound_assembly supports 1 <= d <= 30")
    s = sum((f_k_lower(d, k) / (1 << (k * d)) for k in range(d + 1)), Fraction(0))
    with mpmath.workprec(LOG_PREC):
        log_s = mpmath.log(s.numerator, 2) - mpmath.log(s.denominator, 2)
        main = LogValue((1 << (d - 1)) + 1 + log_s, 1)
    correction = LogValue.power_of_two(2 * d * d)
    value = main - correction
    return LowerBoundReport(d, main, correction, value, value.sign <= 0, s)


def asymptotic_estimate(d: int) -> LogValue:
    """2 sqrt(e) 2^{2^{d-1}} in log form."""
    if d < 1:
        raise DomainError("d must be at least 1")
    with mpmath.workprec(LOG_PREC):
        return LogValue((1 << (d - 1)) + 1 + mpmath.log(mpmath.e, 2) / 2, 1)


def ratio_table(d_max: int, extended: bool = False) -> list[tuple[int, float]]:
    """(d, |I(Q_d)| / (2 sqrt(e) 2^{2^{d-1}})) for d = 1..d_max."""
    _check_d(d_max, MAX_EXTENDED_D if extended else MAX_EXACT_D)
    rows = []
    for d in range(1, d_max + 1):
        count = LogValue.from_int(count_independent_sets(d, extended=extended))
        rows.append((d, count.ratio(asymptotic_estimate(d))))
    return rows
