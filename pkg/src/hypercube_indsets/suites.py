"""Named invariant suites, run at a chosen dimension.

Each suite returns a SuiteReport listing every invariant it checked, with a
counterexample for the first failure.  Exhaustive where the dimension
allows, seeded sampling beyond that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import census
from .combinatorics import (
    CoverInstance,
    entropy_bound_holds,
    greedy_cover,
    lovasz_stein_bound,
    rooted_subtree_count,
)
from .containers import ContainerParams, container_sweep, linked_sets, psi_refine, \
    build_phi_approx, sample_linked_sets
from .errors import DomainError
from .graph_core import (
    RegularBipartiteGraph,
    cached_hypercube,
    from_vertices,
    members,
    random_regular_bipartite,
)
from .isoperimetry import (
    boundary_ratio,
    even_ball_inner_radius,
    layer_ratio,
    min_ball_neighborhood,
    min_neighborhood,
)
from .structure import closure, is_k_linked, is_small, k_components

SUITES = ("structure", "combinatorics", "iso", "containers", "census")


@dataclass
class InvariantResult:
    name: str
    passed: bool
    checked: int = 0
    counterexample: object = None
    detail: str = ""


@dataclass
class SuiteReport:
    name: str
    d: int
    results: list[InvariantResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "d": self.d,
            "passed": self.passed,
            "invariants": [
                {"name": r.name, "passed": r.passed, "checked": r.checked,
                 "counterexample": None if r.counterexample is None else str(r.counterexample),
                 "detail": r.detail}
                for r in self.results
            ],
        }


def _check(name: str, cases, predicate: Callable, detail: str = "") -> InvariantResult:
    n = 0
    for case in cases:
        n += 1
        if not predicate(case):
            return InvariantResult(name, False, n, case, detail)
    return InvariantResult(name, True, n, None, detail)


def _class_subsets(g: RegularBipartiteGraph, seed: int, limit: int = 1 << 16,
                   samples: int = 2000):
    """All subsets of X when there are at most ``limit``, else a seeded sample."""
    xs = members(g.class_x)
    if 1 << len(xs) <= limit:
        for r in range(len(xs) + 1):
            for combo in itertools.combinations(xs, r):
                yield from_vertices(combo)
        return
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        keep = rng.random(len(xs)) < rng.random()
        yield from_vertices(x for x, k in zip(xs, keep) if k)


def structure_suite(d: int, seed: int = 0, graph: RegularBipartiteGraph | None = None) -> SuiteReport:
    g = graph or cached_hypercube(d)
    sets = list(_class_subsets(g, seed))
    nonempty = [A for A in sets if A]
    rep = SuiteReport("structure", d)
    rep.results.append(_check("closure idempotent", sets,
                              lambda A: closure(g, closure(g, A)) == closure(g, A)))
    rep.results.append(_check("closure extensive", sets, lambda A: A & ~closure(g, A) == 0))
    rep.results.append(_check("N(closure) = N(A)", sets,
                              lambda A: g.neighborhood(closure(g, A)) == g.neighborhood(A)))
    rep.results.append(_check("2-linked closure", [A for A in nonempty if is_k_linked(g, A, 2)],
                              lambda A: is_k_linked(g, closure(g, A), 2)))
    rep.results.append(_check(
        "2-component additivity", nonempty,
        lambda A: g.neighborhood(A).bit_count()
        == sum(g.neighborhood(P).bit_count() for P in k_components(g, A, 2))))

    def no_opposite(A):
        G = g.neighborhood(A)
        return not any(g.neighbor_mask(y) & ~G == 0 for y in members(g.class_y))

    if g.degree >= 2:
        rep.results.append(_check("no opposite-class vertex in the closure", nonempty, no_opposite))
    return rep


def combinatorics_suite(d: int, seed: int = 0, instances: int = 100) -> SuiteReport:
    rep = SuiteReport("combinatorics", d)
    rng = np.random.default_rng(seed)
    cover_cases = []
    for dd in range(1, d + 1):
        cube = cached_hypercube(dd)
        cover_cases.append(CoverInstance.from_graph(cube, cube.even, cube.odd))
        cover_cases.append(CoverInstance.from_graph(cube, cube.odd, cube.even))
    for _ in range(instances):
        n = int(rng.integers(2, 13))
        deg = int(rng.integers(1, n + 1))
        g = random_regular_bipartite(n, deg, rng)
        cover_cases.append(CoverInstance.from_graph(g, g.class_x, g.class_y))

    def cover_ok(inst):
        Q = greedy_cover(inst)
        covered = 0
        for q in members(Q):
            covered |= inst.neighbors[q]
        return inst.P & ~covered == 0 and Q.bit_count() <= lovasz_stein_bound(inst) + 1e-9

    rep.results.append(_check("greedy cover within the Lovasz-Stein bound", cover_cases, cover_ok))
    rep.results.append(_check(
        "binary subtree count is Catalan", range(1, 16),
        lambda n: rooted_subtree_count(2, n) == math.comb(2 * n, n) // (n + 1)))
    rep.results.append(_check(
        "entropy bound", [(N, Fraction(k, N)) for N in range(1, 31) for k in range(N // 2 + 1)],
        lambda case: entropy_bound_holds(*case)))
    return rep


def iso_suite(d: int, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("iso", d)
    cube = cached_hypercube(d)
    half = 1 << (d - 1)
    if d <= 5:
        rep.results.append(_check(
            "even Hamming balls minimise |N|", range(half + 1),
            lambda s: min_neighborhood(d, "even", s)[0] == min_ball_neighborhood(d, "even", s)))
        evens = members(cube.even)
        small_sets = [from_vertices(c) for s in range(1, half + 1)
                      for c in itertools.combinations(evens, s)
                      if s <= 8 or d <= 4]
        small_sets = [A for A in small_sets if is_small(cube, A)]
        rep.results.append(_check("positive boundary ratio on small sets", small_sets,
                                  lambda A: boundary_ratio(cube, A) > 0))
        quarter = [A for A in small_sets if A.bit_count() <= max(1, half // 2)
                   and even_ball_inner_radius(d, A.bit_count()) <= d / 4]
        rep.results.append(_check("boundary ratio >= 1/3 below radius d/4", quarter,
                                  lambda A: boundary_ratio(cube, A) >= Fraction(1, 3)))
    cases = [(dd, i) for dd in range(1, 13) for i in range((dd + 1) // 2) if 2 * i < dd]
    rep.results.append(_check(
        "layer ratio bound", cases,
        lambda c: (lambda r: r[0] <= r[1] and (2 * c[1] + 2 > c[0] or r[0] == r[1]))(
            layer_ratio(*c))))
    return rep


def containers_suite(d: int, params: ContainerParams | None = None, samples: int = 1000,
                     graph: RegularBipartiteGraph | None = None) -> SuiteReport:
    """Full pipeline over every 2-linked A (d <= 4) or a seeded sample."""
    params = params or ContainerParams()
    g = graph or cached_hypercube(d)
    if g.degree < 2:
        raise DomainError("the container suite needs degree >= 2")
    rep = SuiteReport("containers", d)
    if g.class_x.bit_count() <= 8:
        sets = linked_sets(g)
        records = container_sweep(g, sets, params, anchors="all")
        label = "exhaustive"
    else:
        sets = sample_linked_sets(g, samples, params.seed)
        records = container_sweep(g, sets, params, anchors="lowest", stream=False)
        label = f"{samples} samples"
    covered = sum(r.ok for r in records)
    bad = next((r for r in records if not r.ok), None)
    rep.results.append(InvariantResult(
        "pipeline coverage", bad is None, len(records),
        None if bad is None else f"A={bad.A} v={bad.v}",
        f"{label}: {covered}/{len(records)}"))

    rp = params.resolve(g.degree, g.codegree)
    probe = sets[: min(len(sets), 50)]

    def deterministic(A):
        outs = set()
        for _ in range(3):
            phi, _ = build_phi_approx(g, A, params)
            psi = psi_refine(g, A, phi, rp.psi)
            outs.add((phi.Fprime, psi.F, psi.S, psi.step1_iterations, psi.step2_iterations))
        return len(outs) == 1

    rep.results.append(_check("psi refinement is deterministic", probe, deterministic))
    return rep


def census_suite(d: int, extended: bool = False) -> SuiteReport:
    rep = SuiteReport("census", d)
    dims = range(1, d + 1)
    counts = {}

    def methods_agree(dd):
        methods = ["branch", "pairs"] + (["sides"] if dd <= 5 else [])
        vals = {census.count_independent_sets(dd, m, extended=extended) for m in methods}
        counts[dd] = vals.pop() if len(vals) == 1 else None
        return counts[dd] is not None

    rep.results.append(_check("counting methods agree", dims, methods_agree))
    small = [dd for dd in dims if 2 <= dd <= 5 and counts.get(dd)]

    def sandwich(dd):
        s = census.sap_sum(dd)
        lo = 1 << (1 << (dd - 1))
        return lo < counts[dd] and counts[dd] << s.exponent <= (2 * s.numerator) << (1 << (dd - 1))

    rep.results.append(_check("sandwich", small, sandwich))
    sums = [census.sap_sum(dd).to_fraction() for dd in small]
    rep.results.append(InvariantResult("small-set sum non-decreasing",
                                       all(x <= y for x, y in zip(sums, sums[1:])), len(sums)))
    rep.results.append(_check(
        "f(k) above its lower bound", [(dd, k) for dd in dims if dd <= 5 for k in range(5)],
        lambda c: census.f_k(*c) >= census.f_k_lower(*c)))
    return rep


def verify_suite(name: str, d: int, params: ContainerParams | None = None,
                 extended: bool = False, graph: RegularBipartiteGraph | None = None) -> list[SuiteReport]:
    """Run one suite, or every suite for ``name="all"``."""
    names = SUITES if name == "all" else (name,)
    out = []
    seed = (params or ContainerParams()).seed
    for n in names:
        if n == "structure":
            out.append(structure_suite(d, seed, graph))
        elif n == "combinatorics":
            out.append(combinatorics_suite(d, seed))
        elif n == "iso":
            out.append(iso_suite(d, seed))
        elif n == "containers":
            out.append(containers_suite(d, params, graph=graph))
        elif n == "census":
            out.append(census_suite(d, extended))
        else:
            raise DomainError(f"unknown suite {n!r}")
    return out
