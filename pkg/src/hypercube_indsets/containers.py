"""phi- and psi-approximations, reconstruction, and the container pipeline.

Everything here works for any d-regular bipartite graph; A is a nonempty
subset of one class X and Y is the opposite class.  With G = N(A),
a = |[A]|, g = |G| and t = g - a:

* a phi-approximation is F' with G^phi <= F' <= G and N(F') >= [A], where
  G^phi = {y in G : d_[A](y) > phi};
* a psi-approximation is (F, S) with F <= G, S >= [A], d_F(u) >= d - psi on
  S, and d_{X - S}(w) >= d - psi on Y - F.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .combinatorics import CoverInstance, greedy_cover
from .errors import (
    ConstructionFailure,
    DomainError,
    EnumerationLimitError,
    PreconditionError,
)
from .graph_core import RegularBipartiteGraph, Vertex, VertexSet, lowest, members, nabla
from .structure import closure, is_k_linked, k_components


@dataclass(frozen=True)
class ContainerParams:
    """User-facing knobs; ``None`` means "use the default for this d".

    ``p`` overrides the T0 sampling probability, which otherwise clamps to
    1 at every dimension small enough to enumerate.
    """

    phi: int | None = None
    psi: int | None = None
    gamma: float | None = None
    c: float = 1.0
    c_prime: float = 1.0
    seed: int = 0
    max_retries: int = 1000
    p: float | None = None
    budget: int = 10**7

    def resolve(self, d: int, codegree: int) -> "ResolvedParams":
        if d < 2:
            raise DomainError("container parameters need d >= 2")
        log_d = math.log2(d)
        phi = self.phi if self.phi is not None else min(max(math.ceil(d / 2), 1), d - 1)
        psi = self.psi if self.psi is not None else min(max(math.ceil(self.c_prime * d / log_d), 1), d - 1)
        gamma = self.gamma if self.gamma is not None else self.c / log_d
        if not 1 <= phi <= d - 1:
            raise DomainError(f"phi={phi} outside [1, {d - 1}]")
        if self.p is not None:
            p = float(self.p)
            if not 0 < p <= 1:
                raise DomainError("sampling probability must lie in (0, 1]")
        else:
            p = min(1.0, 20 * codegree * log_d / (phi * d))
        return ResolvedParams(phi, psi, gamma, p, self.seed, self.max_retries, self.budget,
                              self.c_prime)


@dataclass(frozen=True)
class ResolvedParams:
    phi: int
    psi: int
    gamma: float
    p: float
    seed: int
    max_retries: int
    budget: int
    c_prime: float = 1.0


@dataclass(frozen=True)
class PhiApprox:
    Fprime: VertexSet
    phi: int


@dataclass(frozen=True)
class ApproxCertificate:
    T0: VertexSet
    T0prime: VertexSet
    T1: VertexSet
    Omega: tuple[tuple[Vertex, Vertex], ...]
    retries: int
    p: float


@dataclass(frozen=True)
class PsiApprox:
    F: VertexSet
    S: VertexSet
    psi: int
    step1_iterations: int = field(default=0, compare=False)
    step2_iterations: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PsiCheck:
    eq7: bool
    eq8: bool
    eq9: bool
    lemma51: bool

    @property
    def valid(self) -> bool:
        return self.eq7 and self.eq8 and self.eq9

    def __bool__(self):
        return self.valid


@dataclass(frozen=True)
class Targets:
    a: int
    g: int
    t: int
    v: Vertex


def _one_sided(g: RegularBipartiteGraph, A: VertexSet) -> tuple[VertexSet, VertexSet]:
    if not A:
        raise DomainError("A must be nonempty")
    return g.class_of(A)


def g_phi(g: RegularBipartiteGraph, A: VertexSet, phi: int) -> VertexSet:
    """G^phi: members of N(A) with more than phi neighbours in [A]."""
    _one_sided(g, A)
    if not 1 <= phi <= g.degree - 1:
        raise DomainError(f"phi={phi} outside [1, {g.degree - 1}]")
    return g.neighborhood(A) & g.at_least(closure(g, A), phi + 1)


def verify_phi_approx(g: RegularBipartiteGraph, A: VertexSet, Fprime: VertexSet, phi: int) -> bool:
    G = g.neighborhood(A)
    if Fprime & ~G:
        return False
    if g_phi(g, A, phi) & ~Fprime:
        return False
    return closure(g, A) & ~g.neighborhood(Fprime) == 0


def _rng_for(seed: int, A: VertexSet, v: Vertex) -> np.random.Generator:
    words = []
    while True:
        words.append(A & 0xFFFFFFFF)
        A >>= 32
        if not A:
            break
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), v, *words]))


def build_phi_approx(g: RegularBipartiteGraph, A: VertexSet, params: ContainerParams | None = None,
                     anchor: Vertex | None = None,
                     rng: np.random.Generator | None = None) -> tuple[PhiApprox, ApproxCertificate]:
    """Three-piece phi-approximation F' = N(N_[A](T0)) + T0' + T1.

    T0 is drawn from G by independent inclusion with probability p and
    redrawn until |T0| <= 4gp, |grad(T0, X - [A])| <= 4tdp and
    |T0'| <= 3g/d^10 all hold; the anchor is always put in T0.  T1 is a
    greedy cover of what N(L) misses of [A].
    """
    X, _ = _one_sided(g, A)
    if not is_k_linked(g, A, 2):
        raise PreconditionError("A must be 2-linked")
    params = params or ContainerParams()
    d = g.degree
    rp = params.resolve(d, g.codegree)
    G = g.neighborhood(A)
    cl = closure(g, A)
    gs, a = G.bit_count(), cl.bit_count()
    t = gs - a
    v = lowest(G) if anchor is None else anchor
    if not G >> v & 1:
        raise DomainError(f"anchor {v} is not in N(A)")
    high = G & g.at_least(cl, rp.phi + 1)
    outside = X & ~cl
    p = rp.p
    t0_max = 4 * gs * p
    omega_max = 4 * t * d * p
    t0p_max = 3 * gs / d**10
    g_members = np.asarray(members(G), dtype=np.int64)
    if rng is None:
        rng = _rng_for(rp.seed, A, v)
    observed = {}
    for attempt in range(1, rp.max_retries + 1):
        if p >= 1:
            T0 = G
        else:
            picked = g_members[rng.random(len(g_members)) < p]
            T0 = (1 << v) | sum(1 << int(y) for y in picked.tolist())
        core = g.neighborhood(g.neighborhood(T0) & cl)
        T0p = high & ~core
        omega = g.incidences(T0, outside)
        observed = {"attempts": attempt, "T0": T0.bit_count(), "T0_max": t0_max,
                    "Omega": omega, "Omega_max": omega_max,
                    "T0prime": T0p.bit_count(), "T0prime_max": t0p_max}
        if T0.bit_count() <= t0_max and omega <= omega_max and T0p.bit_count() <= t0p_max:
            break
    else:
        raise ConstructionFailure(f"no admissible T0 after {rp.max_retries} draws", observed)
    L = core | T0p
    uncovered = cl & ~g.neighborhood(L)
    T1 = greedy_cover(CoverInstance.from_graph(g, uncovered, G & ~L)) if uncovered else 0
    Fprime = L | T1
    edges = nabla(g, T0, outside, with_edges=True).edges
    cert = ApproxCertificate(T0, T0p, T1, edges, attempt, p)
    return PhiApprox(Fprime, rp.phi), cert


def _picker(ordering: Sequence[Vertex] | None):
    if ordering is None:
        return lowest
    rank = {v: i for i, v in enumerate(ordering)}
    return lambda mask: min(members(mask), key=rank.__getitem__)


def psi_refine(g: RegularBipartiteGraph, A: VertexSet, Fprime: PhiApprox, psi: int,
               ordering: Sequence[Vertex] | None = None) -> PsiApprox:
    """Turn a phi-approximation into a psi-approximation.

    Step 1 absorbs N(u) for the least u in [A] with d_{G - F'}(u) > psi
    until none is left.  Step 2 starts from S'' = {u in X : d_F''(u) >= d - psi}
    and deletes N(w) for the least w in Y - G with d_S''(w) > psi.  Finally
    F = F'' + {w in Y : d_S(w) > psi}.  ``ordering`` lists vertex ids from
    least to greatest; the default is ascending id.
    """
    X, Y = _one_sided(g, A)
    d = g.degree
    if not 1 <= psi <= d - 1:
        raise PreconditionError(f"psi={psi} outside [1, {d - 1}]")
    if not verify_phi_approx(g, A, Fprime.Fprime, Fprime.phi):
        raise PreconditionError("F' is not a phi-approximation for A")
    pick = _picker(ordering)
    G = g.neighborhood(A)
    cl = closure(g, A)

    F2 = Fprime.Fprime
    step1 = 0
    while True:
        cand = cl & g.at_least(G & ~F2, psi + 1)
        if not cand:
            break
        F2 |= g.neighbor_mask(pick(cand))
        step1 += 1

    S2 = X & g.at_least(F2, d - psi)
    outside_g = Y & ~G
    step2 = 0
    while True:
        cand = outside_g & g.at_least(S2, psi + 1)
        if not cand:
            break
        S2 &= ~g.neighbor_mask(pick(cand))
        step2 += 1

    F = F2 | (Y & g.at_least(S2, psi + 1))
    return PsiApprox(F, S2, psi, step1, step2)


def verify_psi_approx(g: RegularBipartiteGraph, A: VertexSet, F: VertexSet, S: VertexSet,
                      psi: int) -> PsiCheck:
    X, Y = _one_sided(g, A)
    d = g.degree
    G = g.neighborhood(A)
    cl = closure(g, A)
    t = G.bit_count() - cl.bit_count()
    eq7 = F & ~G == 0 and cl & ~S == 0 and S & ~X == 0
    eq8 = S & ~g.at_least(F, d - psi) == 0
    eq9 = (Y & ~F) & ~g.at_least(X & ~S, d - psi) == 0
    lemma51 = (S.bit_count() - F.bit_count()) * (d - psi) <= 2 * t * psi
    return PsiCheck(eq7, eq8, eq9, lemma51)


def step_bounds(d: int, t: int, phi: int, psi: int) -> tuple[Fraction, Fraction]:
    """Iteration caps td/((d-phi)psi) + 1 and td/((d-psi)psi) + 1."""
    return (Fraction(t * d, (d - phi) * psi) + 1, Fraction(t * d, (d - psi) * psi) + 1)


class Reconstruction:
    """Lazy stream of candidate sets rebuilt from a pair (F, S).

    If |S| < g - gamma t the candidates are the subsets of S.  Otherwise
    each D in N(S) - F with |D| <= 2t psi/(d - psi) + gamma t gives
    G* = F + D, and the candidates are the subsets of {x in X : N(x) <= G*}.
    With ``filtered`` set, only 2-linked sets with |[A]| = a, |N(A)| = g
    and v in N(A) are yielded, each once.  Filtering prunes on |N| <= g and
    skips D with |F + D| < g; neither changes which sets are yielded.
    """

    def __init__(self, g: RegularBipartiteGraph, F: VertexSet, S: VertexSet, targets: Targets,
                 psi: int, gamma: float, filtered: bool = True, budget: int = 10**7):
        self.graph = g
        self.F, self.S = F, S
        self.targets = targets
        self.psi, self.gamma = psi, gamma
        self.filtered = filtered
        self.budget = budget
        d = g.degree
        tg = targets
        self.X = g.class_y if g.class_x >> tg.v & 1 else g.class_x
        self.branch = "small" if S.bit_count() < tg.g - gamma * tg.t else "large"
        self.hypothesis_ok = (S.bit_count() - F.bit_count()) * (d - psi) <= 2 * tg.t * psi
        self.d_limit = math.floor(2 * tg.t * psi / (d - psi) + gamma * tg.t + 1e-12)
        self.warnings = []
        if not self.hypothesis_ok:
            self.warnings.append("(F, S) violates |S| <= |F| + 2t psi/(d - psi)")
        if F & ~g.neighborhood(S):
            self.warnings.append("F is not contained in N(S)")
        self.examined = 0
        self.yielded = 0
        self._closure_sizes: dict[int, int] = {}

    def _tick(self):
        self.examined += 1
        if self.examined > self.budget:
            raise EnumerationLimitError(
                "reconstruction budget exceeded",
                {"examined": self.examined, "yielded": self.yielded, "branch": self.branch})

    def _closure_size(self, n_mask: VertexSet) -> int:
        # [A] depends on A only through N(A)
        size = self._closure_sizes.get(n_mask)
        if size is None:
            g = self.graph
            size = (self.X & ~g.neighborhood(~n_mask & g.full & ~self.X)).bit_count()
            self._closure_sizes[n_mask] = size
        return size

    def _accept(self, A: VertexSet, n_mask: VertexSet) -> bool:
        tg = self.targets
        if not A or n_mask.bit_count() != tg.g or not n_mask >> tg.v & 1:
            return False
        if self._closure_size(n_mask) != tg.a:
            return False
        return is_k_linked(self.graph, A, 2)

    def contains(self, A: VertexSet) -> bool:
        """Whether ``A`` occurs in this stream, decided without enumerating it."""
        g = self.graph
        if A & ~self.X:
            return False
        n_mask = g.neighborhood(A)
        if self.filtered and not self._accept(A, n_mask):
            return False
        if self.branch == "small":
            return A & ~self.S == 0
        pool = g.neighborhood(self.S) & ~self.F
        need = n_mask & ~self.F
        if need & ~pool:
            return False
        lo = max(0, self.targets.g - self.F.bit_count()) if self.filtered else 0
        return max(need.bit_count(), lo) <= min(self.d_limit, pool.bit_count())

    def _subsets(self, base: VertexSet) -> Iterator[VertexSet]:
        g = self.graph
        pool = members(base)
        if not self.filtered:
            for r in range(len(pool) + 1):
                for combo in itertools.combinations(pool, r):
                    self._tick()
                    yield sum(1 << x for x in combo)
            return
        cap = self.targets.g
        nbr = [g.neighbor_mask(x) for x in pool]

        def dfs(i, A, n_mask):
            self._tick()
            if i == len(pool):
                if self._accept(A, n_mask):
                    yield A
                return
            grown = n_mask | nbr[i]
            if grown.bit_count() <= cap:
                yield from dfs(i + 1, A | (1 << pool[i]), grown)
            yield from dfs(i + 1, A, n_mask)

        yield from dfs(0, 0, 0)

    def _stream(self) -> Iterator[VertexSet]:
        g = self.graph
        if self.branch == "small":
            yield from self._subsets(self.S)
            return
        pool = members(g.neighborhood(self.S) & ~self.F)
        lo = 0
        if self.filtered:
            lo = max(0, self.targets.g - self.F.bit_count())
        d = g.degree
        for r in range(lo, min(self.d_limit, len(pool)) + 1):
            for combo in itertools.combinations(pool, r):
                G_star = self.F | sum(1 << y for y in combo)
                if (self.filtered and G_star.bit_count() == self.targets.g
                        and self._closure_size(G_star) != self.targets.a):
                    # every accepted A here has N(A) = G*, hence [A] = [G*]
                    continue
                yield from self._subsets(self.X & g.at_least(G_star, d))

    def __iter__(self) -> Iterator[VertexSet]:
        seen = set()
        for A in self._stream():
            if self.filtered:
                if A in seen:
                    continue
                seen.add(A)
            self.yielded += 1
            yield A


def reconstruct_family(g: RegularBipartiteGraph, F: VertexSet, S: VertexSet, targets: Targets,
                       params: ContainerParams | None = None, filtered: bool = True) -> Reconstruction:
    params = params or ContainerParams()
    rp = params.resolve(g.degree, g.codegree)
    return Reconstruction(g, F, S, targets, rp.psi, rp.gamma, filtered, rp.budget)


def enumerate_G_agv(g: RegularBipartiteGraph, a: int, g_size: int, v: Vertex,
                    budget: int = 10**7) -> list[VertexSet]:
    """All 2-linked A in the class opposite v with |[A]| = a, |N(A)| = g_size, v in N(A).

    Sorted by the ascending tuple of member ids.
    """
    X = g.class_y if g.class_x >> v & 1 else g.class_x
    pool = members(X)
    nbr = [g.neighbor_mask(x) for x in pool]
    found = []
    nodes = 0

    def dfs(i, A, n_mask):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationLimitError("G(a,g,v) enumeration budget exceeded",
                                        {"nodes": nodes, "found": len(found)})
        if i == len(pool):
            if (A and n_mask.bit_count() == g_size and n_mask >> v & 1
                    and closure(g, A).bit_count() == a and is_k_linked(g, A, 2)):
                found.append(A)
            return
        grown = n_mask | nbr[i]
        if grown.bit_count() <= g_size:
            dfs(i + 1, A | (1 << pool[i]), grown)
        dfs(i + 1, A, n_mask)

    dfs(0, 0, 0)
    return sorted(found, key=members)


def linked_sets(g: RegularBipartiteGraph, X: VertexSet | None = None) -> list[VertexSet]:
    """Every nonempty 2-linked subset of X (default: class X), ascending by mask."""
    X = g.class_x if X is None else X
    pool = members(X)
    out = []
    for r in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            A = sum(1 << x for x in combo)
            if is_k_linked(g, A, 2):
                out.append(A)
    return sorted(out)


def sample_linked_sets(g: RegularBipartiteGraph, count: int, seed: int) -> list[VertexSet]:
    """Random nonempty 2-linked subsets of class X.

    Each draw keeps a uniformly chosen 2-component of a random subset whose
    density is itself uniform on (0, 1).
    """
    rng = np.random.default_rng(seed)
    pool = np.asarray(members(g.class_x), dtype=np.int64)
    out = []
    while len(out) < count:
        keep = pool[rng.random(len(pool)) < rng.random()]
        R = sum(1 << int(x) for x in keep.tolist())
        if not R:
            continue
        parts = k_components(g, R, 2).parts
        out.append(parts[int(rng.integers(len(parts)))])
    return out


@dataclass(frozen=True)
class ContainerRecord:
    """Outcome of the full pipeline for one (A, v)."""

    A: VertexSet
    v: Vertex
    a: int
    g: int
    t: int
    Fprime: VertexSet
    F: VertexSet
    S: VertexSet
    T0_size: int
    T0prime_size: int
    T1_size: int
    omega_size: int
    retries: int
    phi_valid: bool
    psi_check: PsiCheck
    certificate_ok: bool
    step1: int
    step2: int
    steps_ok: bool
    branch: str
    reconstructed: bool

    @property
    def ok(self) -> bool:
        return (self.phi_valid and self.psi_check.valid and self.psi_check.lemma51
                and self.certificate_ok and self.steps_ok and self.reconstructed)


def run_container(g: RegularBipartiteGraph, A: VertexSet, v: Vertex | None = None,
                  params: ContainerParams | None = None,
                  stream: bool = True) -> tuple[ContainerRecord, PsiApprox]:
    """phi-approximation, psi-refinement, checks and reconstruction for one A.

    With ``stream`` set, recovery is decided by scanning the reconstruction
    stream until A shows up; otherwise by ``Reconstruction.contains``.
    """
    params = params or ContainerParams()
    d = g.degree
    rp = params.resolve(d, g.codegree)
    G = g.neighborhood(A)
    cl = closure(g, A)
    gs, a = G.bit_count(), cl.bit_count()
    t = gs - a
    v = lowest(G) if v is None else v
    phi, cert = build_phi_approx(g, A, params, anchor=v)
    phi_valid = verify_phi_approx(g, A, phi.Fprime, phi.phi)
    psi = psi_refine(g, A, phi, rp.psi)
    check = verify_psi_approx(g, A, psi.F, psi.S, rp.psi)
    p = cert.p
    cert_ok = (cert.T0.bit_count() <= 4 * gs * p and len(cert.Omega) <= 4 * t * d * p
               and cert.T0prime.bit_count() <= 3 * gs / d**10 and (cert.T0 >> v) & 1 == 1)
    b1, b2 = step_bounds(d, t, rp.phi, rp.psi)
    steps_ok = psi.step1_iterations <= b1 and psi.step2_iterations <= b2
    recon = Reconstruction(g, psi.F, psi.S, Targets(a, gs, t, v), rp.psi, rp.gamma,
                           filtered=True, budget=rp.budget)
    hit = any(B == A for B in recon) if stream else recon.contains(A)
    record = ContainerRecord(
        A=A, v=v, a=a, g=gs, t=t, Fprime=phi.Fprime, F=psi.F, S=psi.S,
        T0_size=cert.T0.bit_count(), T0prime_size=cert.T0prime.bit_count(),
        T1_size=cert.T1.bit_count(), omega_size=len(cert.Omega), retries=cert.retries,
        phi_valid=phi_valid, psi_check=check, certificate_ok=cert_ok,
        step1=psi.step1_iterations, step2=psi.step2_iterations, steps_ok=steps_ok,
        branch=recon.branch, reconstructed=hit)
    return record, psi


@dataclass
class PipelineResult:
    a: int
    g: int
    v: Vertex
    family: list[PsiApprox]
    records: list[ContainerRecord]
    benchmark_log2: float

    @property
    def covered(self) -> int:
        return sum(r.ok for r in self.records)

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def complete(self) -> bool:
        return self.covered == self.total


def container_pipeline(g: RegularBipartiteGraph, a: int, g_size: int, v: Vertex,
                       params: ContainerParams | None = None) -> PipelineResult:
    """Run every A in G(a, g, v) through the pipeline and collect the (F, S) family.

    The benchmark 2^{g - c't/log d} is reported, not enforced.
    """
    params = params or ContainerParams()
    family: dict[tuple[int, int], PsiApprox] = {}
    records = []
    for A in enumerate_G_agv(g, a, g_size, v, params.budget):
        record, psi = run_container(g, A, v, params)
        records.append(record)
        family.setdefault((psi.F, psi.S), psi)
    t = g_size - a
    bench = g_size - params.c_prime * t / math.log2(g.degree)
    return PipelineResult(a, g_size, v, list(family.values()), records, bench)


def feasible_classes(g: RegularBipartiteGraph, sets: Sequence[VertexSet] | None = None):
    """Map (a, g, v) -> list of 2-linked A in that class, for every v in N(A)."""
    sets = linked_sets(g) if sets is None else sets
    classes: dict[tuple[int, int, int], list[int]] = {}
    for A in sets:
        G = g.neighborhood(A)
        key_ag = (closure(g, A).bit_count(), G.bit_count())
        for v in members(G):
            classes.setdefault((*key_ag, v), []).append(A)
    return classes


def _sweep_one(args):
    g, A, v, params, stream = args
    return run_container(g, A, v, params, stream)[0]


def container_sweep(g: RegularBipartiteGraph, sets: Sequence[VertexSet],
                    params: ContainerParams | None = None, anchors: str = "all",
                    workers: int = 1, stream: bool = True) -> list[ContainerRecord]:
    """Run the pipeline for each A (and each anchor v in N(A), or only the lowest).

    With ``workers > 1`` the jobs are farmed to a process pool; results come
    back in submission order, and per-A seeding keeps them identical.
    """
    params = params or ContainerParams()
    jobs = []
    for A in sets:
        G = g.neighborhood(A)
        anchors_for = members(G) if anchors == "all" else [lowest(G)]
        jobs.extend((g, A, v, params, stream) for v in anchors_for)
    if workers <= 1:
        return [_sweep_one(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
