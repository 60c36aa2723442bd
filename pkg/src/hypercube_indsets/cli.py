"""Command-line driver.

Every subcommand writes JSON records (one per line), CSV rows or plain
text.  Exact quantities are always strings: counts as decimal integers,
dyadic rationals as ``p/2^q``, log values as decimal log2.

Exit codes: 0 success, 1 failed suite, 2 usage or input error, 3 budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import mpmath

from . import census
from .combinatorics import CoverInstance, greedy_cover, lovasz_stein_bound
from .containers import (
    ContainerParams,
    container_pipeline,
    container_sweep,
    linked_sets,
    sample_linked_sets,
)
from .errors import ConstructionFailure, DomainError, EnumerationLimitError, GraphFormatError
from .graph_core import Hypercube, RegularBipartiteGraph, format_vertex, load_graph, members
from .isoperimetry import EXHAUSTIVE_MAX_D, min_ball_neighborhood, min_neighborhood
from .suites import SUITES, verify_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    method: str = "exact"
    a: int | None = None
    g: int | None = None
    v: int | None = None
    params: ContainerParams = field(default_factory=ContainerParams)
    format: str = "json"
    out: str | None = None
    parallelism: int = 1
    suite: str = "all"
    graph: str | None = None
    extended: bool = False
    timing: bool = True
    table: bool = False
    samples: int = 1000

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        params = ContainerParams(phi=ns.phi, psi=ns.psi, gamma=ns.gamma, c=ns.c,
                                 c_prime=ns.cprime, seed=ns.seed, max_retries=ns.max_retries,
                                 budget=ns.budget)
        cfg = cls(command=ns.command, d=ns.d, method=ns.method, a=ns.a, g=ns.g, v=ns.v,
                  params=params, format=ns.format, out=ns.out, parallelism=ns.parallelism,
                  suite=ns.suite, graph=ns.graph, extended=ns.extended,
                  timing=not ns.no_timing, table=ns.table, samples=ns.samples)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        needs_d = {"count", "sum", "bounds", "iso", "verify"}
        if self.command in needs_d and self.d is None:
            raise DomainError(f"{self.command} needs --d")
        if self.command in {"containers", "cover"} and self.d is None and self.graph is None:
            raise DomainError(f"{self.command} needs --d or --graph")
        if self.command == "graph-check" and self.graph is None:
            raise DomainError("graph-check needs --graph")
        if self.parallelism < 1:
            raise DomainError("--parallelism must be at least 1")
        targets = (self.a, self.g, self.v)
        if any(x is not None for x in targets) and any(x is None for x in targets):
            raise DomainError("--a, --g and --v must be given together")

    def inputs(self) -> dict:
        out = {"d": self.d}
        if self.command == "count":
            out.update(method=self.method, extended=self.extended)
        if self.command in {"containers", "verify"}:
            out["params"] = asdict(self.params)
        if self.command == "containers" and self.a is not None:
            out.update(a=self.a, g=self.g, v=self.v)
        if self.command == "verify":
            out["suite"] = self.suite
        if self.graph is not None:
            out["graph"] = self.graph
        return out


def _host(cfg: RunConfig) -> RegularBipartiteGraph:
    if cfg.graph is not None:
        return load_graph(cfg.graph)
    return Hypercube(cfg.d)


def _fmt_set(g: RegularBipartiteGraph, S: int) -> list:
    if isinstance(g, Hypercube):
        return [format_vertex(v, g.d) for v in members(S)]
    return members(S)


def _log2_str(x) -> str:
    return mpmath.nstr(x, 30)


# ---------------------------------------------------------------- subcommands

def _cmd_count(cfg: RunConfig):
    if cfg.table:
        rows = census.ratio_table(cfg.d, extended=cfg.extended)
        counts = {d: census.count_independent_sets(d, extended=cfg.extended) for d, _ in rows}
        return [{"d": d, "count": str(counts[d]), "ratio": f"{r:.6f}"} for d, r in rows]
    n = census.count_independent_sets(cfg.d, cfg.method, cfg.extended)
    return [{"count": str(n)}]


def _cmd_sum(cfg: RunConfig):
    s = census.sap_sum(cfg.d)
    return [{"sum": str(s), "value": str(s.to_fraction())}]


def _cmd_bounds(cfg: RunConfig):
    d = cfg.d
    asym = census.asymptotic_estimate(d)
    low = census.lower_bound_assembly(d)
    rec = {
        "asymptotic_log2": _log2_str(asym.log2),
        "lower_bound_sign": low.value.sign,
        "lower_bound_log2": _log2_str(low.value.log2) if low.value.sign else None,
        "correction_dominates": low.correction_dominates,
        "lower_over_asymptotic": None if low.correction_dominates else f"{low.ratio_to_asymptotic:.9f}",
        "f_lower": [str(census.f_k_lower(d, k)) for k in range(d + 1)],
    }
    if d <= census.MAX_EXACT_D:
        count = census.count_independent_sets(d)
        rec.update(count=str(count), upper_bound_holds=census.upper_bound_check(d),
                   sum=str(census.sap_sum(d)),
                   count_over_asymptotic=f"{census.LogValue.from_int(count).ratio(asym):.9f}")
    return [rec]


def _container_row(g, rec) -> dict:
    return {
        "A": _fmt_set(g, rec.A), "v": _fmt_set(g, 1 << rec.v)[0],
        "a": rec.a, "g": rec.g, "t": rec.t,
        "Fprime": _fmt_set(g, rec.Fprime), "F": _fmt_set(g, rec.F), "S": _fmt_set(g, rec.S),
        "T0": rec.T0_size, "T0prime": rec.T0prime_size, "T1": rec.T1_size,
        "omega": rec.omega_size, "retries": rec.retries,
        "phi_valid": rec.phi_valid, "eq7": rec.psi_check.eq7, "eq8": rec.psi_check.eq8,
        "eq9": rec.psi_check.eq9, "lemma51": rec.psi_check.lemma51,
        "certificate_ok": rec.certificate_ok, "step1": rec.step1, "step2": rec.step2,
        "steps_ok": rec.steps_ok, "branch": rec.branch, "reconstructed": rec.reconstructed,
        "ok": rec.ok,
    }


def _cmd_containers(cfg: RunConfig):
    g = _host(cfg)
    if cfg.a is not None:
        res = container_pipeline(g, cfg.a, cfg.g, cfg.v, cfg.params)
        rows = [_container_row(g, r) for r in res.records]
        rows.append({"summary": True, "covered": res.covered, "total": res.total,
                     "family_size": len(res.family), "benchmark_log2": f"{res.benchmark_log2:.6f}"})
        return rows
    if g.class_x.bit_count() <= 8:
        records = container_sweep(g, linked_sets(g), cfg.params, "all", cfg.parallelism)
    else:
        sets = sample_linked_sets(g, cfg.samples, cfg.params.seed)
        records = container_sweep(g, sets, cfg.params, "lowest", cfg.parallelism, stream=False)
    rows = [_container_row(g, r) for r in records]
    rows.append({"summary": True, "covered": sum(r.ok for r in records), "total": len(records)})
    return rows


def _cmd_iso(cfg: RunConfig):
    d = cfg.d
    mode = "exhaustive" if d <= EXHAUSTIVE_MAX_D else "sampled"
    rows = []
    for size in range(1 << (d - 1) if d > 1 else 1):
        size += 1
        best, arg = min_neighborhood(d, "even", size, mode, seed=cfg.params.seed)
        row = {"size": size, "min_neighborhood": best, "minimiser": _fmt_set(Hypercube(d), arg),
               "mode": mode}
        if d <= EXHAUSTIVE_MAX_D:
            row["ball_minimum"] = min_ball_neighborhood(d, "even", size)
        rows.append(row)
    return rows


def _cmd_cover(cfg: RunConfig):
    g = _host(cfg)
    inst = CoverInstance.from_graph(g, g.class_x, g.class_y)
    Q = greedy_cover(inst)
    return [{"cover": _fmt_set(g, Q), "size": Q.bit_count(),
             "bound": f"{lovasz_stein_bound(inst):.6f}", "a": inst.min_degree_p,
             "b": inst.max_degree_q}]


def _cmd_verify(cfg: RunConfig):
    graph = load_graph(cfg.graph) if cfg.graph else None
    return [r.to_dict() for r in verify_suite(cfg.suite, cfg.d, cfg.params, cfg.extended, graph)]


def _cmd_graph_check(cfg: RunConfig):
    g = load_graph(cfg.graph)
    return [{"vertices": g.n, "degree": g.degree, "edges": g.num_edges(),
             "codegree": g.codegree}]


COMMANDS = {
    "count": _cmd_count, "sum": _cmd_sum, "bounds": _cmd_bounds,
    "containers": _cmd_containers, "iso": _cmd_iso, "cover": _cmd_cover,
    "verify": _cmd_verify, "graph-check": _cmd_graph_check,
}


# ---------------------------------------------------------------- output

def _render(cfg: RunConfig, rows: list[dict], elapsed: float | None) -> str:
    if cfg.format == "csv":
        flat = [{k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()}
                for r in rows]
        keys = list(dict.fromkeys(k for r in flat for k in r))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    if cfg.format == "text":
        lines = []
        for r in rows:
            lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
        if elapsed is not None:
            lines.append(f"elapsed={elapsed:.3f}s")
        return "\n".join(lines) + "\n"
    out = []
    for r in rows:
        rec = {"schema_version": SCHEMA_VERSION, "command": cfg.command,
               "inputs": cfg.inputs(), "outputs": r}
        if elapsed is not None:
            rec["elapsed_s"] = round(elapsed, 6)
        out.append(json.dumps(rec, sort_keys=True))
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypercube-indsets",
                                description="Independent sets in the hypercube: exact counts, "
                                            "containers and isoperimetry at small dimension.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--phi", type=int)
    p.add_argument("--psi", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--cprime", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=1000)
    p.add_argument("--budget", type=int, default=10**7,
                   help="containers: cap on enumeration nodes before exit 3")
    p.add_argument("--method", default="exact", choices=["exact", "branch", "pairs", "sides"])
    p.add_argument("--format", default="json", choices=["json", "csv", "text"])
    p.add_argument("--out")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--suite", default="all", choices=["all", *SUITES])
    p.add_argument("--graph")
    p.add_argument("--extended", action="store_true", help="allow d = 6 counting")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed time (byte-stable output)")
    p.add_argument("--table", action="store_true", help="count: ratio table for d = 1..D")
    p.add_argument("--samples", type=int, default=1000,
                   help="containers: linked sets sampled when exhaustion is too large")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(ns)
        start = time.perf_counter()
        rows = COMMANDS[cfg.command](cfg)
        elapsed = time.perf_counter() - start if cfg.timing else None
    except (EnumerationLimitError, ConstructionFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(cfg, rows, elapsed)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify" and not all(r["passed"] for r in rows):
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
