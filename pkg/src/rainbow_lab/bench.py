"""Benchmark of the compiled search core against the pure-Python fallback.

Runs the same mask-level workloads through both backends, checks that
the witnesses agree bit-for-bit, and reports wall times.  Workloads are
refutations (the expensive case for exhaustive search) plus one large
satisfiable instance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import kernel
from .constructions import (
    HypergraphFamily,
    complete_partite,
    extremal_graph,
    extremal_partite,
)
from .solvers import edge_mask


@dataclass
class BenchCase:
    name: str
    run: Callable[[object], tuple]


@dataclass
class BenchResult:
    name: str
    timings_ms: dict[str, float]
    agree: bool

    def speedup(self) -> Optional[float]:
        if "pure" in self.timings_ms and "compiled" in self.timings_ms:
            c = self.timings_ms["compiled"]
            return self.timings_ms["pure"] / c if c > 0 else None
        return None


def _partite_pm_case(n: int) -> BenchCase:
    graph = extremal_partite(n)
    masks = [edge_mask(e) for e in graph.edges]
    n_vertices = graph.n_vertices

    def run(backend):
        return backend.exact_cover(masks, n_vertices)

    return BenchCase(name=f"partite-pm-refute n={n}", run=run)


def _rainbow_case(n: int) -> BenchCase:
    member = extremal_graph(n, n // 3, 2)
    family = HypergraphFamily(n, (member,) * (n // 3))
    color_masks = [[edge_mask(e) for e in m.edges] for m in family.members]

    def run(backend):
        return backend.rainbow_search(color_masks)

    return BenchCase(name=f"rainbow-refute n={n}", run=run)


def _max_matching_case(n: int, s: int, ell: int) -> BenchCase:
    graph = extremal_graph(n, s, ell)
    masks = [edge_mask(e) for e in graph.edges]

    def run(backend):
        return backend.max_disjoint_edges(masks, 3, n)

    return BenchCase(name=f"max-matching ell={ell} n={n}", run=run)


def _dense_pm_case(q: int) -> BenchCase:
    graph = complete_partite(q, 3 * q)
    masks = [edge_mask(e) for e in graph.edges]
    n_vertices = graph.n_vertices

    def run(backend):
        return backend.exact_cover(masks, n_vertices)

    return BenchCase(name=f"complete-pm-find q={q}", run=run)


def default_cases(quick: bool = False) -> list[BenchCase]:
    if quick:
        return [
            _partite_pm_case(6),
            _rainbow_case(6),
            _max_matching_case(9, 3, 2),
            _dense_pm_case(4),
        ]
    return [
        _partite_pm_case(9),
        _partite_pm_case(12),
        _rainbow_case(9),
        _rainbow_case(12),
        _max_matching_case(12, 4, 1),
        _max_matching_case(12, 4, 2),
        _dense_pm_case(6),
    ]


def run_benchmark(
    quick: bool = False, repeat: int = 3
) -> list[BenchResult]:
    results = []
    for case in default_cases(quick=quick):
        timings: dict[str, float] = {}
        outputs: dict[str, tuple] = {}
        for name in kernel.available_backends():
            backend = kernel.get_backend(name)
            best = None
            for _ in range(repeat):
                start = time.perf_counter()
                out = case.run(backend)
                elapsed = (time.perf_counter() - start) * 1000
                best = elapsed if best is None else min(best, elapsed)
            timings[name] = best
            outputs[name] = out
        distinct = {repr(o) for o in outputs.values()}
        results.append(
            BenchResult(name=case.name, timings_ms=timings, agree=len(distinct) == 1)
        )
    return results


def format_table(results: list[BenchResult]) -> str:
    lines = [
        f"{'workload':28}  {'pure ms':>10}  {'compiled ms':>12}  "
        f"{'speedup':>8}  agree"
    ]
    for r in results:
        pure = r.timings_ms.get("pure")
        comp = r.timings_ms.get("compiled")
        sp = r.speedup()
        pure_s = f"{pure:10.2f}" if pure is not None else f"{'-':>10}"
        comp_s = f"{comp:12.2f}" if comp is not None else f"{'-':>12}"
        sp_s = f"{sp:8.1f}" if sp is not None else f"{'-':>8}"
        lines.append(f"{r.name:28}  {pure_s}  {comp_s}  {sp_s}  {r.agree}")
    return "\n".join(lines)
