"""Exact-rational fractional matching and vertex cover via simplex.

Everything in this module computes with :class:`fractions.Fraction`;
there is no floating point and no rounding, so optimal values and
duality checks are bit-exact.  The matching side runs a primal simplex
(slack basis is feasible), the cover side runs a dual simplex on its
own tableau (slack basis is dual-feasible), so the two optima are
produced by genuinely different solves and their equality is a
meaningful cross-check.

Optimal faces are generally not singletons: ties are broken by
Bland-style smallest-index rules, and callers should assert values and
certificate feasibility, never specific weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .hypergraph import Hypergraph

Edge = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FractionalMatching:
    """Edge weights in [0,1] with per-vertex load at most 1."""

    weights: dict[Edge, Fraction]

    def value(self) -> Fraction:
        return sum(self.weights.values(), ZERO)

    def vertex_load(self, graph: Hypergraph) -> list[Fraction]:
        load = [ZERO] * graph.n_vertices
        for e, w in self.weights.items():
            for v in e:
                load[v] += w
        return load

    def is_feasible(self, graph: Hypergraph) -> bool:
        edge_set = set(graph.edges)
        if any(e not in edge_set for e in self.weights):
            return False
        if any(w < 0 or w > 1 for w in self.weights.values()):
            return False
        return all(l <= 1 for l in self.vertex_load(graph))

    def saturates(self, graph: Hypergraph) -> bool:
        return all(l == 1 for l in self.vertex_load(graph))


@dataclass(frozen=True)
class FractionalCover:
    """Vertex weights in [0,1] with every edge weighted to at least 1."""

    weights: dict[int, Fraction]

    def value(self) -> Fraction:
        return sum(self.weights.values(), ZERO)

    def is_feasible(self, graph: Hypergraph) -> bool:
        if any(w < 0 or w > 1 for w in self.weights.values()):
            return False
        get = self.weights.get
        return all(
            sum((get(v, ZERO) for v in e), ZERO) >= 1 for e in graph.edges
        )


class _Tableau:
    """Dense simplex tableau over Fractions; rhs is the last column."""

    def __init__(self, rows: list[list[Fraction]], cbar: list[Fraction],
                 basis: list[int]):
        self.rows = rows
        self.cbar = cbar  # reduced costs plus negated objective value
        self.basis = basis

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        piv = prow[j]
        inv = 1 / piv
        for idx, x in enumerate(prow):
            if x:
                prow[idx] = x * inv
        nonzeros = [(idx, x) for idx, x in enumerate(prow) if x]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[j]
            if f:
                for idx, x in nonzeros:
                    row[idx] -= f * x
        f = self.cbar[j]
        if f:
            for idx, x in nonzeros:
                self.cbar[idx] -= f * x
        self.basis[r] = j

    def objective(self) -> Fraction:
        return -self.cbar[-1]


def _primal_simplex(tab: _Tableau) -> None:
    """Maximize from a primal-feasible basis; Bland's smallest-index rule."""
    ncols = len(tab.cbar) - 1
    while True:
        enter = next((j for j in range(ncols) if tab.cbar[j] > 0), None)
        if enter is None:
            return
        leave = None
        best: Optional[Fraction] = None
        for i, row in enumerate(tab.rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (
                    ratio == best and tab.basis[i] < tab.basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("LP unbounded; malformed instance")
        tab.pivot(leave, enter)


def _dual_simplex(tab: _Tableau) -> None:
    """Restore primal feasibility from a dual-feasible basis."""
    ncols = len(tab.cbar) - 1
    while True:
        leave = None
        for i, row in enumerate(tab.rows):
            if row[-1] < 0 and (
                leave is None or tab.basis[i] < tab.basis[leave]
            ):
                leave = i
        if leave is None:
            return
        row = tab.rows[leave]
        enter = None
        best: Optional[Fraction] = None
        for j in range(ncols):
            a = row[j]
            if a < 0:
                ratio = tab.cbar[j] / a
                if best is None or ratio < best:
                    best = ratio
                    enter = j
        if enter is None:
            raise ArithmeticError("LP infeasible; malformed instance")
        tab.pivot(leave, enter)


def max_fractional_matching(
    graph: Hypergraph,
) -> tuple[Fraction, FractionalMatching]:
    """Optimal fractional matching: max total weight, loads at most 1."""
    edges = graph.edges
    m = len(edges)
    n = graph.n_vertices
    if m == 0:
        return ZERO, FractionalMatching(weights={})
    rows = []
    for v in range(n):
        row = [ZERO] * (m + n + 1)
        for j, e in enumerate(edges):
            if v in e:
                row[j] = ONE
        row[m + v] = ONE
        row[-1] = ONE
        rows.append(row)
    cbar = [ONE] * m + [ZERO] * n + [ZERO]
    tab = _Tableau(rows, cbar, basis=[m + v for v in range(n)])
    _primal_simplex(tab)
    weights = {e: ZERO for e in edges}
    for i, b in enumerate(tab.basis):
        if b < m:
            weights[edges[b]] = tab.rows[i][-1]
    return tab.objective(), FractionalMatching(weights=weights)


def min_fractional_cover(
    graph: Hypergraph,
) -> tuple[Fraction, FractionalCover]:
    """Optimal fractional vertex cover: min total weight, edges covered."""
    edges = graph.edges
    m = len(edges)
    n = graph.n_vertices
    weights = {v: ZERO for v in range(n)}
    if m == 0:
        return ZERO, FractionalCover(weights=weights)
    # max -sum(p) subject to -sum_{v in e} p_v <= -1: slack basis is
    # dual-feasible, then dual simplex restores primal feasibility.
    rows = []
    for i, e in enumerate(edges):
        row = [ZERO] * (n + m + 1)
        for v in e:
            row[v] = -ONE
        row[n + i] = ONE
        row[-1] = -ONE
        rows.append(row)
    cbar = [-ONE] * n + [ZERO] * m + [ZERO]
    tab = _Tableau(rows, cbar, basis=[n + i for i in range(m)])
    _dual_simplex(tab)
    for i, b in enumerate(tab.basis):
        if b < n:
            weights[b] = tab.rows[i][-1]
    return -tab.objective(), FractionalCover(weights=weights)


def verify_duality(graph: Hypergraph) -> bool:
    """Exact equality of the two optima, with both certificates feasible."""
    nu, matching = max_fractional_matching(graph)
    tau, cover = min_fractional_cover(graph)
    return (
        nu == tau
        and matching.is_feasible(graph)
        and cover.is_feasible(graph)
    )


def fractional_perfect_matching(
    graph: Hypergraph,
) -> tuple[bool, Optional[FractionalMatching]]:
    """Fractional matching saturating every vertex, when one exists.

    Exists exactly when the optimal value reaches n/k, in which case the
    loads of an optimal matching are forced to 1 everywhere; that is
    asserted before returning.
    """
    value, matching = max_fractional_matching(graph)
    if graph.n_vertices == 0:
        return True, matching
    if value != Fraction(graph.n_vertices, graph.k):
        return False, None
    if not matching.saturates(graph):
        raise AssertionError("optimal matching at n/k failed to saturate")
    return True, matching
