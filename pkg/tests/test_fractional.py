"""Exact-rational LP: optima, certificates, duality.

Optimal certificates are degenerate in general, so assertions cover
values and feasibility, never specific weights.  A floating-point LP
solver serves as the independent oracle for optimal values.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from rainbow_lab.constructions import extremal_graph, extremal_partite
from rainbow_lab.fractional import (
    FractionalCover,
    FractionalMatching,
    fractional_perfect_matching,
    max_fractional_matching,
    min_fractional_cover,
    verify_duality,
)
from rainbow_lab.hypergraph import Hypergraph, complete_hypergraph, empty_hypergraph
from rainbow_lab.solvers import has_perfect_matching, max_matching

from _oracles import float_lp_matching_value


def random_3graph(rng, n, prob):
    return Hypergraph(
        3, n, [e for e in combinations(range(n), 3) if rng.random() < prob]
    )


TRIANGLE = Hypergraph(2, 3, [(0, 1), (0, 2), (1, 2)])


class TestMatchingSide:
    def test_complete_nine(self):
        value, fm = max_fractional_matching(complete_hypergraph(3, 9))
        assert value == 3 and fm.is_feasible(complete_hypergraph(3, 9))

    def test_single_edge(self):
        h = Hypergraph(3, 3, [(0, 1, 2)])
        value, _ = max_fractional_matching(h)
        assert value == 1

    def test_wide_extremal_capped_by_blockers(self):
        value, fm = max_fractional_matching(extremal_graph(9, 3, 1))
        assert value == 2 and fm.is_feasible(extremal_graph(9, 3, 1))

    def test_triangle_half_integral(self):
        value, _ = max_fractional_matching(TRIANGLE)
        assert value == Fraction(3, 2)

    def test_empty(self):
        value, fm = max_fractional_matching(empty_hypergraph(3, 4))
        assert value == 0 and fm.weights == {}


class TestCoverSide:
    def test_triangle_half_integral(self):
        value, fc = min_fractional_cover(TRIANGLE)
        assert value == Fraction(3, 2) and fc.is_feasible(TRIANGLE)

    def test_complete_six(self):
        value, fc = min_fractional_cover(complete_hypergraph(3, 6))
        assert value == 2 and fc.is_feasible(complete_hypergraph(3, 6))

    def test_empty(self):
        value, fc = min_fractional_cover(empty_hypergraph(3, 5))
        assert value == 0 and fc.is_feasible(empty_hypergraph(3, 5))

    def test_wide_extremal_blockers_suffice(self):
        h = extremal_graph(9, 3, 1)
        value, fc = min_fractional_cover(h)
        assert value == 2 and fc.is_feasible(h)


class TestDuality:
    def test_tight_extremal(self):
        assert verify_duality(extremal_graph(9, 3, 2))

    def test_empty(self):
        assert verify_duality(empty_hypergraph(3, 4))

    def test_random_instances_exact(self):
        rng = random.Random(13)
        for _ in range(30):
            h = random_3graph(rng, rng.randint(4, 10), rng.uniform(0.05, 0.8))
            assert verify_duality(h)

    def test_values_match_float_oracle(self):
        rng = random.Random(14)
        for _ in range(15):
            h = random_3graph(rng, rng.randint(4, 9), rng.uniform(0.1, 0.7))
            exact, _ = max_fractional_matching(h)
            approx = float_lp_matching_value(h.edges, h.n_vertices)
            assert abs(float(exact) - approx) < 1e-7

    def test_integral_below_fractional(self):
        rng = random.Random(15)
        for _ in range(15):
            h = random_3graph(rng, rng.randint(4, 9), rng.uniform(0.1, 0.7))
            nu, _ = max_fractional_matching(h)
            assert len(max_matching(h)) <= nu
            assert nu <= Fraction(h.n_vertices, h.k)


class TestCertificates:
    def test_matching_weights_in_range(self):
        rng = random.Random(16)
        for _ in range(10):
            h = random_3graph(rng, 8, 0.4)
            _, fm = max_fractional_matching(h)
            assert all(0 <= w <= 1 for w in fm.weights.values())

    def test_cover_weights_in_range(self):
        rng = random.Random(17)
        for _ in range(10):
            h = random_3graph(rng, 8, 0.4)
            _, fc = min_fractional_cover(h)
            assert all(0 <= w <= 1 for w in fc.weights.values())

    def test_feasibility_rejects_bad_certificates(self):
        h = complete_hypergraph(3, 6)
        bad_matching = FractionalMatching(
            weights={e: Fraction(1) for e in h.edges}
        )
        assert not bad_matching.is_feasible(h)
        bad_cover = FractionalCover(weights={v: Fraction(0) for v in range(6)})
        assert not bad_cover.is_feasible(h)


class TestFractionalPerfectMatching:
    def test_complete_six(self):
        found, fm = fractional_perfect_matching(complete_hypergraph(3, 6))
        assert found and fm.saturates(complete_hypergraph(3, 6))

    def test_tight_partite_blocked(self):
        # the three blocking vertices can carry total load at most 3,
        # but every edge needs two of them: value caps at 3/2 < 2
        h = extremal_partite(6).as_hypergraph()
        found, fm = fractional_perfect_matching(h)
        assert not found and fm is None
        value, _ = max_fractional_matching(h)
        assert value == Fraction(3, 2)

    def test_isolated_vertex_blocks(self):
        h = Hypergraph(3, 6, [(0, 1, 2)])
        found, _ = fractional_perfect_matching(h)
        assert not found

    def test_integral_pm_implies_fractional(self):
        rng = random.Random(18)
        for _ in range(15):
            h = random_3graph(rng, 9, rng.uniform(0.1, 0.6))
            if has_perfect_matching(h)[0]:
                assert fractional_perfect_matching(h)[0]
