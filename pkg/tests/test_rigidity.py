import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from rigidsolve.families import NAMED, complete, complete_bipartite, cycle, k4_minus_edge, prism, random_graph
from rigidsolve.graphcore import Graph
from rigidsolve.rigidity import (PebbleGame, generic_rank, is_globally_rigid, is_minimally_rigid,
                                 is_redundantly_rigid, is_rigid, matrix_rank_oracle, pebble_game,
                                 rank_mod_p, redundancy, rigid_components)

from test_graphcore import graphs


def brute_rank(g: Graph) -> int:
    """Largest (2,3)-sparse edge subset, by exhaustive search."""
    edges = g.sorted_edges
    for size in range(len(edges), -1, -1):
        for sub in itertools.combinations(edges, size):
            if all(len(s) <= 2 * len({x for e in s for x in e}) - 3
                   for k in range(2, size + 1) for s in itertools.combinations(sub, k)):
                return size
    return 0


def edge_set_redundantly_rigid(es) -> bool:
    h = Graph.spanned_by(es)
    return h.m >= 2 and is_redundantly_rigid(h)


def brute_components(g: Graph) -> set:
    """Maximal redundantly rigid edge subsets, by exhaustive search."""
    good = [frozenset(s) for k in range(2, g.m + 1) for s in itertools.combinations(g.sorted_edges, k)
            if edge_set_redundantly_rigid(s)]
    return {s for s in good if not any(s < t for t in good)}


class TestRank:
    def test_examples(self):
        assert generic_rank(complete(3)) == 3
        assert generic_rank(cycle(4)) == 4
        assert generic_rank(complete_bipartite(3, 3)) == 9

    def test_small_conventions(self):
        assert is_rigid(Graph.from_edges(1, []))
        assert is_rigid(Graph.from_edges(2, [(0, 1)]))
        assert not is_rigid(Graph.from_edges(2, []))

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=5))
    def test_matches_brute_force(self, g):
        if g.m <= 8:
            assert generic_rank(g) == brute_rank(g)

    @pytest.mark.parametrize("name", sorted(NAMED))
    def test_oracle_on_named(self, name):
        g = NAMED[name]()
        assert generic_rank(g) == matrix_rank_oracle(g, 0)

    def test_oracle_examples(self):
        assert matrix_rank_oracle(complete(3), 5) == 3
        assert matrix_rank_oracle(complete_bipartite(3, 3), 0) == 9
        assert matrix_rank_oracle(Graph.from_edges(4, []), 0) == 0

    def test_oracle_deterministic(self):
        g = complete(5)
        assert matrix_rank_oracle(g, 9) == matrix_rank_oracle(g, 9)

    def test_rank_mod_p(self):
        assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
        assert rank_mod_p([[1, 2], [3, 4]], 7) == 2
        assert rank_mod_p([], 7) == 0

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=8), st.integers(0, 2**32))
    def test_monotone_under_edge_addition(self, g, seed):
        rng = random.Random(seed)
        missing = [e for e in itertools.combinations(range(g.n), 2) if e not in g.edges]
        if not missing:
            return
        bigger = g.add_edge(*rng.choice(missing))
        r, r2 = generic_rank(g), generic_rank(bigger)
        assert r <= r2 <= r + 1
        if is_rigid(g):
            assert is_rigid(bigger)

    def test_pebble_invariants(self):
        rng = random.Random(1)
        for _ in range(50):
            g = random_graph(8, 0.6, rng)
            game = pebble_game(g)
            game.check()
            assert len(game.accepted) == generic_rank(g)

    def test_pebble_game_rejects_fourth_edge_of_triangle_pair(self):
        game = PebbleGame(range(2))
        assert game.add_edge(0, 1)
        assert not game.add_edge(0, 1)


class TestRedundancy:
    def test_k4(self):
        rep = redundancy(complete(4))
        assert rep.redundant_edges == complete(4).edges
        assert rep.components == [complete(4).edges]
        assert rep.redundantly_rigid

    def test_k4_with_triangle(self):
        g = complete(4).union(Graph.from_edges(5, [(2, 4), (3, 4)]))
        rep = redundancy(g)
        assert rep.components == [complete(4).edges]
        assert sorted(rep.trivial_components) == [frozenset({(2, 4)}), frozenset({(3, 4)})]

    def test_prism(self):
        rep = redundancy(prism())
        assert rep.redundant_edges == frozenset() and rep.components == []

    def test_three_k4s_in_a_ring(self):
        # pairwise sharing one vertex: redundant blocks meet in single vertices,
        # yet the union is one rigid circuit-connected piece
        a = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        b = [(3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]
        c = [(6, 7), (6, 8), (6, 0), (7, 8), (7, 0), (8, 0)]
        g = Graph.from_edges(9, a + b + c)
        rep = redundancy(g)
        assert len(rep.components) == 1 and rep.redundantly_rigid

    @pytest.mark.parametrize("seed", range(12))
    def test_components_match_brute_force(self, seed):
        rng = random.Random(seed)
        n = rng.choice([5, 6])
        g = random_graph(n, 0.55, rng)
        while g.m > 11:
            g = g.remove_edge(*rng.choice(g.sorted_edges))
        assert set(redundancy(g).components) == brute_components(g)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=8))
    def test_components_satisfy_definition(self, g):
        rep = redundancy(g)
        for comp in rep.components:
            assert edge_set_redundantly_rigid(comp)
        covered = set().union(*rep.components) if rep.components else set()
        assert covered == set(rep.redundant_edges)

    def test_rigid_components_partition_edges(self):
        rng = random.Random(4)
        for _ in range(30):
            g = random_graph(7, 0.4, rng)
            comps = rigid_components(g)
            assert sum(len(c) for c in comps) == g.m
            assert all(is_rigid(Graph.spanned_by(c)) for c in comps)


class TestGlobalRigidity:
    def test_examples(self):
        assert is_globally_rigid(complete(4))
        assert not is_globally_rigid(k4_minus_edge())
        assert is_globally_rigid(complete_bipartite(3, 4))
        assert not is_globally_rigid(complete_bipartite(3, 3))
        assert is_globally_rigid(complete(3)) and not is_globally_rigid(Graph.from_edges(3, [(0, 1), (1, 2)]))

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=8))
    def test_implies_rigid(self, g):
        if is_globally_rigid(g):
            assert is_rigid(g)
        if is_minimally_rigid(g) and g.n >= 4:
            assert not is_globally_rigid(g)
