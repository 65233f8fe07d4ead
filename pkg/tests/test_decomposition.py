import random

import pytest

from rigidsolve.decomposition import (DecompositionError, cleavage_units, excess, wheel_replace)
from rigidsolve.families import (complete, double_k4_minus_uv, k4_minus_edge, prism,
                                 random_henneberg, random_partially_redundant, triangle_ring)
from rigidsolve.graphcore import Graph, enumerate_2_separations, is_k_connected, is_planar
from rigidsolve.rigidity import is_minimally_rigid, is_rigid, redundancy


def rigid_two_connected_samples(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_henneberg(rng.randint(4, 7), rng)
        for _ in range(rng.randint(0, 3)):
            u, v = rng.sample(range(g.n), 2)
            g = g.add_edge(u, v)
        if is_k_connected(g, 2) and not is_k_connected(g, 3):
            out.append(g)
    return out


class TestCleavage:
    def test_k4(self):
        dec = cleavage_units(complete(4))
        assert len(dec.units) == 1 and dec.units[0].graph == complete(4)

    def test_k4_minus_edge(self):
        dec = cleavage_units(k4_minus_edge())
        assert sorted(u.graph.sorted_vertices for u in dec.units) == [(0, 1, 2), (0, 1, 3)]
        assert all(u.is_triangle for u in dec.units)
        virtual = {u.graph.sorted_vertices: u.virtual for u in dec.units}
        assert virtual[(0, 1, 2)] == frozenset()
        assert virtual[(0, 1, 3)] == {(0, 1)}

    def test_double_k4(self):
        dec = cleavage_units(double_k4_minus_uv())
        assert [u.graph.m for u in dec.units] == [6, 6]
        assert all(u.virtual == {(0, 1)} for u in dec.units)

    def test_reassembles(self):
        for g in rigid_two_connected_samples(25, 1) + [triangle_ring(), double_k4_minus_uv()]:
            assert cleavage_units(g).reassemble() == g

    def test_units_are_triangles_or_three_connected(self):
        for g in rigid_two_connected_samples(25, 2):
            for unit in cleavage_units(g).units:
                assert is_rigid(unit.graph)
                if unit.is_triangle:
                    assert unit.graph.n == 3
                else:
                    assert is_k_connected(unit.graph, 3)

    def test_split_order_invariance(self):
        for g in rigid_two_connected_samples(30, 3):
            base = cleavage_units(g).unit_multiset()
            for i in range(len(enumerate_2_separations(g))):
                assert cleavage_units(g, i).unit_multiset() == base

    def test_json(self):
        doc = cleavage_units(k4_minus_edge()).to_json()
        assert doc["tree"]["separator"] == [0, 1]
        assert {u["kind"] for u in doc["units"]} == {"K3"}
        assert any(e["virtual"] for u in doc["units"] for e in u["edges"])

    def test_rejects_flexible_and_tiny(self):
        with pytest.raises(DecompositionError):
            cleavage_units(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
        with pytest.raises(DecompositionError):
            cleavage_units(complete(2))


class TestWheelReplace:
    def test_minimally_rigid_rejected(self):
        with pytest.raises(DecompositionError, match="minimally rigid"):
            wheel_replace(prism())

    def test_k5_rejected(self):
        with pytest.raises(DecompositionError, match="three attachment"):
            wheel_replace(complete(5))

    def test_prism_plus_chord_is_a_single_circuit(self):
        # adding any chord makes the prism redundantly rigid, so no proper component has attachments
        g = prism().add_edge(0, 4)
        assert redundancy(g).redundantly_rigid
        with pytest.raises(DecompositionError):
            wheel_replace(g, planar_mode=True)

    @pytest.mark.parametrize("seed", range(6))
    def test_postconditions(self, seed):
        rng = random.Random(seed)
        g = random_partially_redundant(rng.randint(7, 10), rng)
        rep = wheel_replace(g, planar_mode=True)
        out = rep.result
        assert is_k_connected(out, 3) and is_rigid(out) and is_planar(out)[0]
        assert excess(out) < excess(g)
        assert rep.hub == max(g.vertices) + 1
        assert rep.removed_rim_edge not in out.edges
        used = {x for e in rep.component for x in e}
        assert set(rep.rim_vertices) <= used
        outside = g.edges - rep.component
        assert set(rep.rim_vertices) == {x for x in used if any(x in e for e in outside)}

    def test_iterates_to_minimal(self):
        rng = random.Random(11)
        g = random_partially_redundant(9, rng)
        steps = 0
        while not is_minimally_rigid(g):
            before = excess(g)
            g = wheel_replace(g, planar_mode=True).result
            assert excess(g) < before
            steps += 1
        assert steps >= 1 and is_k_connected(g, 3)

    def test_json_keys(self):
        g = random_partially_redundant(8, random.Random(0))
        doc = wheel_replace(g).to_json()
        assert doc["excessAfter"] < doc["excessBefore"]
        assert set(doc) >= {"component", "rimVertices", "hub", "removedRimEdge", "result"}

    def test_non_three_connected_rejected(self):
        with pytest.raises(DecompositionError):
            wheel_replace(k4_minus_edge())

    def test_planar_mode_needs_planar_input(self):
        from rigidsolve.families import complete_bipartite
        g = complete_bipartite(3, 4)
        with pytest.raises(DecompositionError, match="planar"):
            wheel_replace(g, planar_mode=True)
