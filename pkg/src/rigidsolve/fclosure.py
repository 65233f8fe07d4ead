"""Brute-force membership in the gluing family generated by globally rigid graphs.

Membership is computed by forward closure on labelled graphs: every vertex
subset is seeded with its globally rigid graphs, then pairs meeting in exactly
two vertices are glued by the three operations

* (a) ``G1 | G2``
* (b) ``(G1 - uv) | G2`` when uv is an edge of G1
* (c) ``(G1 - uv) | (G2 - uv)`` when uv is in both and both remainders are rigid

Every glued graph has strictly more vertices than either part, so the closure
is reached level by level in the vertex count.  Members of a level are stored
once on ``0..k-1`` and relabelled onto each k-subset.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .graphcore import Graph, GraphError
from .rigidity import is_globally_rigid, is_rigid

MAX_VERTICES = 7

Edges = frozenset


def _all_edge_sets(k: int):
    pairs = list(itertools.combinations(range(k), 2))
    for mask in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)


@lru_cache(maxsize=None)
def _seeds(k: int) -> frozenset[Edges]:
    verts = frozenset(range(k))
    return frozenset(es for es in _all_edge_sets(k) if is_globally_rigid(Graph(verts, es)))


@lru_cache(maxsize=None)
def _flex_free(k: int, es: Edges) -> bool:
    return is_rigid(Graph(frozenset(range(k)), es))


def _relabel(es: Edges, labels: tuple[int, ...]) -> Edges:
    return frozenset((labels[a], labels[b]) for a, b in es)


def _covers(k: int):
    """Pairs (V1, V2) with V1 | V2 = 0..k-1, |V1 & V2| = 2, both private parts non-empty."""
    for u, v in itertools.combinations(range(k), 2):
        rest = [x for x in range(k) if x not in (u, v)]
        for mask in range(1, (1 << len(rest)) - 1):
            p1 = [x for i, x in enumerate(rest) if mask >> i & 1]
            p2 = [x for i, x in enumerate(rest) if not mask >> i & 1]
            yield (u, v), tuple(sorted(p1 + [u, v])), tuple(sorted(p2 + [u, v]))


def _glue(k: int) -> set[Edges]:
    out: set[Edges] = set()
    for (u, v), v1, v2 in _covers(k):
        e = (u, v)
        local1 = {x: i for i, x in enumerate(v1)}
        local2 = {x: i for i, x in enumerate(v2)}
        for es1 in level(len(v1)):
            g1 = _relabel(es1, v1)
            for es2 in level(len(v2)):
                g2 = _relabel(es2, v2)
                out.add(g1 | g2)
                if e in g1:
                    out.add((g1 - {e}) | g2)
                if e in g1 and e in g2:
                    r1, r2 = es1 - {(local1[u], local1[v])}, es2 - {(local2[u], local2[v])}
                    if _flex_free(len(v1), r1) and _flex_free(len(v2), r2):
                        out.add((g1 - {e}) | (g2 - {e}))
    return out


@lru_cache(maxsize=None)
def level(k: int) -> frozenset[Edges]:
    """All family members on vertex set 0..k-1 (every vertex counted, isolated ones too)."""
    if k < 3:
        return _seeds(k)
    return frozenset(_seeds(k) | _glue(k))


@lru_cache(maxsize=None)
def _top_level(k: int) -> frozenset[Edges]:
    # glued members at the top level only; seeds there are checked one graph at a time
    return frozenset(_glue(k))


def f_closure_oracle(g: Graph) -> bool:
    if g.n > MAX_VERTICES:
        raise GraphError(f"closure oracle is limited to {MAX_VERTICES} vertices")
    h, _ = g.compact()
    if is_globally_rigid(h):
        return True
    if h.n < 3:
        return False
    if h.n <= 6:
        return h.edges in level(h.n)
    return h.edges in _top_level(h.n)
