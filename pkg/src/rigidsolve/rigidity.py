"""Generic rigidity in the plane: (2,3)-pebble game, redundancy, global rigidity."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graphcore import Edge, Graph, is_k_connected, norm_edge

PRIME = 2**61 - 1


class PebbleGame:
    """(2,3)-pebble game over a fixed vertex set.

    Every vertex starts with two pebbles; an accepted edge is oriented out of
    the endpoint that paid for it, so ``pebbles[v] + outdegree(v) == 2`` holds
    throughout.
    """

    def __init__(self, vertices: Iterable[int]):
        self.pebbles = {v: 2 for v in vertices}
        self.out: dict[int, set[int]] = {v: set() for v in self.pebbles}
        self.accepted: list[Edge] = []

    def _fetch(self, root: int, blocked: int) -> bool:
        # DFS along out-edges for a free pebble, then reverse the path to move it to root
        parent = {root: None, blocked: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    while parent[y] is not None:
                        p = parent[y]
                        self.out[p].discard(y)
                        self.out[y].add(p)
                        y = p
                    self.pebbles[root] += 1
                    return True
                stack.append(y)
        return False

    def gather(self, u: int, v: int) -> int:
        """Move as many pebbles as possible onto u and v; returns their total."""
        while self.pebbles[u] < 2 and self._fetch(u, v):
            pass
        while self.pebbles[v] < 2 and self._fetch(v, u):
            pass
        return self.pebbles[u] + self.pebbles[v]

    def independent(self, u: int, v: int) -> bool:
        return self.gather(u, v) == 4

    def add_edge(self, u: int, v: int) -> bool:
        if not self.independent(u, v):
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        self.accepted.append(norm_edge(u, v))
        return True

    def check(self) -> bool:
        return all(self.pebbles[v] + len(self.out[v]) == 2 for v in self.pebbles)


def pebble_game(g: Graph, edges: Iterable[Edge] | None = None) -> PebbleGame:
    game = PebbleGame(g.vertices)
    for u, v in (g.sorted_edges if edges is None else edges):
        game.add_edge(u, v)
    return game


def generic_rank(g: Graph) -> int:
    return len(pebble_game(g).accepted)


def is_rigid(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return generic_rank(g) == 2 * g.n - 3


def is_minimally_rigid(g: Graph) -> bool:
    return is_rigid(g) and g.m == max(2 * g.n - 3, 0)


@dataclass
class RedundancyReport:
    rank: int
    rigid: bool
    redundant_edges: frozenset[Edge]
    components: list[frozenset[Edge]] = field(default_factory=list)
    trivial_components: list[frozenset[Edge]] = field(default_factory=list)

    @property
    def redundantly_rigid(self) -> bool:
        return self.rigid and len(self.trivial_components) == 0

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rigid": self.rigid,
            "redundantlyRigid": self.redundantly_rigid,
            "redundantEdges": [list(e) for e in sorted(self.redundant_edges)],
            "components": [[list(e) for e in sorted(c)] for c in self.components],
            "trivialComponents": [list(min(c)) for c in self.trivial_components],
        }


def redundant_edges(g: Graph) -> tuple[int, frozenset[Edge]]:
    game = pebble_game(g)
    basis = set(game.accepted)
    rank = len(basis)
    red = set(g.edges - basis)
    for e in basis:
        rest = [f for f in g.sorted_edges if f != e]
        if len(pebble_game(g, rest).accepted) == rank:
            red.add(e)
    return rank, frozenset(red)


def rigid_components(g: Graph) -> list[frozenset[Edge]]:
    """Edge sets of the maximal rigid subgraphs of ``g`` (single edges included)."""
    game = pebble_game(g)
    linked_cache: dict[Edge, bool] = {}

    def linked(a: int, b: int) -> bool:
        e = norm_edge(a, b)
        if e in g.edges:
            return True
        if e not in linked_cache:
            linked_cache[e] = not game.independent(a, b)
        return linked_cache[e]

    done: set[Edge] = set()
    comps = []
    for a, b in g.sorted_edges:
        if (a, b) in done:
            continue
        verts = {a, b} | {x for x in g.sorted_vertices
                          if x not in (a, b) and linked(a, x) and linked(b, x)}
        comp = frozenset(e for e in g.edges if e[0] in verts and e[1] in verts)
        done |= comp
        comps.append(comp)
    return comps


def redundancy(g: Graph) -> RedundancyReport:
    """Redundant edges and redundantly rigid components.

    The non-trivial components are the rigid components of the subgraph formed
    by the redundant edges: every redundant edge lies in a circuit, circuits are
    rigid, so each circuit sits inside one rigid component of that subgraph.
    """
    rank, red = redundant_edges(g)
    rigid = g.n <= 1 or rank == 2 * g.n - 3
    comps = rigid_components(Graph(g.vertices, red)) if red else []
    comps.sort(key=min)
    trivial = [frozenset([e]) for e in g.sorted_edges if e not in red]
    return RedundancyReport(rank, rigid, red, comps, trivial)


def is_redundantly_rigid(g: Graph) -> bool:
    if not is_rigid(g):
        return False
    return len(redundant_edges(g)[1]) == g.m


def is_globally_rigid(g: Graph) -> bool:
    if g.n <= 3:
        return g.is_complete()
    # cheap necessary conditions first: m >= 2n-2, min degree 3
    if g.m < 2 * g.n - 2 or any(len(a) < 3 for a in g.adj.values()):
        return False
    return is_k_connected(g, 3) and is_redundantly_rigid(g)


def rigidity_rows(g: Graph, coords: dict[int, Sequence]) -> list[list]:
    """Rows of the rigidity matrix, one per edge in sorted order, columns (x, y) per sorted vertex."""
    col = {v: 2 * i for i, v in enumerate(g.sorted_vertices)}
    rows = []
    for u, v in g.sorted_edges:
        row = [0] * (2 * g.n)
        dx = coords[u][0] - coords[v][0]
        dy = coords[u][1] - coords[v][1]
        row[col[u]], row[col[u] + 1] = dx, dy
        row[col[v]], row[col[v] + 1] = -dx, -dy
        rows.append(row)
    return rows


def rank_mod_p(rows: list[list[int]], p: int = PRIME) -> int:
    mat = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], p - 2, p)
        prow = [x * inv % p for x in mat[rank]]
        mat[rank] = prow
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], prow)]
        rank += 1
    return rank


def matrix_rank_oracle(g: Graph, seed: int) -> int:
    """Rank of the rigidity matrix over GF(p) at a seeded uniformly random placement."""
    if g.m == 0:
        return 0
    rng = random.Random(seed)
    coords = {v: (rng.randrange(PRIME), rng.randrange(PRIME)) for v in g.sorted_vertices}
    return rank_mod_p(rigidity_rows(g, coords))
