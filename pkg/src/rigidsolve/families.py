"""Named graphs and seeded generators used by the self-test and the test suite."""
from __future__ import annotations

import itertools
import random

from .graphcore import Graph


def complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def prism() -> Graph:
    """Triangular prism: triangles 0-1-2 and 3-4-5 joined by i -- i+3."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                                (0, 3), (1, 4), (2, 5)])


def wheel(n: int) -> Graph:
    """Wheel on n vertices: hub 0, rim 1..n-1 in cyclic order."""
    rim = list(range(1, n))
    edges = [(0, r) for r in rim] + [(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    return Graph.from_edges(n, edges)


def wheel_minus_rim_edge(n: int) -> Graph:
    return wheel(n).remove_edge(1, n - 1)


def k4_minus_edge() -> Graph:
    """K4 on u=0, v=1, a=2, b=3 without ab."""
    return complete(4).remove_edge(2, 3)


def double_k4_minus_uv() -> Graph:
    """Two copies of K4 - uv glued at u=0, v=1 (the pair uv itself absent)."""
    a = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    b = [(0, 4), (0, 5), (1, 4), (1, 5), (4, 5)]
    return Graph.from_edges(6, a + b)


def triangle_ring() -> Graph:
    """Central triangle 0-1-2 with an outer triangle on each side (apexes 3, 4, 5)."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3),
                                (1, 4), (2, 4), (0, 5), (2, 5)])


NAMED = {
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    **{f"C{n}": (lambda n=n: cycle(n)) for n in range(4, 9)},
    "K33": lambda: complete_bipartite(3, 3),
    "K34": lambda: complete_bipartite(3, 4),
    "prism": prism,
    **{f"W{n}": (lambda n=n: wheel(n)) for n in range(4, 9)},
}


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def random_henneberg(n: int, rng: random.Random) -> Graph:
    """Minimally rigid graph built by degree-2 vertex additions from an edge, then shuffled labels."""
    edges = [(0, 1)]
    for v in range(2, n):
        a, b = rng.sample(range(v), 2)
        edges += [(a, v), (b, v)]
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, [(perm[a], perm[b]) for a, b in edges])


def all_graphs(n: int):
    """Every labelled graph on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(frozenset(range(n)), frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


def stacked_triangulation(n: int, rng: random.Random) -> Graph:
    """Random maximal planar graph: repeatedly put a new vertex inside a face and join its corners."""
    edges = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2), (0, 1, 2)]  # inner and outer face of the starting triangle
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(1, len(faces)) if len(faces) > 1 else 0)
        edges += [(a, v), (b, v), (c, v)]
        faces += [(a, b, v), (b, c, v), (a, c, v)]
    return Graph.from_edges(n, edges)


def random_partially_redundant(n: int, rng: random.Random, tries: int = 200) -> Graph:
    """3-connected planar rigid graph that is neither minimally nor redundantly rigid.

    Edges are dropped at random from a stacked triangulation, keeping 3-connectivity
    and rigidity; one of the qualifying graphs met along the walk is returned.
    """
    from .graphcore import is_k_connected
    from .rigidity import is_minimally_rigid, is_redundantly_rigid, is_rigid

    for _ in range(tries):
        g = stacked_triangulation(n, rng)
        seen = []
        while not is_minimally_rigid(g):
            if not is_redundantly_rigid(g):
                seen.append(g)
            options = [e for e in g.sorted_edges
                       if is_rigid(g.remove_edge(*e)) and is_k_connected(g.remove_edge(*e), 3)]
            if not options:
                break
            g = g.remove_edge(*rng.choice(options))
        if seen:
            return rng.choice(seen)
    raise ValueError(f"no partially redundant graph found on {n} vertices")
