"""Graph representation, I/O, connectivity, planarity and 2-separations."""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import networkx as nx

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for structurally invalid graphs or violated preconditions."""


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite simple graph on an explicit vertex set.

    Top-level graphs live on ``0..n-1``; pieces produced by decomposition keep
    the labels of the graph they came from, so their vertex sets can be sparse.
    """

    vertices: frozenset[int]
    edges: frozenset[Edge]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if u > v:
                raise GraphError(f"edge {(u, v)} is not normalized")
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge {(u, v)} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        es = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"endpoint of {(u, v)} out of range for n={n}")
            e = norm_edge(u, v)
            if e in es:
                raise GraphError(f"duplicate edge {e}")
            es.add(e)
        return cls(frozenset(range(n)), frozenset(es))

    @classmethod
    def on(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(frozenset(vertices), frozenset(norm_edge(u, v) for u, v in edges))

    @classmethod
    def spanned_by(cls, edges: Iterable[tuple[int, int]]) -> "Graph":
        es = frozenset(norm_edge(u, v) for u, v in edges)
        return cls(frozenset(x for e in es for x in e), es)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.vertices | {u, v}, self.edges | {norm_edge(u, v)})

    def remove_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.vertices, self.edges - {norm_edge(u, v)})

    def remove_vertices(self, vs: Iterable[int]) -> "Graph":
        drop = set(vs)
        return Graph(
            self.vertices - drop,
            frozenset(e for e in self.edges if e[0] not in drop and e[1] not in drop),
        )

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = frozenset(vs)
        return Graph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def union(self, other: "Graph") -> "Graph":
        return Graph(self.vertices | other.vertices, self.edges | other.edges)

    def relabel(self, mapping: dict[int, int]) -> "Graph":
        return Graph.on((mapping[v] for v in self.vertices),
                        ((mapping[u], mapping[v]) for u, v in self.edges))

    def compact(self) -> tuple["Graph", dict[int, int]]:
        """Relabel to ``0..n-1`` preserving vertex order; returns the graph and old->new map."""
        mapping = {v: i for i, v in enumerate(self.sorted_vertices)}
        return self.relabel(mapping), mapping

    def key(self) -> tuple[frozenset[int], frozenset[Edge]]:
        return (self.vertices, self.edges)

    def to_json(self) -> dict:
        return {"vertices": list(self.sorted_vertices), "edges": [list(e) for e in self.sorted_edges]}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.sorted_edges)})"


@dataclass(frozen=True)
class TwoSeparation:
    separator: Edge
    side1: frozenset[Edge]
    side2: frozenset[Edge]
    vertex_side1: frozenset[int]
    vertex_side2: frozenset[int]

    @property
    def h1(self) -> Graph:
        return Graph(self.vertex_side1, self.side1)

    @property
    def h2(self) -> Graph:
        return Graph(self.vertex_side2, self.side2)

    def signature(self) -> tuple:
        return (self.separator, tuple(sorted(self.vertex_side1 - set(self.separator))))

    def to_json(self) -> dict:
        return {
            "separator": list(self.separator),
            "side1": [list(e) for e in sorted(self.side1)],
            "side2": [list(e) for e in sorted(self.side2)],
        }


@dataclass(frozen=True)
class RotationSystem:
    """Clockwise cyclic order of neighbours around each vertex."""

    order: dict[int, tuple[int, ...]]

    def faces(self) -> list[list[Edge]]:
        seen: set[tuple[int, int]] = set()
        faces = []
        for u, nbrs in self.order.items():
            for v in nbrs:
                if (u, v) in seen:
                    continue
                face = []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    face.append((a, b))
                    around = self.order[b]
                    i = around.index(a)
                    a, b = b, around[(i + 1) % len(around)]
                faces.append(face)
        return faces

    def satisfies_euler(self, graph: Graph) -> bool:
        """Euler check n - m + f = 2 on every connected component."""
        faces = self.faces()
        for comp in components(graph):
            n_c = len(comp)
            m_c = sum(1 for u, _ in graph.edges if u in comp)
            f_c = sum(1 for f in faces if f[0][0] in comp) or 1
            if n_c - m_c + f_c != 2:
                return False
        return True


def parse_graph(text: str, fmt: str | None = None) -> Graph:
    """Parse the edge-list (``n m`` header then ``u v`` lines) or JSON format."""
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "edgelist"
    if fmt == "json":
        return _parse_json(text)
    if fmt != "edgelist":
        raise GraphFormatError(f"unknown format {fmt!r}")

    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty input", 1)
    lineno, header = lines[0]
    n, m = _int_pair(header, lineno)
    if n < 0 or m < 0:
        raise GraphFormatError("negative count in header", lineno)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", where)
    edges: set[Edge] = set()
    for lineno, ln in body:
        u, v = _int_pair(ln, lineno)
        _check_edge(u, v, n, edges, lineno)
        edges.add(norm_edge(u, v))
    return Graph(frozenset(range(n)), frozenset(edges))


def _parse_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphFormatError('JSON graph needs keys "n" and "edges"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphFormatError('"n" must be a non-negative integer')
    edges: set[Edge] = set()
    for idx, pair in enumerate(doc["edges"]):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise GraphFormatError(f"edge #{idx} is not a pair of integers")
        _check_edge(pair[0], pair[1], n, edges, None, idx)
        edges.add(norm_edge(*pair))
    return Graph(frozenset(range(n)), frozenset(edges))


def _int_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(f"expected two integers, got {line!r}", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"expected two integers, got {line!r}", lineno) from None


def _check_edge(u, v, n, seen, lineno, idx=None):
    where = "" if idx is None else f"edge #{idx}: "
    if u == v:
        raise GraphFormatError(f"{where}loop at vertex {u}", lineno)
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"{where}endpoint out of range in {(u, v)} (n={n})", lineno)
    if norm_edge(u, v) in seen:
        raise GraphFormatError(f"{where}duplicate edge {norm_edge(u, v)}", lineno)


def serialize_graph(g: Graph, fmt: str = "edgelist") -> str:
    if g.vertices != frozenset(range(g.n)):
        raise GraphError("only graphs on 0..n-1 can be serialized; call compact() first")
    if fmt == "json":
        return json.dumps({"n": g.n, "edges": [list(e) for e in g.sorted_edges]})
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges]
    return "\n".join(lines) + "\n"


def components(g: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Connected components of ``g`` minus ``removed``, ordered by smallest vertex."""
    gone = set(removed)
    seen: set[int] = set()
    comps = []
    for s in g.sorted_vertices:
        if s in gone or s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in gone and y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


def is_k_connected(g: Graph, k: int) -> bool:
    if g.n < k + 1:
        return False
    for size in range(k):
        for cut in itertools.combinations(g.sorted_vertices, size):
            if len(components(g, cut)) > 1:
                return False
    return True


def connectivity(g: Graph, cap: int = 3) -> int:
    """Largest k <= cap with ``g`` k-connected (0 if disconnected or trivial)."""
    k = 0
    while k < cap and is_k_connected(g, k + 1):
        k += 1
    return k


def two_separators(g: Graph) -> Iterator[tuple[Edge, list[frozenset[int]]]]:
    for u, v in itertools.combinations(g.sorted_vertices, 2):
        comps = components(g, (u, v))
        if len(comps) >= 2:
            yield (u, v), comps


def enumerate_2_separations(g: Graph) -> list[TwoSeparation]:
    """All 2-separations of a 2-connected graph, grouped by separator.

    Each component of ``g - {u, v}`` lands wholly on one side; the side holding
    the component with the smallest vertex is side1, and so is the edge uv.
    """
    if not is_k_connected(g, 2):
        raise GraphError("enumerate_2_separations needs a 2-connected graph")
    out = []
    for (u, v), comps in two_separators(g):
        first, rest = comps[0], comps[1:]
        for mask in range(2 ** len(rest) - 1):
            chosen = [first] + [c for i, c in enumerate(rest) if mask >> i & 1]
            inner1 = frozenset().union(*chosen)
            vs1 = inner1 | {u, v}
            vs2 = (g.vertices - inner1)
            side1 = frozenset(e for e in g.edges if e[0] in inner1 or e[1] in inner1)
            if g.has_edge(u, v):
                side1 |= {(u, v)}
            out.append(TwoSeparation((u, v), side1, g.edges - side1, vs1, vs2))
    out.sort(key=TwoSeparation.signature)
    return out


def is_planar(g: Graph) -> tuple[bool, RotationSystem | None]:
    ok, emb = nx.check_planarity(to_networkx(g))
    if not ok:
        return False, None
    return True, RotationSystem({v: tuple(emb.neighbors_cw_order(v)) for v in g.sorted_vertices})


@lru_cache(maxsize=1 << 16)
def planar(g: Graph) -> bool:
    """Planarity as a boolean, with the edge-count prescreen."""
    if g.n <= 4:
        return True
    if g.m > 3 * g.n - 6:
        return False
    return nx.check_planarity(to_networkx(g))[0]


def separating_cut_vertices(h: Graph, u: int, v: int) -> list[int]:
    """Vertices w (not u, v) whose removal separates u from v, in order along a u-v path."""
    if u not in h.vertices or v not in h.vertices:
        raise GraphError(f"{u} or {v} not in graph")
    path = shortest_path(h, u, v)
    if path is None:
        raise GraphError(f"{u} and {v} are not connected")
    out = []
    for w in path[1:-1]:
        if not any(v in c for c in components(h, (w,)) if u in c):
            out.append(w)
    return out


def shortest_path(g: Graph, s: int, t: int) -> list[int] | None:
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            path = [t]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in sorted(g.adj[x]):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.sorted_vertices)
    nxg.add_edges_from(g.sorted_edges)
    return nxg
