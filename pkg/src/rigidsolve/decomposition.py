"""Cleavage-unit decomposition of rigid graphs and wheel replacement."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graphcore import (Edge, Graph, GraphError, enumerate_2_separations, is_k_connected,
                        is_planar, norm_edge)
from .rigidity import is_rigid, redundancy


class DecompositionError(GraphError):
    pass


class TheoryViolation(DecompositionError):
    """A step that the underlying theorems guarantee has failed."""


@dataclass(frozen=True)
class Unit:
    graph: Graph
    virtual: frozenset[Edge]

    @property
    def is_triangle(self) -> bool:
        return self.graph.n == 3 and self.graph.m == 3

    @property
    def real_edges(self) -> frozenset[Edge]:
        return self.graph.edges - self.virtual

    def to_json(self) -> dict:
        origin = list(self.graph.sorted_vertices)
        local = {v: i for i, v in enumerate(origin)}
        return {
            "kind": "K3" if self.is_triangle else "3-connected",
            "origin": origin,
            "edges": [{"u": local[u], "v": local[v], "virtual": (u, v) in self.virtual}
                      for u, v in self.graph.sorted_edges],
        }


@dataclass
class DecompositionNode:
    graph: Graph
    virtual: frozenset[Edge]
    separator: Edge | None = None
    children: list["DecompositionNode"] = field(default_factory=list)
    unit_index: int | None = None

    def to_json(self) -> dict:
        if self.unit_index is not None:
            return {"unit": self.unit_index}
        return {"separator": list(self.separator), "children": [c.to_json() for c in self.children]}


@dataclass
class CleavageDecomposition:
    graph: Graph
    units: list[Unit]
    tree: DecompositionNode

    def unit_multiset(self) -> list[tuple]:
        return sorted((u.graph.sorted_vertices, u.graph.sorted_edges) for u in self.units)

    def reassemble(self) -> Graph:
        edges = frozenset().union(*(u.real_edges for u in self.units))
        verts = frozenset().union(*(u.graph.vertices for u in self.units))
        return Graph(verts, edges)

    def to_json(self) -> dict:
        return {"units": [u.to_json() for u in self.units], "tree": self.tree.to_json()}


def cleavage_units(g: Graph, first_split: int | None = None) -> CleavageDecomposition:
    """Split recursively at 2-separations, adding the separator edge to both sides.

    ``first_split`` forces which 2-separation (index into
    ``enumerate_2_separations``) is used at the root; later splits take the first.
    """
    if g.n < 3:
        raise DecompositionError("cleavage units need at least three vertices")
    if not is_rigid(g):
        raise DecompositionError("cleavage units are defined for rigid graphs only")
    if first_split is not None and is_k_connected(g, 3):
        raise DecompositionError("a 3-connected graph has no 2-separation to force")
    units: list[Unit] = []

    def split(node: DecompositionNode, choice: int | None) -> None:
        h = node.graph
        if (h.n == 3 and h.is_complete()) or is_k_connected(h, 3):
            node.unit_index = len(units)
            units.append(Unit(h, node.virtual))
            return
        seps = enumerate_2_separations(h)
        if not 0 <= (choice or 0) < len(seps):
            raise DecompositionError(f"no 2-separation #{choice} (graph has {len(seps)})")
        sep = seps[choice or 0]
        u, v = sep.separator
        node.separator = (u, v)
        uv_virtual = (u, v) in node.virtual or not h.has_edge(u, v)
        g1 = sep.h1.add_edge(u, v)
        g2 = sep.h2.add_edge(u, v)
        virt1 = (node.virtual & g1.edges) | ({(u, v)} if uv_virtual else set())
        virt2 = (node.virtual & g2.edges) | {(u, v)}
        for child_graph, virt in ((g1, virt1), (g2, virt2)):
            child = DecompositionNode(child_graph, frozenset(virt))
            node.children.append(child)
            split(child, None)

    root = DecompositionNode(g, frozenset())
    split(root, first_split)
    return CleavageDecomposition(g, units, root)


def excess(g: Graph) -> int:
    return g.m - 2 * g.n + 3


@dataclass
class WheelReplacement:
    component: frozenset[Edge]
    rim_vertices: tuple[int, ...]
    hub: int
    removed_rim_edge: Edge
    result: Graph
    planar_mode: bool
    excess_before: int

    def to_json(self) -> dict:
        return {
            "component": [list(e) for e in sorted(self.component)],
            "rimVertices": list(self.rim_vertices),
            "hub": self.hub,
            "removedRimEdge": list(self.removed_rim_edge),
            "planarMode": self.planar_mode,
            "result": self.result.to_json(),
            "excessBefore": self.excess_before,
            "excessAfter": excess(self.result),
        }


def wheel_replace(g: Graph, planar_mode: bool = False) -> WheelReplacement:
    """Swap a non-trivial redundantly rigid component for a wheel minus one rim edge."""
    if not is_k_connected(g, 3):
        raise DecompositionError("wheel_replace needs a 3-connected graph")
    report = redundancy(g)
    if not report.rigid:
        raise DecompositionError("wheel_replace needs a rigid graph")
    if planar_mode and not is_planar(g)[0]:
        raise DecompositionError("planar mode requested for a non-planar graph")
    if not report.components:
        raise DecompositionError("no non-trivial redundantly rigid component (graph is minimally rigid)")

    chosen = None
    for comp in report.components:
        v1 = {x for e in comp for x in e}
        rim = {x for x in v1 if any(y not in v1 or norm_edge(x, y) not in comp for y in g.adj[x])}
        if len(rim) >= 3:
            chosen = (comp, v1, rim)
            break
    if chosen is None:
        raise DecompositionError("no redundantly rigid component with at least three attachment vertices")
    comp, v1, rim = chosen

    h0 = Graph(g.vertices - (v1 - rim), g.edges - comp).remove_vertices(v1 - rim)
    hub = max(g.vertices) + 1
    for x in sorted(rim):
        if h0.degree(x) + 3 < 4:
            raise DecompositionError(f"rim vertex {x} would have degree < 4 in H0 plus the wheel")

    order = _rim_order(h0, rim, hub) if planar_mode else tuple(sorted(rim))
    spokes = [(hub, x) for x in order]
    rim_edges = [norm_edge(order[i], order[(i + 1) % len(order)]) for i in range(len(order))]
    if set(rim_edges) & h0.edges:
        raise TheoryViolation("wheel rim edge collides with an edge outside the component")
    wheel_graph = Graph.on(set(order) | {hub}, spokes + rim_edges)
    full = h0.union(wheel_graph)

    for e in sorted(set(rim_edges)):
        candidate = full.remove_edge(*e)
        if is_k_connected(candidate, 3):
            break
    else:
        raise TheoryViolation("no rim edge leaves a 3-connected graph")

    if not is_rigid(candidate):
        raise TheoryViolation("replacement result is not rigid")
    if excess(candidate) >= excess(g):
        raise TheoryViolation("replacement did not decrease the excess")
    if planar_mode and not is_planar(candidate)[0]:
        raise TheoryViolation("planar-mode replacement produced a non-planar graph")
    return WheelReplacement(comp, order, hub, e, candidate, planar_mode, excess(g))


def _rim_order(h0: Graph, rim: set[int], hub: int) -> tuple[int, ...]:
    # the attachment vertices share a face; a star from a new vertex in that
    # face exposes their cyclic order as the star centre's rotation
    star = h0.union(Graph.on(rim | {hub}, [(hub, x) for x in rim]))
    ok, rot = is_planar(star)
    if not ok:
        raise TheoryViolation("attachment vertices do not lie on a common face")
    around = rot.order[hub]
    i = around.index(min(around))
    return tuple(around[i:] + around[:i])
