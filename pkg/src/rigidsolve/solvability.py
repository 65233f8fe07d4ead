"""Deciding quadratic/radical solvability of rigid graphs, with certificates.

The decider follows the 2-separation recursion: split at a separator whose pair
is an edge, else at a separation with two rigid sides, else at the separation
whose non-rigid side is smallest, peeling it at a cut vertex into a triangle of
three rigid pieces.  3-connected pieces are solvable exactly when redundantly
rigid.  Verdicts on planar inputs are theorems; on non-planar inputs they rest
on the conjectured extension and are flagged ``conjectural``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graphcore import (Edge, Graph, GraphError, TwoSeparation, components,
                        enumerate_2_separations, is_k_connected,
                        separating_cut_vertices)
from .graphcore import planar as is_planar_graph
from .rigidity import is_globally_rigid, is_rigid, redundancy

GLOBALLY_RIGID = "globallyRigid"
SMALL = "small"
EDGE_SPLIT = "edgeSplit"
RIGID_SPLIT = "rigidSplit"
TRIANGLE_SPLIT = "triangleSplit"
NOT_REDUNDANT = "notRedundantlyRigid"
STUCK = "stuck"

LEAF_KINDS = (GLOBALLY_RIGID, SMALL, NOT_REDUNDANT, STUCK)
SPLIT_KINDS = (EDGE_SPLIT, RIGID_SPLIT, TRIANGLE_SPLIT)


class SolvabilityError(GraphError):
    pass


@dataclass
class CertNode:
    kind: str
    graph: Graph
    verdict: bool
    planar: bool
    separator: Edge | None = None
    cut_vertex: int | None = None
    children: list["CertNode"] = field(default_factory=list)
    witness: dict | None = None

    @property
    def exact(self) -> bool:
        return self.planar and all(c.exact for c in self.children)

    def first_failure(self) -> "CertNode | None":
        if self.kind in (NOT_REDUNDANT, STUCK):
            return self
        for c in self.children:
            if not c.verdict:
                return c.first_failure()
        return None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "verdict": "yes" if self.verdict else "no",
               "planar": self.planar, "graph": self.graph.to_json()}
        if self.separator is not None:
            out["separator"] = list(self.separator)
        if self.cut_vertex is not None:
            out["cutVertex"] = self.cut_vertex
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "CertNode":
        g = doc["graph"]
        return cls(
            kind=doc["kind"],
            graph=Graph.on(g["vertices"], [tuple(e) for e in g["edges"]]),
            verdict=doc["verdict"] == "yes",
            planar=doc.get("planar", False),
            separator=tuple(doc["separator"]) if "separator" in doc else None,
            cut_vertex=doc.get("cutVertex"),
            children=[cls.from_json(c) for c in doc.get("children", [])],
            witness=doc.get("witness"),
        )


@dataclass
class SolvabilityCertificate:
    root: CertNode

    @property
    def verdict(self) -> bool:
        return self.root.verdict

    @property
    def mode(self) -> str:
        return "exact" if self.root.exact else "conjectural"

    @property
    def witness(self) -> dict | None:
        fail = self.root.first_failure()
        return None if fail is None else fail.witness

    def to_json(self) -> dict:
        return {"verdict": "yes" if self.verdict else "no", "mode": self.mode,
                "certificate": self.root.to_json(), "witness": self.witness}

    @classmethod
    def from_json(cls, doc: dict) -> "SolvabilityCertificate":
        return cls(CertNode.from_json(doc["certificate"]))


def _sides(sep: TwoSeparation) -> tuple[Graph, Graph]:
    return sep.h1, sep.h2


def _nonrigid_side(sep: TwoSeparation) -> tuple[Graph, Graph] | None:
    """(non-rigid side, other side) when exactly one side is flexible, else None."""
    h1, h2 = _sides(sep)
    r1, r2 = is_rigid(h1), is_rigid(h2)
    if r1 and r2:
        return None
    return (h2, h1) if r1 else (h1, h2)


def triangle_parts(flex: Graph, other: Graph, u: int, v: int, w: int) -> tuple[Graph, Graph, Graph]:
    """Split the flexible side at cut vertex w into the u-part and the v-part."""
    cu = next(c for c in components(flex, (w,)) if u in c)
    left = flex.induced(cu | {w})
    right = Graph(flex.vertices - cu, flex.edges - left.edges)
    return left, right, other


def admissible_branch(g: Graph, sep: TwoSeparation):
    """Classify a 2-separation of a rigid graph as a decomposition step, or None."""
    u, v = sep.separator
    h1, h2 = _sides(sep)
    if g.has_edge(u, v):
        return EDGE_SPLIT, (h1.add_edge(u, v), h2.add_edge(u, v)), None
    flex = _nonrigid_side(sep)
    if flex is None:
        return RIGID_SPLIT, (h1.add_edge(u, v), h2.add_edge(u, v)), None
    cuts = separating_cut_vertices(flex[0], u, v)
    if cuts:
        w = cuts[0]
        return TRIANGLE_SPLIT, triangle_parts(flex[0], flex[1], u, v, w), w
    return None


def _default_choice(g: Graph, seps: list[TwoSeparation]):
    for sep in seps:
        if g.has_edge(*sep.separator):
            return sep, admissible_branch(g, sep)
    flexible = []
    for sep in seps:
        side = _nonrigid_side(sep)
        if side is None:
            return sep, admissible_branch(g, sep)
        flexible.append((side[0].n, sep.signature(), sep))
    _, _, sep = min(flexible, key=lambda t: t[:2])
    return sep, admissible_branch(g, sep)


def decide_solvability(g: Graph, first_separation: int | None = None
                       ) -> tuple[bool, SolvabilityCertificate]:
    """Decide quadratic (equivalently radical) solvability of a rigid graph.

    ``first_separation`` forces the root step to use that index of
    ``enumerate_2_separations(g)``; it must be an admissible branch.
    """
    if g.n == 0:
        raise SolvabilityError("empty graph")
    if not is_rigid(g):
        raise SolvabilityError("solvability is only defined for rigid graphs")
    if first_separation is not None:
        count = 0 if g.n <= 3 or is_k_connected(g, 3) else len(enumerate_2_separations(g))
        if not 0 <= first_separation < count:
            raise SolvabilityError(f"no 2-separation #{first_separation} (graph has {count})")
    memo: dict = {}
    root = _decide(g, memo, first_separation, None)
    return root.verdict, SolvabilityCertificate(root)


def _decide(g: Graph, memo: dict, forced: int | None, planar: bool | None) -> CertNode:
    if forced is None and g.key() in memo:
        return memo[g.key()]
    if planar is None:
        planar = is_planar_graph(g)
    if g.n <= 3:
        node = CertNode(SMALL, g, True, planar)
    elif is_k_connected(g, 3):
        report = redundancy(g)
        if report.redundantly_rigid:
            node = CertNode(GLOBALLY_RIGID, g, True, planar)
        else:
            node = CertNode(NOT_REDUNDANT, g, False, planar,
                            witness={"kind": NOT_REDUNDANT, "unit": g.to_json(),
                                     "redundancy": report.to_json()})
    else:
        seps = enumerate_2_separations(g)
        if forced is not None:
            sep = seps[forced]
            branch = admissible_branch(g, sep)
            if branch is None:
                raise SolvabilityError(f"2-separation #{forced} is not an admissible first step")
        else:
            sep, branch = _default_choice(g, seps)
        if branch is None:
            flex, _ = _nonrigid_side(sep)
            node = CertNode(STUCK, g, False, planar, separator=sep.separator,
                            witness={"kind": STUCK, "separator": list(sep.separator),
                                     "flexibleSide": flex.to_json()})
        else:
            kind, parts, w = branch
            # pieces of a planar graph stay planar, virtual edge included
            children = [_decide(p, memo, None, True if planar else None) for p in parts]
            node = CertNode(kind, g, all(c.verdict for c in children), planar,
                            separator=sep.separator, cut_vertex=w, children=children)
    if forced is None:
        memo[g.key()] = node
    return node


def admissible_first_separations(g: Graph) -> list[int]:
    if g.n <= 3 or is_k_connected(g, 3):
        return []
    seps = enumerate_2_separations(g)
    return [i for i, s in enumerate(seps) if admissible_branch(g, s) is not None]


@dataclass
class Verification:
    ok: bool
    diagnostic: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class _Reject(Exception):
    pass


def verify_certificate(g: Graph, cert: SolvabilityCertificate) -> Verification:
    """Replay a certificate from scratch; report the first failing check."""
    try:
        if cert.root.graph != g:
            raise _Reject("root graph differs from the input graph")
        if not is_rigid(g):
            raise _Reject("input graph is not rigid")
        _check(cert.root, "root")
    except _Reject as exc:
        return Verification(False, str(exc))
    return Verification(True)


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise _Reject(f"{where}: {msg}")


def _check(node: CertNode, where: str) -> None:
    g = node.graph
    _expect(node.planar == is_planar_graph(g), where, "planarity flag is wrong")
    if node.kind in LEAF_KINDS:
        _expect(not node.children, where, "leaf carries children")
    if node.kind == SMALL:
        _expect(g.n <= 3 and g.is_complete() and node.verdict, where, "small leaf must be K1, K2 or K3 marked yes")
    elif node.kind == GLOBALLY_RIGID:
        _expect(node.verdict, where, "globally rigid leaf must be yes")
        _expect(is_globally_rigid(g), where, "leaf graph is not globally rigid")
    elif node.kind == NOT_REDUNDANT:
        _expect(not node.verdict, where, "failing unit must be no")
        _expect(is_k_connected(g, 3) and is_rigid(g), where, "failing unit is not 3-connected and rigid")
        _expect(not redundancy(g).redundantly_rigid, where, "failing unit is redundantly rigid")
    elif node.kind == STUCK:
        _check_stuck(node, where)
    elif node.kind in SPLIT_KINDS:
        _check_split(node, where)
        _expect(node.verdict == all(c.verdict for c in node.children), where,
                "verdict is not the conjunction of the children")
        for i, c in enumerate(node.children):
            _check(c, f"{where}.{i}")
    else:
        raise _Reject(f"{where}: unknown node kind {node.kind!r}")


def _check_split(node: CertNode, where: str) -> None:
    g = node.graph
    _expect(node.separator is not None, where, "split without separator")
    u, v = node.separator
    kids = [c.graph for c in node.children]
    if node.kind in (EDGE_SPLIT, RIGID_SPLIT):
        _expect(len(kids) == 2, where, "split needs two children")
        g1, g2 = kids
        _expect(g1.vertices & g2.vertices == {u, v}, where, "children do not meet exactly in the separator")
        _expect(min(g1.n, g2.n) >= 3, where, "children need at least three vertices")
        _expect(g1.has_edge(u, v) and g2.has_edge(u, v), where, "both children must contain uv")
        if node.kind == EDGE_SPLIT:
            # operation (a): plain union
            _expect(g.has_edge(u, v), where, "edge split on a non-edge")
            _expect(g1.union(g2) == g, where, "union of children does not reproduce the graph")
        else:
            # operation (c): drop uv from both, both remainders rigid
            _expect(not g.has_edge(u, v), where, "rigid split on an edge")
            r1, r2 = g1.remove_edge(u, v), g2.remove_edge(u, v)
            _expect(r1.union(r2) == g, where, "children minus uv do not reproduce the graph")
            _expect(is_rigid(r1) and is_rigid(r2), where, "children minus uv are not both rigid")
    else:
        w = node.cut_vertex
        _expect(len(kids) == 3 and w is not None, where, "triangle split needs three children and a cut vertex")
        a, b, c = kids
        _expect(len({u, v, w}) == 3, where, "u, v, w must be distinct")
        _expect(a.vertices & c.vertices == {u}, where, "first part must meet the third in u")
        _expect(b.vertices & c.vertices == {v}, where, "second part must meet the third in v")
        _expect(a.vertices & b.vertices == {w}, where, "first and second parts must meet in w")
        _expect(not (a.edges & b.edges or a.edges & c.edges or b.edges & c.edges), where,
                "parts are not edge-disjoint")
        _expect(a.union(b).union(c) == g, where, "parts do not reproduce the graph")
        _expect(all(is_rigid(x) for x in kids), where, "parts are not all rigid")


def _check_stuck(node: CertNode, where: str) -> None:
    g = node.graph
    _expect(not node.verdict, where, "stuck node must be no")
    _expect(g.n > 3 and not is_k_connected(g, 3), where, "stuck node must be 2-separable")
    seps = enumerate_2_separations(g)
    sizes = []
    for sep in seps:
        _expect(not g.has_edge(*sep.separator), where, "a separator pair is an edge")
        side = _nonrigid_side(sep)
        _expect(side is not None, where, "a separation has two rigid sides")
        sizes.append((side[0].n, sep))
    best = min(n for n, _ in sizes)
    recorded = [s for n, s in sizes if n == best and s.separator == node.separator]
    _expect(bool(recorded), where, "recorded separator does not have a minimum flexible side")
    flex, _ = _nonrigid_side(recorded[0])
    _expect(not separating_cut_vertices(flex, *node.separator), where, "flexible side has a cut vertex")
