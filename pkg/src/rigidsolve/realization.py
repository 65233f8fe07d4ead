"""Placements, squared edge lengths and realizing frameworks from their lengths."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .graphcore import Edge, Graph, GraphError, enumerate_2_separations, is_k_connected, norm_edge
from .rigidity import PRIME, generic_rank, is_rigid, rank_mod_p, rigidity_rows


class RealizationError(GraphError):
    pass


class NoRealSolution(RealizationError):
    """Two circles that must meet do not intersect in the real plane."""


class DegenerateStep(RealizationError):
    pass


class ConvergenceError(RealizationError):
    pass


NEWTON_STARTS = 40


@dataclass(frozen=True)
class Placement:
    """Vertex coordinates.

    In exact mode coordinates are Fractions; when ``radicand`` is set the true
    coordinates are the stored ones times ``sqrt(radicand)``.
    """

    coords: dict[int, tuple]
    exact: bool = False
    radicand: Fraction | None = None

    def __getitem__(self, v: int) -> tuple:
        return self.coords[v]

    def point(self, v: int) -> tuple[float, float]:
        x, y = self.coords[v]
        if self.radicand is not None:
            s = math.sqrt(self.radicand)
            return float(x) * s, float(y) * s
        return float(x), float(y)

    def as_float(self) -> "Placement":
        return Placement({v: self.point(v) for v in self.coords})

    def array(self, order: Sequence[int]) -> np.ndarray:
        return np.array([self.point(v) for v in order], dtype=float)

    def to_json(self) -> dict:
        return {"coords": [list(self.point(v)) for v in sorted(self.coords)]}


@dataclass(frozen=True)
class EdgeLengths:
    """Squared edge lengths keyed by normalized edge."""

    values: dict[Edge, object]

    def __getitem__(self, e: Edge):
        return self.values[norm_edge(*e)]

    def scaled(self, factor) -> "EdgeLengths":
        return EdgeLengths({e: d * factor for e, d in self.values.items()})

    def restrict(self, g: Graph) -> "EdgeLengths":
        return EdgeLengths({e: self.values[e] for e in g.edges})

    def to_json(self) -> dict:
        edges = sorted(self.values)
        return {"edges": [list(e) for e in edges], "d": [float(self.values[e]) for e in edges]}

    @classmethod
    def from_json(cls, doc: dict) -> "EdgeLengths":
        if len(doc["edges"]) != len(doc["d"]):
            raise RealizationError("lengths file: edges and d differ in length")
        return cls({norm_edge(*e): float(x) for e, x in zip(doc["edges"], doc["d"])})


@dataclass(frozen=True)
class ConstructionOrder:
    base_edge: Edge
    steps: tuple[tuple[int, int, int], ...]

    def replay(self) -> Graph:
        edges = [self.base_edge]
        verts = set(self.base_edge)
        for w, a, b in self.steps:
            if w in verts or a not in verts or b not in verts:
                raise RealizationError(f"step {(w, a, b)} does not extend the construction")
            verts.add(w)
            edges += [(a, w), (b, w)]
        return Graph.on(verts, edges)

    def to_json(self) -> dict:
        return {"baseEdge": list(self.base_edge), "steps": [list(s) for s in self.steps]}


@dataclass(frozen=True)
class BranchVector:
    """One sign for the base coordinate, then one per construction step."""

    signs: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "BranchVector":
        table = {"+": 1, "0": 1, "-": -1, "1": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as exc:
            raise RealizationError(f"bad branch character {exc.args[0]!r}; use +/- or 0/1") from None

    @classmethod
    def positive(cls, steps: int) -> "BranchVector":
        return cls((1,) * (steps + 1))


def _random_fraction(rng: random.Random) -> Fraction:
    num = rng.getrandbits(64) | (1 << 63)
    den = rng.getrandbits(64) | (1 << 63)
    return Fraction(num if rng.random() < 0.5 else -num, den)


def random_generic_placement(g: Graph, seed: int) -> Placement:
    """Random rational placement whose rigidity matrix attains the generic rank."""
    rng = random.Random(seed)
    target = generic_rank(g)
    while True:
        coords = {v: (_random_fraction(rng), _random_fraction(rng)) for v in g.sorted_vertices}
        values = [c for xy in coords.values() for c in xy]
        if len(set(values)) != len(values):
            continue
        if any(c.denominator % PRIME == 0 for c in values):
            continue
        modp = {v: tuple(c.numerator * pow(c.denominator, -1, PRIME) for c in xy)
                for v, xy in coords.items()}
        # rank mod p never exceeds the rank over Q, which never exceeds the generic rank
        if g.m == 0 or rank_mod_p(rigidity_rows(g, modp)) == target:
            return Placement(coords, exact=True)


def measure_lengths(g: Graph, p: Placement) -> EdgeLengths:
    out = {}
    for u, v in g.sorted_edges:
        if u not in p.coords or v not in p.coords:
            raise RealizationError(f"placement has no coordinates for edge {(u, v)}")
        (x1, y1), (x2, y2) = p.coords[u], p.coords[v]
        d = (x1 - x2) ** 2 + (y1 - y2) ** 2
        if p.radicand is not None:
            d *= p.radicand
        out[(u, v)] = d
    return EdgeLengths(out)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def standard_position(p: Placement, v1: int, v2: int) -> Placement:
    """Congruent placement with v1 at the origin and v2 on the positive y-axis."""
    ox, oy = p.coords[v1]
    shifted = {v: (x - ox, y - oy) for v, (x, y) in p.coords.items()}
    x, y = shifted[v2]
    norm2 = x * x + y * y
    if norm2 == 0:
        raise DegenerateStep(f"vertices {v1} and {v2} coincide")

    def rotate(scale):
        return {v: ((y * a - x * b) * scale, (x * a + y * b) * scale) for v, (a, b) in shifted.items()}

    if not p.exact:
        return Placement(rotate(1 / math.sqrt(norm2)))
    root = _rational_sqrt(Fraction(norm2))
    if root is not None:
        return Placement(rotate(1 / root), exact=True, radicand=p.radicand)
    if p.radicand is None:
        # coordinates become rational multiples of sqrt(norm2)
        return Placement(rotate(1 / Fraction(norm2)), exact=True, radicand=Fraction(norm2))
    return standard_position(p.as_float(), v1, v2)


def sign_flips(q: Placement) -> list[Placement]:
    """The four placements (x, y), (-x, y), (x, -y), (-x, -y)."""
    return [Placement({v: (sx * x, sy * y) for v, (x, y) in q.coords.items()}, q.exact, q.radicand)
            for sx, sy in ((1, 1), (-1, 1), (1, -1), (-1, -1))]


def henneberg_order(g: Graph) -> ConstructionOrder | None:
    """Peel lowest-indexed degree-2 vertices down to a single edge; None if stuck."""
    if g.n < 2:
        return None
    h = g
    peeled = []
    while h.n > 2:
        w = next((v for v in h.sorted_vertices if h.degree(v) == 2), None)
        if w is None:
            return None
        a, b = sorted(h.adj[w])
        peeled.append((w, a, b))
        h = h.remove_vertices([w])
    if h.m != 1:
        return None
    return ConstructionOrder(h.sorted_edges[0], tuple(reversed(peeled)))


def circle_intersection(pa, pb, da: float, db: float, sign: int) -> tuple[float, float]:
    """Point at squared distance da from pa and db from pb, right of pa->pb for sign=+1."""
    ex, ey = pb[0] - pa[0], pb[1] - pa[1]
    dd = ex * ex + ey * ey
    if dd <= 1e-300:
        raise DegenerateStep("construction step has coincident neighbours")
    dist = math.sqrt(dd)
    along = (da - db + dd) / (2 * dist)
    h2 = da - along * along
    if h2 < 0:
        if h2 < -1e-12 * max(da, dd):
            raise NoRealSolution(f"negative discriminant {h2:.3g}")
        h2 = 0.0
    h = sign * math.sqrt(h2)
    ux, uy = ex / dist, ey / dist
    return pa[0] + along * ux + h * uy, pa[1] + along * uy - h * ux


def quadratic_realize(g: Graph, d: EdgeLengths, order: ConstructionOrder,
                      branches: BranchVector | None = None) -> Placement:
    """Square-root-only realization along a degree-2 construction order."""
    if order.replay() != g:
        raise RealizationError("construction order does not rebuild the graph")
    if branches is None:
        branches = BranchVector.positive(len(order.steps))
    if len(branches.signs) != len(order.steps) + 1:
        raise RealizationError("branch vector length must be steps + 1")
    v1, v2 = order.base_edge
    base = float(d[v1, v2])
    if base <= 0:
        raise DegenerateStep("base edge has non-positive squared length")
    pos = {v1: (0.0, 0.0), v2: (0.0, branches.signs[0] * math.sqrt(base))}
    for (w, a, b), sign in zip(order.steps, branches.signs[1:]):
        pos[w] = circle_intersection(pos[a], pos[b], float(d[a, w]), float(d[b, w]), sign)
    return Placement(pos)


def branches_of(order: ConstructionOrder, p: Placement) -> BranchVector:
    """The branch vector under which ``quadratic_realize`` reproduces ``p`` up to congruence."""
    v1, v2 = order.base_edge
    q = standard_position(p.as_float() if p.exact else p, v1, v2)
    signs = [1]
    for w, a, b in order.steps:
        (ax, ay), (bx, by), (wx, wy) = q.coords[a], q.coords[b], q.coords[w]
        cross = (bx - ax) * (wy - ay) - (by - ay) * (wx - ax)
        signs.append(1 if cross < 0 else -1)
    return BranchVector(tuple(signs))


def length_jacobian(g: Graph, p: Placement) -> np.ndarray:
    """Jacobian of the squared-length map: twice the rigidity matrix."""
    coords = {v: p.point(v) for v in g.vertices}
    return 2.0 * np.array(rigidity_rows(g, coords), dtype=float).reshape(g.m, 2 * g.n)


def max_relative_residual(g: Graph, d: EdgeLengths, p: Placement) -> float:
    if g.m == 0:
        return 0.0
    got = measure_lengths(g, p.as_float() if p.exact else p)
    scale = max(float(abs(x)) for x in d.values.values()) or 1.0
    return max(abs(float(got[e]) - float(d[e])) / max(float(abs(d[e])), 1e-12 * scale)
               for e in g.edges)


def newton_refine(g: Graph, d: EdgeLengths, p0: Placement, *, tol: float = 1e-10,
                  max_iter: int = 100, restarts: int = 3, seed: int = 0) -> Placement:
    """Gauss-Newton on the squared-length residual with the first edge pinned."""
    if g.m == 0 or max_relative_residual(g, d, p0) < tol:
        return p0
    v1, v2 = g.sorted_edges[0]
    order = list(g.sorted_vertices)
    col = {v: i for i, v in enumerate(order)}
    free = [c for c in range(2 * g.n) if c not in (2 * col[v1], 2 * col[v1] + 1, 2 * col[v2])]
    target = np.array([float(d[e]) for e in g.sorted_edges])
    weight = 1.0 / np.maximum(np.abs(target), 1e-12 * max(np.abs(target).max(), 1.0))
    rng = np.random.default_rng(seed)
    start = standard_position(p0.as_float(), v1, v2).array(order).ravel()
    scale = math.sqrt(max(target.mean(), 1e-300))

    def residual(x):
        pts = x.reshape(-1, 2)
        r = np.array([((pts[col[u]] - pts[col[v]]) ** 2).sum() for u, v in g.sorted_edges])
        return r - target

    def jac(x):
        pts = x.reshape(-1, 2)
        rows = rigidity_rows(g, {v: pts[col[v]] for v in order})
        return 2.0 * np.array(rows, dtype=float)[:, free]

    best = math.inf
    for attempt in range(restarts + 1):
        x = start if attempt == 0 else start + rng.normal(scale=0.1 * scale * attempt, size=start.shape)
        x = x.copy()
        x[[2 * col[v1], 2 * col[v1] + 1, 2 * col[v2]]] = 0.0
        r = residual(x)
        for _ in range(max_iter):
            rel = float(np.max(np.abs(r) * weight))
            best = min(best, rel)
            if rel < tol:
                pts = x.reshape(-1, 2)
                return Placement({v: (float(pts[col[v]][0]), float(pts[col[v]][1])) for v in order})
            # unweighted steps have a much wider basin than relative ones
            step = np.linalg.lstsq(jac(x), -r, rcond=None)[0]
            cost = np.sum(r ** 2)
            alpha = 1.0
            for _ in range(40):
                trial = x.copy()
                trial[free] += alpha * step
                r_trial = residual(trial)
                if np.sum(r_trial ** 2) < cost:
                    x, r = trial, r_trial
                    break
                alpha /= 2
            else:
                break
    raise ConvergenceError(f"Gauss-Newton did not converge (best relative residual {best:.3g})")


def _congruence_onto(src: dict, dst: dict, u: int, v: int, reflect: bool = False) -> dict:
    """Move ``src`` rigidly so that its u, v land on ``dst``'s u, v."""
    su, sv = np.array(src[u]), np.array(src[v])
    du, dv = np.array(dst[u]), np.array(dst[v])
    a = math.atan2(*(sv - su)[::-1])
    b = math.atan2(*(dv - du)[::-1])
    ref = np.array([[1.0, 0.0], [0.0, -1.0]]) if reflect else np.eye(2)
    if reflect:
        a = -a
    c, s = math.cos(b - a), math.sin(b - a)
    rot = np.array([[c, -s], [s, c]]) @ ref
    return {w: tuple(rot @ (np.array(xy) - su) + du) for w, xy in src.items()}


def spanning_construction(h: Graph) -> tuple[ConstructionOrder, list[Edge]] | None:
    """A degree-2 construction of a spanning subgraph, plus the edges it leaves out.

    Vertices are added greedily, each attached to its two lowest-indexed placed
    neighbours; once some vertex has two placed neighbours it keeps them, so the
    greedy choice only depends on the base edge.
    """
    for a, b in h.sorted_edges:
        placed = {a, b}
        steps = []
        while len(placed) < h.n:
            w = next((x for x in h.sorted_vertices
                      if x not in placed and len(h.adj[x] & placed) >= 2), None)
            if w is None:
                break
            n1, n2 = sorted(h.adj[w] & placed)[:2]
            steps.append((w, n1, n2))
            placed.add(w)
        if len(placed) == h.n:
            order = ConstructionOrder((a, b), tuple(steps))
            used = order.replay().edges
            return order, sorted(h.edges - used)
    return None


def _construct_all(h: Graph, d: EdgeLengths, order: ConstructionOrder, extra: list[Edge],
                   budget: "_Budget", tol: float = 1e-6) -> Iterator[dict]:
    """Depth-first over branch signs, pruning as soon as an extra edge is violated."""
    v1, v2 = order.base_edge
    pos = {v1: (0.0, 0.0), v2: (0.0, math.sqrt(float(d[v1, v2])))}
    checks: dict[int, list[Edge]] = {}
    seen = {v1, v2}
    for w, _, _ in order.steps:
        seen.add(w)
        checks[w] = [e for e in extra if w in e and e[0] in seen and e[1] in seen]

    def fits(w: int) -> bool:
        for e in checks[w]:
            (x1, y1), (x2, y2) = pos[e[0]], pos[e[1]]
            want = float(d[e])
            if abs((x1 - x2) ** 2 + (y1 - y2) ** 2 - want) > tol * max(want, 1e-300):
                return False
        return True

    def place(i: int) -> Iterator[dict]:
        if i == len(order.steps):
            yield dict(pos)
            return
        w, a, b = order.steps[i]
        for sign in (1, -1):
            budget.spend()
            try:
                pos[w] = circle_intersection(pos[a], pos[b], float(d[a, w]), float(d[b, w]), sign)
            except NoRealSolution:
                continue
            if fits(w):
                yield from place(i + 1)
        pos.pop(w, None)

    yield from place(0)


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise RealizationError("no consistent real realization found within the search budget")


def _candidates(h: Graph, d: EdgeLengths, rng: random.Random, budget: _Budget,
                reflect: bool) -> Iterator[dict]:
    """Lazily yield coordinate maps of ``h`` reproducing the lengths ``d``."""
    budget.spend()
    if h.n == 1:
        yield {h.sorted_vertices[0]: (0.0, 0.0)}
        return
    order = henneberg_order(h)
    if order is not None:
        yield from _construct_all(h, d, order, [], budget)
        return
    if not is_k_connected(h, 3):
        seps = enumerate_2_separations(h)
        sep = next((s for s in seps if h.has_edge(*s.separator)), None)
        if sep is not None:
            u, v = sep.separator
            first, second = sep.h1, sep.h2.add_edge(u, v)
            for pa in _candidates(first, d.restrict(first), rng, budget, reflect):
                for pb in _candidates(second, d.restrict(second), rng, budget, reflect):
                    yield {**_congruence_onto(pb, pa, u, v, reflect), **pa}
            return
        sep = seps[0]
        u, v = sep.separator
        rigid_side, other = (sep.h2, sep.h1) if is_rigid(sep.h2) else (sep.h1, sep.h2)
        other = other.add_edge(u, v)
        for pa in _candidates(rigid_side, d.restrict(rigid_side), rng, budget, reflect):
            duv = (pa[u][0] - pa[v][0]) ** 2 + (pa[u][1] - pa[v][1]) ** 2
            d_other = EdgeLengths({**{e: d[e] for e in other.edges if e != (u, v)}, (u, v): duv})
            for pb in _candidates(other, d_other, rng, budget, reflect):
                yield {**_congruence_onto(pb, pa, u, v, reflect), **pa}
        return
    spanning = spanning_construction(h)
    if spanning is not None:
        yield from _construct_all(h, d, *spanning, budget)
        return
    yield from (p.coords for p in _newton_starts(h, d, rng, budget.spend))


def _newton_starts(h: Graph, d: EdgeLengths, rng: random.Random, tick=lambda: None,
                   starts: int = NEWTON_STARTS) -> Iterator[Placement]:
    scale = math.sqrt(max(float(np.mean([float(x) for x in d.values.values()])), 1e-300))
    for _ in range(starts):
        tick()
        start = Placement({v: (rng.gauss(0, scale), rng.gauss(0, scale)) for v in h.sorted_vertices})
        try:
            yield newton_refine(h, d, start, restarts=0, seed=rng.randrange(2**32))
        except ConvergenceError:
            continue


def newton_realize(g: Graph, d: EdgeLengths, seed: int = 0, starts: int = NEWTON_STARTS) -> Placement:
    """Gauss-Newton from seeded random starts until one converges."""
    if g.m == 0:
        return Placement({v: (0.0, 0.0) for v in g.sorted_vertices})
    for p in _newton_starts(g, d, random.Random(seed), starts=starts):
        return p
    raise ConvergenceError(f"Gauss-Newton failed from {starts} random starts")


def glue_realize(g: Graph, d: EdgeLengths, seed: int = 0, *, reflect: bool = False,
                 budget: int = 5000) -> Placement:
    """Realize a rigid graph from squared lengths by solving across 2-separations.

    The rigid side of each split is solved first; the distance it fixes between
    the separator pair becomes a virtual edge length for the other side.  Leaves
    with a degree-2 construction are solved by circle intersections, other
    leaves by Gauss-Newton from seeded random starts.
    """
    if not is_rigid(g):
        raise RealizationError("glue_realize needs a rigid graph")
    if set(d.values) != set(g.edges):
        raise RealizationError("lengths must be given for exactly the edges of the graph")
    rng = random.Random(seed)
    for coords in _candidates(g, d, rng, _Budget(budget), reflect):
        p = Placement(coords)
        if max_relative_residual(g, d, p) < 1e-7:
            return p
        try:
            return newton_refine(g, d, p, tol=1e-10, restarts=0)
        except ConvergenceError:
            continue
    raise RealizationError("lengths admit no real realization reachable by the solver")
