"""Command-line entry point.  Every subcommand prints one JSON document."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .decomposition import cleavage_units, excess, wheel_replace
from .graphcore import Graph, GraphError, connectivity, is_planar, parse_graph
from .realization import (BranchVector, EdgeLengths, RealizationError, glue_realize,
                          henneberg_order, max_relative_residual, measure_lengths, newton_realize,
                          quadratic_realize, random_generic_placement)
from .rigidity import generic_rank, is_globally_rigid, is_minimally_rigid, redundancy
from .solvability import decide_solvability


def analyze(g: Graph) -> dict:
    report = redundancy(g)
    return {
        "n": g.n,
        "m": g.m,
        "rank": report.rank,
        "rigid": report.rigid,
        "minimallyRigid": is_minimally_rigid(g),
        "redundantlyRigid": report.redundantly_rigid,
        "globallyRigid": is_globally_rigid(g),
        "planar": is_planar(g)[0],
        "connectivity": connectivity(g),
    }


def _cmd_analyze(g: Graph, args) -> dict:
    return analyze(g)


def _cmd_decide(g: Graph, args) -> dict:
    _, cert = decide_solvability(g, args.first_separation)
    return cert.to_json()


def _cmd_decompose(g: Graph, args) -> dict:
    return cleavage_units(g, args.first_separation).to_json()


def _cmd_reduce(g: Graph, args) -> dict:
    mode = is_planar(g)[0]
    if not args.iterate:
        return wheel_replace(g, planar_mode=mode).to_json()
    steps = []
    while not is_minimally_rigid(g):
        step = wheel_replace(g, planar_mode=mode)
        steps.append(step.to_json())
        g = step.result
    return {"steps": steps, "result": g.to_json(), "excess": excess(g)}


def _load_lengths(g: Graph, args) -> EdgeLengths:
    if args.lengths is None:
        return measure_lengths(g, random_generic_placement(g, args.seed))
    with open(args.lengths, encoding="ascii") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RealizationError(f"lengths file is not JSON: {exc}") from None
    return EdgeLengths.from_json(doc)


def _cmd_realize(g: Graph, args) -> dict:
    d = _load_lengths(g, args)
    if args.method == "quadratic":
        order = henneberg_order(g)
        if order is None:
            raise RealizationError("graph has no degree-2 construction order")
        branches = BranchVector.parse(args.branches) if args.branches else None
        p = quadratic_realize(g, d, order, branches)
    elif args.method == "glue":
        p = glue_realize(g, d, seed=args.seed)
    else:
        p = newton_realize(g, d, seed=args.seed)
    return p.to_json()


def selftest(seed: int = 0) -> dict:
    """Quick invariant checks over named and seeded random graphs."""
    from .families import NAMED, random_graph, random_henneberg, wheel, wheel_minus_rim_edge
    from .realization import sign_flips, standard_position
    from .rigidity import matrix_rank_oracle
    from .solvability import verify_certificate

    rng = random.Random(seed)
    suites: dict[str, list[bool]] = {}

    def record(name: str, ok: bool) -> None:
        suites.setdefault(name, []).append(bool(ok))

    graphs = [make() for make in NAMED.values()]
    graphs += [random_graph(rng.randint(2, 8), rng.random(), rng) for _ in range(40)]
    for g in graphs:
        record("rankOracle", generic_rank(g) == matrix_rank_oracle(g, seed))

    expected = {"prism": (False, "exact"), "K33": (False, "conjectural"), "K34": (True, "conjectural")}
    for name, (verdict, mode) in expected.items():
        g = NAMED[name]()
        got, cert = decide_solvability(g)
        record("namedVerdicts", got == verdict and cert.mode == mode and bool(verify_certificate(g, cert)))
    for n in range(4, 9):
        for g in (wheel(n), wheel_minus_rim_edge(n)):
            got, cert = decide_solvability(g)
            record("namedVerdicts", got and bool(verify_certificate(g, cert)))

    for i in range(10):
        g = random_henneberg(rng.randint(3, 9), rng)
        d = measure_lengths(g, random_generic_placement(g, seed + i))
        d = EdgeLengths({e: float(x) for e, x in d.values.items()})
        try:
            q = glue_realize(g, d, seed=seed + i)
            record("roundTrip", max_relative_residual(g, d, q) < 1e-7)
        except GraphError:
            record("roundTrip", False)

    for i in range(10):
        g = random_henneberg(5, rng)
        p = random_generic_placement(g, seed + i)
        q = standard_position(p, *g.sorted_edges[0])
        flips = sign_flips(q)
        record("standardPosition", len({tuple(sorted(f.coords.items())) for f in flips}) == 4)

    counts = {name: {"passed": sum(r), "failed": len(r) - sum(r)} for name, r in suites.items()}
    return {"suites": counts, "passed": sum(c["passed"] for c in counts.values()),
            "failed": sum(c["failed"] for c in counts.values())}


COMMANDS = {
    "analyze": _cmd_analyze,
    "decide": _cmd_decide,
    "decompose": _cmd_decompose,
    "reduce": _cmd_reduce,
    "realize": _cmd_realize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigidsolve", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="graph file (edge list or JSON); '-' reads standard input")
        p.add_argument("--format", choices=("edgelist", "json"), default=None,
                       help="input format (default: detected)")
        p.add_argument("--seed", type=int, default=0)
        return p

    graph_command("analyze", "rank, rigidity flags, planarity and connectivity")
    for name, help_text in (("decide", "radical solvability verdict with certificate"),
                            ("decompose", "cleavage units of a rigid graph")):
        p = graph_command(name, help_text)
        p.add_argument("--first-separation", type=int, default=None,
                       help="index of the 2-separation used at the root")
    p = graph_command("reduce", "wheel replacement on a 3-connected rigid graph")
    p.add_argument("--iterate", action="store_true", help="repeat until minimally rigid")
    p = graph_command("realize", "place the vertices from squared edge lengths")
    p.add_argument("--lengths", default=None,
                   help="JSON lengths file (default: lengths of a seeded generic placement)")
    p.add_argument("--branches", default=None, help="sign string for --method quadratic, e.g. +-+")
    p.add_argument("--method", choices=("quadratic", "glue", "newton"), default="glue")

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _read_graph(args) -> Graph:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="ascii") as fh:
            text = fh.read()
    return parse_graph(text, args.format)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            start = time.perf_counter()
            report = selftest(args.seed)
            sys.stderr.write(f"selftest finished in {time.perf_counter() - start:.1f}s\n")
            _emit(report)
            return 0 if report["failed"] == 0 else 1
        g = _read_graph(args)
        _emit(COMMANDS[args.command](g, args))
        return 0
    except (GraphError, OSError, UnicodeDecodeError) as exc:
        _emit({"error": {"kind": type(exc).__name__, "detail": str(exc)}})
        return 1


if __name__ == "__main__":
    sys.exit(main())
