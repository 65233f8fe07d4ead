import json
import subprocess
import sys

import pytest

from rigidsolve.cli import main
from rigidsolve.families import complete, complete_bipartite, k4_minus_edge, prism, wheel
from rigidsolve.graphcore import serialize_graph
from rigidsolve.realization import EdgeLengths, measure_lengths, random_generic_placement


@pytest.fixture
def files(tmp_path):
    def write(name, g, fmt):
        path = tmp_path / name
        path.write_text(serialize_graph(g, fmt))
        return str(path)

    return {
        "prism": write("prism.json", prism(), "json"),
        "k33": write("k33.txt", complete_bipartite(3, 3), "edgelist"),
        "k4e": write("k4e.txt", k4_minus_edge(), "edgelist"),
        "w7": write("w7.txt", wheel(7), "edgelist"),
        "k5": write("k5.txt", complete(5), "edgelist"),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_decide_prism(capsys, files):
    code, doc = run(capsys, "decide", files["prism"])
    assert code == 0
    assert (doc["verdict"], doc["mode"]) == ("no", "exact")
    assert set(doc) == {"verdict", "mode", "certificate", "witness"}


def test_analyze_k33(capsys, files):
    code, doc = run(capsys, "analyze", files["k33"])
    assert code == 0
    assert doc == {"n": 6, "m": 9, "rank": 9, "rigid": True, "minimallyRigid": True,
                   "redundantlyRigid": False, "globallyRigid": False, "planar": False, "connectivity": 3}


def test_decide_k33(capsys, files):
    code, doc = run(capsys, "decide", files["k33"])
    assert (code, doc["verdict"], doc["mode"]) == (0, "no", "conjectural")


def test_decide_with_forced_split(capsys, files):
    code, doc = run(capsys, "decide", files["k4e"], "--first-separation", 0)
    assert code == 0 and doc["verdict"] == "yes"


def test_decompose(capsys, files):
    code, doc = run(capsys, "decompose", files["k4e"])
    assert code == 0 and len(doc["units"]) == 2


def test_reduce_errors_on_k5(capsys, files):
    code, doc = run(capsys, "reduce", files["k5"])
    assert code == 1 and doc["error"]["kind"] == "DecompositionError"


def test_reduce_iterate(capsys, tmp_path):
    import random
    from rigidsolve.families import random_partially_redundant
    g = random_partially_redundant(8, random.Random(1))
    path = tmp_path / "g.txt"
    path.write_text(serialize_graph(g, "edgelist"))
    code, doc = run(capsys, "reduce", path, "--iterate")
    assert code == 0 and doc["excess"] == 0 and doc["steps"]


@pytest.mark.parametrize("method", ["glue", "newton"])
def test_realize_from_lengths_file(capsys, files, method):
    g = wheel(7)
    d = measure_lengths(g, random_generic_placement(g, 3))
    lengths = files["dir"] / "w7.lengths.json"
    lengths.write_text(json.dumps(EdgeLengths({e: float(x) for e, x in d.values.items()}).to_json()))
    code, doc = run(capsys, "realize", files["w7"], "--lengths", lengths, "--method", method)
    assert code == 0 and len(doc["coords"]) == 7
    for (u, v), want in d.values.items():
        (x1, y1), (x2, y2) = doc["coords"][u], doc["coords"][v]
        assert (x1 - x2) ** 2 + (y1 - y2) ** 2 == pytest.approx(float(want), rel=1e-7)


def test_realize_quadratic_branches(capsys, files):
    code, doc = run(capsys, "realize", files["k4e"], "--method", "quadratic", "--branches", "+-+")
    assert code == 0 and len(doc["coords"]) == 4
    code, doc = run(capsys, "realize", files["k4e"], "--method", "quadratic", "--branches", "+-")
    assert code == 1 and doc["error"]["kind"] == "RealizationError"


def test_quadratic_needs_construction(capsys, files):
    code, doc = run(capsys, "realize", files["k33"], "--method", "quadratic")
    assert code == 1


def test_domain_errors(capsys, files, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n0 1\n0 1\n")
    code, doc = run(capsys, "analyze", bad)
    assert code == 1 and doc["error"]["kind"] == "GraphFormatError" and "line 3" in doc["error"]["detail"]
    code, doc = run(capsys, "analyze", tmp_path / "missing.txt")
    assert code == 1 and doc["error"]["kind"] == "FileNotFoundError"
    flexible = tmp_path / "c4.txt"
    flexible.write_text("4 4\n0 1\n1 2\n2 3\n0 3\n")
    code, doc = run(capsys, "decide", flexible)
    assert code == 1 and doc["error"]["kind"] == "SolvabilityError"


def test_usage_errors(files):
    for argv in (["frobnicate"], ["analyze", files["k33"], "--bogus"], ["realize", files["k33"], "--method", "x"], []):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


def test_format_override(capsys, files):
    code, doc = run(capsys, "analyze", files["prism"], "--format", "json")
    assert code == 0 and doc["m"] == 9
    code, doc = run(capsys, "analyze", files["prism"], "--format", "edgelist")
    assert code == 1


def test_selftest(capsys):
    code, doc = run(capsys, "selftest")
    assert code == 0 and doc["failed"] == 0 and doc["passed"] > 50


def test_output_is_byte_identical_across_processes(files):
    outs = [subprocess.run([sys.executable, "-m", "rigidsolve.cli", "realize", files["w7"], "--seed", "4"],
                           capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [subprocess.run([sys.executable, "-m", "rigidsolve.cli", "decide", files["prism"]],
                           capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1]
