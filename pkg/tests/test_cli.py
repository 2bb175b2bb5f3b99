from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from maxswp.cli import main
from maxswp.generators import cycle_graph, path_graph, random_tree, star_graph
from maxswp.graph import Graph, write_edge_list
from maxswp.welfare import rational_from_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in [("p6", path_graph(6)), ("p4", path_graph(4)), ("t12", random_tree(12, seed=3)),
                    ("star", star_graph(5)), ("c25", cycle_graph(25)), ("c6", cycle_graph(6))]:
        paths[name] = tmp_path / f"{name}.txt"
        write_edge_list(g, paths[name])
    return paths


def test_solve_path_mode(capsys, files):
    code, out, _ = run(capsys, "solve", files["p6"], "--mode", "path")
    res = json.loads(out)
    assert code == 0
    assert res["n"] == 6 and res["mode"] == "path"
    assert res["welfare"] == {"num": "10", "den": "3"}
    assert res["blocks"] == [[0, 1, 2], [3, 4, 5]]
    assert res["runtime_ms"] >= 0


def test_path_mode_follows_path_order(capsys, tmp_path):
    p = tmp_path / "shuffled.txt"
    write_edge_list(Graph(5, [(3, 0), (0, 4), (4, 1), (1, 2)]), p)
    code, out, _ = run(capsys, "solve", p)
    res = json.loads(out)
    assert res["mode"] == "path"
    # walk starts at the smaller endpoint 2: 2-1 | 4-0-3
    assert res["blocks"] == [[0, 3, 4], [1, 2]]


def test_tree_and_exact_modes_agree(capsys, files):
    _, a, _ = run(capsys, "solve", files["t12"], "--mode", "tree")
    _, b, _ = run(capsys, "--threads", "2", "solve", files["t12"], "--mode", "exact")
    assert json.loads(a)["welfare"] == json.loads(b)["welfare"]


def test_auto_mode_dispatch(capsys, files):
    assert json.loads(run(capsys, "solve", files["p6"])[1])["mode"] == "path"
    assert json.loads(run(capsys, "solve", files["star"])[1])["mode"] == "tree"
    res = json.loads(run(capsys, "solve", files["c6"])[1])
    assert res["mode"] == "exact" and rational_from_json(res["welfare"]) == Fraction(10, 3)


def test_solve_errors(capsys, files, tmp_path):
    code, _, err = run(capsys, "solve", files["c25"], "--mode", "exact")
    assert code == 3 and "20" in err
    assert run(capsys, "solve", files["c25"])[0] == 3
    assert run(capsys, "solve", tmp_path / "missing.txt")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "declares" in err
    assert run(capsys, "solve", files["c6"], "--mode", "tree")[0] == 2
    assert run(capsys, "solve", files["star"], "--mode", "path")[0] == 2
    disconnected = tmp_path / "disc.txt"
    write_edge_list(Graph(4, [(0, 1), (2, 3)]), disconnected)
    assert run(capsys, "solve", disconnected)[0] == 2


def test_solve_output_file(capsys, files, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "solve", files["p4"], "--output", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["welfare"] == {"num": "13", "den": "6"}


def test_welfare_report(capsys, files, tmp_path):
    grand = tmp_path / "grand.json"
    grand.write_text("[[0, 1, 2, 3]]")
    code, out, _ = run(capsys, "welfare", files["p4"], grand)
    res = json.loads(out)
    assert code == 0
    assert res["welfare"] == {"num": "13", "den": "6"}
    assert res["average"] == {"num": "13", "den": "24"}
    assert res["utilities"][0] == {"num": "11", "den": "24"}
    split = tmp_path / "split.json"
    split.write_text("[[0, 1], [2, 3]]")
    res = json.loads(run(capsys, "welfare", files["p4"], split)[1])
    assert rational_from_json(res["welfare"]) == 2
    assert [b["members"] for b in res["blocks"]] == [[0, 1], [2, 3]]


@pytest.mark.parametrize("content", ["[[0, 1], [1, 2, 3]]", "[[0, 1]]", "[[0, 1, 2, 3, 4]]", "{\"x\": 1}",
                                     "not json", "[[0, 1.5], [2, 3]]"])
def test_welfare_rejects_invalid_partitions(capsys, files, tmp_path, content):
    p = tmp_path / "p.json"
    p.write_text(content)
    assert run(capsys, "welfare", files["p4"], p)[0] == 2


def test_solve_then_welfare_roundtrip(capsys, files, tmp_path):
    for name in ("p6", "t12", "star", "c6"):
        dest = tmp_path / f"{name}.json"
        run(capsys, "solve", files[name], "--output", dest)
        solved = json.loads(dest.read_text())
        res = json.loads(run(capsys, "welfare", files[name], dest)[1])
        assert res["welfare"] == solved["welfare"]


def test_reduce_verify(capsys, tmp_path):
    inst = tmp_path / "sat3.xsat"
    inst.write_text("p xsat 3 3\n1 2 3\n1 2 3\n1 2 3\n")
    code, out, _ = run(capsys, "reduce", inst, "--verify", "--assignment", "010")
    res = json.loads(out)
    assert code == 0
    assert res["threshold"] == {"num": "41", "den": "4"}
    assert res["optimum_equals_threshold"] is True
    assert res["assignment_certified"] is True
    assert res["vertices"] == 15 and res["edges"] == 30


def test_reduce_outputs(capsys, tmp_path):
    inst = tmp_path / "sat3.xsat"
    inst.write_text("p xsat 3 3\n1 2 3\n1 2 3\n1 2 3\n")
    code, out, _ = run(capsys, "reduce", inst)
    assert code == 0 and out.startswith("15 30\n")
    prefix = tmp_path / "gadget"
    assert run(capsys, "reduce", inst, "--output", prefix)[0] == 0
    assert (tmp_path / "gadget.edges").read_text().startswith("15 30")
    labels = json.loads((tmp_path / "gadget.labels.json").read_text())
    assert labels["0"] == "x1^1" and labels["14"] == "S3^2"


def test_reduce_large_instance_is_forward_only(capsys, tmp_path):
    inst = tmp_path / "ring5.xsat"
    inst.write_text("p xsat 5 5\n1 2 3\n2 3 4\n3 4 5\n4 5 1\n5 1 2\n")
    code, out, _ = run(capsys, "reduce", inst, "--verify")
    res = json.loads(out)
    assert code == 0 and res["mode"] == "forward-only"
    assert res["optimum"] is None and res["optimum_equals_threshold"] is None


@pytest.mark.parametrize("text", ["p xsat 3 3\n1 2 3\n1 2\n1 2 3\n", "p xsat 2 2\n1 2 3\n1 2 3\n", "garbage"])
def test_reduce_rejects_malformed(capsys, tmp_path, text):
    inst = tmp_path / "bad.xsat"
    inst.write_text(text)
    assert run(capsys, "reduce", inst)[0] == 2


def test_reduce_rejects_bad_assignment(capsys, tmp_path):
    inst = tmp_path / "sat3.xsat"
    inst.write_text("p xsat 3 3\n1 2 3\n1 2 3\n1 2 3\n")
    code, _, err = run(capsys, "reduce", inst, "--assignment", "110")
    assert code == 2 and "clause 1" in err
    assert run(capsys, "reduce", inst, "--assignment", "1")[0] == 2


def test_bench_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--sizes", "100,1e3", "--seed", "1")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "n,runtime_ms"
    assert [r.split(",")[0] for r in rows[1:]] == ["100", "1000"]
    code, out, _ = run(capsys, "bench", "--sizes", "")
    assert code == 0 and out.strip() == "n,runtime_ms"
    dest = tmp_path / "bench.csv"
    assert run(capsys, "bench", "--sizes", "50", "--output", dest)[0] == 0
    assert dest.read_text().splitlines()[1].startswith("50,")
    assert run(capsys, "bench", "--sizes", "abc")[0] == 2


def test_bad_thread_count(capsys, files):
    assert run(capsys, "--threads", "0", "solve", files["p4"])[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "maxswp", "solve", str(files["p6"])],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["welfare"] == {"num": "10", "den": "3"}
    proc = subprocess.run([sys.executable, "-m", "maxswp", "solve", str(files["c25"]), "--mode", "exact"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 3
