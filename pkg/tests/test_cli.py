"""Command-line harness: exit codes, JSON reports, figure rendering."""

import json

import pytest

from fmtk.cli import main, rand_matrix, rand_tripartite
from fmtk.core import Rng, write_matrix, write_tripartite


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out.splitlines()[-1]) if out else None)


def test_verify_suite_passes_and_is_deterministic(capsys):
    code, doc = run(capsys, ["verify", "--suite", "products",
                             "--seed", "5", "--scale", "small"])
    assert code == 0
    assert doc["passed"] is True
    assert doc["cases"]
    code2, doc2 = run(capsys, ["verify", "--suite", "products",
                               "--seed", "5", "--scale", "small"])
    for d in (doc, doc2):
        d.pop("timestamp")
        d.pop("wall_clock_s")
    assert doc == doc2


def test_verify_all_suites(capsys):
    code, doc = run(capsys, ["verify", "--suite", "all", "--seed", "1"])
    assert code == 0 and doc["passed"] is True
    names = {c["name"].split(".")[0] for c in doc["cases"]}
    assert names == {"products", "witnesses", "counting",
                     "tridecomp", "bsg", "gadgets"}


def test_bench_writes_json_and_plot(tmp_path, capsys):
    jpath = tmp_path / "report.json"
    ppath = tmp_path / "counters.png"
    code, doc = run(capsys, ["bench", "--algo", "equality_product",
                             "--n", "32", "--seed", "2",
                             "--json", str(jpath), "--plot", str(ppath)])
    assert code == 0
    assert doc["passed"] is True
    assert doc["counters"]
    assert json.loads(jpath.read_text())["algo"] == "equality_product"
    assert ppath.stat().st_size > 0


def test_bench_unknown_algo_is_usage_error(capsys):
    assert main(["bench", "--algo", "nope"]) == 2
    capsys.readouterr()


def test_bench_bad_params_is_usage_error(capsys):
    assert main(["bench", "--algo", "sumset", "--params", "oops"]) == 2
    capsys.readouterr()


def test_decompose_verify(tmp_path, capsys):
    G = rand_tripartite(Rng(7, "cli"), 3, 3, 3, -3, 3)
    gpath = tmp_path / "g.json"
    write_tripartite(G, str(gpath))
    code, doc = run(capsys, ["decompose", "--graph", str(gpath),
                             "--target", "1", "--s", "2", "--verify"])
    assert code == 0
    assert doc["verified"] is True
    assert "categories" in doc and "remainder" in doc


def test_cover_simple_and_popular_fast(tmp_path, capsys):
    rng = Rng(8, "cli")
    spath = tmp_path / "set.json"
    dpath = tmp_path / "diffs.json"
    spath.write_text(json.dumps(
        {"n": 10, "vals": [1, 2, "inf", 4, 1, 2, 3, 4, 1, 2]}))
    dpath.write_text(json.dumps(
        {"n": 10, "vals": [0, 0, 1, "inf", 0, 0, 1, 1, 0, 0]}))
    code, doc = run(capsys, ["cover", "--set", str(spath),
                             "--diffs", str(dpath), "--mode", "simple",
                             "--s", "2", "--seed", "3", "--verify"])
    assert code == 0 and doc["verified"] is True
    code2, doc2 = run(capsys, ["cover", "--set", str(spath),
                               "--mode", "popular_fast", "--s", "2",
                               "--sh", "2", "--seed", "3", "--verify"])
    assert code2 == 0 and doc2["verified"] is True
    # simple/gowers modes need a difference set
    assert main(["cover", "--set", str(spath), "--mode", "gowers"]) == 2
    capsys.readouterr()


def test_gadget_conv_verify(tmp_path, capsys):
    rng = Rng(9, "cli")
    n = 3
    A = rand_matrix(rng, n, n, 1, 2 * n * n)
    B = rand_matrix(rng, n, n, 1, 2 * n * n)
    apath, bpath = tmp_path / "a.mat", tmp_path / "b.mat"
    write_matrix(A, str(apath))
    write_matrix(B, str(bpath))
    code, doc = run(capsys, ["gadget", "--kind", "conv",
                             "--a", str(apath), "--b", str(bpath),
                             "--verify"])
    assert code == 0 and doc["verified"] is True
    assert "decoded" in doc


def test_gadget_minwitness_verify(tmp_path, capsys):
    rng = Rng(10, "cli")
    A = rand_matrix(rng, 2, 2, 1, 2)
    apath = tmp_path / "a.mat"
    write_matrix(A, str(apath))
    code, doc = run(capsys, ["gadget", "--kind", "minwitness",
                             "--a", str(apath), "--b", str(apath),
                             "--y", "2", "--verify"])
    assert code == 0 and doc["verified"] is True


def test_count_minplus_and_conv(tmp_path, capsys):
    a = tmp_path / "a.mat"
    b = tmp_path / "b.mat"
    a.write_text("1 2\n1 2\n")
    b.write_text("1 2\n2 1\n")
    code, doc = run(capsys, ["count", "--what", "minplus_conv",
                             "--a", str(a), "--b", str(b)])
    assert code == 0
    assert doc["counts"] == [0, 1]   # slot 1 empty; slot 2 only a_1 + b_1

    A = tmp_path / "A.mat"
    B = tmp_path / "B.mat"
    A.write_text("1 2\n1 2\n")
    B.write_text("2 1\n2\n1\n")
    code2, doc2 = run(capsys, ["count", "--what", "minplus",
                               "--a", str(A), "--b", str(B)])
    assert code2 == 0
    assert doc2["counts"] == [[2]]   # 1+2 = 2+1 = 3, both minimal
