import io
import json
import subprocess
import sys

import pytest

from gspdom import cli
from gspdom.expression import flatten, render_expression
from gspdom.generator import GenConfig, gen_expression
from gspdom.graph import write_edge_list

from instances import K4_EDGES, SPIDER_EDGES

SCHEMA = {"variant", "n", "m", "value", "feasible", "elapsed_ms", "parse_tree_nodes"}


@pytest.fixture
def write(tmp_path):
    def _write(text, name="in.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_expression_json(write, capsys):
    code, out, _ = run(["solve", write("s(e(a,b),e(b,c))"), "--json", "--witness"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == SCHEMA | {"witness"}
    assert doc["value"] == 1 and doc["witness"] == ["b"] and doc["feasible"]
    assert doc["parse_tree_nodes"] == 3


def test_witness_absent_without_flag(write, capsys):
    _, out, _ = run(["solve", write("s(e(a,b),e(b,c))"), "--json"], capsys)
    assert set(json.loads(out)) == SCHEMA


def test_spider_total_infeasible(write, capsys):
    code, out, _ = run(["solve", write(SPIDER_EDGES), "--variant", "total12", "--json", "--witness"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["feasible"] is False and doc["value"] is None and "witness" not in doc


def test_k4_not_gsp(write, capsys):
    text = "".join(f"{a} {b}\n" for a, b in K4_EDGES)
    code, _, err = run(["solve", write(text)], capsys)
    assert code == cli.EXIT_NOT_GSP and "not GSP" in err


def test_disconnected_not_gsp(write, capsys):
    code, _, _ = run(["solve", write("a b\nc d\n")], capsys)
    assert code == cli.EXIT_NOT_GSP


@pytest.mark.parametrize("text, fmt", [
    ("s(e(a,b),e(c,d))", None), ("p(e(a,b),e(a,b))", "expr"), ("a a\n", "edges"), ("a b c\n", None),
])
def test_bad_input(write, capsys, text, fmt):
    argv = ["solve", write(text)] + (["--format", fmt] if fmt else [])
    code, _, err = run(argv, capsys)
    assert code == cli.EXIT_INPUT and err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(["solve", str(tmp_path / "nope")], capsys)
    assert code == cli.EXIT_INPUT


def test_text_report(write, capsys):
    code, out, _ = run(["solve", write("a b\nb c\n"), "--witness"], capsys)
    lines = dict(line.split("\t") for line in out.splitlines())
    assert code == 0 and lines["value"] == "1" and lines["witness"] == "b" and "recognize_ms" in lines


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("e(a,b)\n"))
    code, out, _ = run(["solve", "-", "--variant", "total12", "--json"], capsys)
    assert code == 0 and json.loads(out)["value"] == 2


@pytest.mark.parametrize("text, labels, variant, code, report", [
    ("a b\nb c\n", "b", "one2", 0, "ok"),
    ("a b\nb c\n", "a", "one2", 3, "violated\tc\t0"),
    ("a b\n", "a,b", "total12", 0, "ok"),
    ("a b\n", "a", "total12", 3, "violated\ta\t0"),
    ("c x\nc y\nc z\n", "x,y,z", "one2", 3, "violated\tc\t3"),
])
def test_check(write, capsys, text, labels, variant, code, report):
    got, out, _ = run(["check", write(text), "--set", labels, "--variant", variant], capsys)
    assert got == code and out.strip() == report


def test_check_unknown_label(write, capsys):
    code, _, _ = run(["check", write("a b\n"), "--set", "zz"], capsys)
    assert code == cli.EXIT_INPUT


def test_gen(capsys):
    code, out, _ = run(["gen", "--seed", "1", "--leaves", "1"], capsys)
    assert code == 0 and out == "e(v0,v1)\n"
    _, again, _ = run(["gen", "--seed", "1", "--leaves", "1"], capsys)
    assert again == out


@pytest.mark.parametrize("weights", ["1,1", "a,b,c", "0,0,0", "-1,1,1"])
def test_gen_bad_weights(capsys, weights):
    code, _, _ = run(["gen", f"--weights={weights}"], capsys)
    assert code == cli.EXIT_INPUT


def test_gen_pipes_into_solve(write, capsys):
    _, text, _ = run(["gen", "--seed", "9", "--leaves", "50"], capsys)
    code, out, _ = run(["solve", write(text), "--json"], capsys)
    assert code == 0 and json.loads(out)["m"] == 50


def test_oracle(write, capsys):
    _, out, _ = run(["oracle", write("a b\nb c\n"), "--json", "--witness"], capsys)
    doc = json.loads(out)
    assert doc["value"] == 1 and doc["witness"] == ["b"] and doc["parse_tree_nodes"] is None
    _, out, _ = run(["oracle", write("a b\n"), "--variant", "total12", "--json"], capsys)
    assert json.loads(out)["value"] == 2
    _, out, _ = run(["oracle", write(SPIDER_EDGES), "--variant", "total12", "--json"], capsys)
    assert json.loads(out)["feasible"] is False


def test_oracle_too_large(write, capsys):
    text = "".join(f"v{k} v{k + 1}\n" for k in range(30))
    code, _, _ = run(["oracle", write(text)], capsys)
    assert code == cli.EXIT_INPUT


@pytest.mark.parametrize("seed", range(40))
def test_solve_agrees_with_oracle(write, capsys, seed):
    g, _ = flatten(gen_expression(GenConfig(seed, 2 + seed % 12)))
    if g.n > 14:
        pytest.skip("too large for the oracle")
    path = write(write_edge_list(g))
    for variant in ("one2", "total12"):
        _, a, _ = run(["solve", path, "--variant", variant, "--json"], capsys)
        _, b, _ = run(["oracle", path, "--variant", variant, "--json"], capsys)
        a, b = json.loads(a), json.loads(b)
        assert (a["value"], a["feasible"]) == (b["value"], b["feasible"])


def test_bench_small(capsys, tmp_path):
    out_csv = tmp_path / "rows.csv"
    code, out, _ = run(["bench", "--sizes", "64,128,256", "--repeats", "1", "--out", str(out_csv)], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "leaves,n,m,gen_ms,solve_ms,dp_ms,value"
    assert [int(line.split(",")[0]) for line in lines[1:4]] == [64, 128, 256]
    assert lines[4].startswith("# slope,") and lines[5].startswith("# top_doubling_ratio,")
    assert out_csv.read_text() == "\n".join(lines[:4]) + "\n"


def test_usage_error_exits_1(capsys):
    code, _, err = run(["solve"], capsys)
    assert code == cli.EXIT_INPUT and "usage" in err
    assert run(["--help"], capsys)[0] == 0


def test_bench_rejects_descending(capsys):
    code, _, _ = run(["bench", "--sizes", "256,64"], capsys)
    assert code == cli.EXIT_INPUT


def test_module_entry_point(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text(render_expression(gen_expression(GenConfig(2, 5))))
    proc = subprocess.run([sys.executable, "-m", "gspdom", "solve", str(p), "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["variant"] == "one2"
