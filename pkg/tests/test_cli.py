import json
import subprocess
import sys

import pytest

from propinterp import parse
from propinterp.cli import main
from propinterp.oracle import equivalent


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("method", ["qe", "dnf", "resolution", "resolution-mcmillan", "tableau", "definition"])
def test_interpolate_methods(capsys, method):
    code, out, _ = run(capsys, "interpolate", "--method", method, "p & q1", "q2 -> p")
    assert code == 0 and out.strip() == "p"


def test_not_entailed(capsys):
    code, out, _ = run(capsys, "interpolate", "--method", "resolution", "p", "q")
    assert code == 1
    assert "p=1 q=0" in out


def test_parse_error(capsys):
    code, _, err = run(capsys, "interpolate", "p &", "q")
    assert code == 2 and err.startswith("error:")


def test_precondition_error(capsys):
    code, _, _ = run(capsys, "define", "--sigma", "p", "--atom", "p", "p")
    assert code == 2


def test_resource_limit(capsys, monkeypatch):
    big = " & ".join(f"a{i}" for i in range(8))
    code, _, err = run(capsys, "check", "--limit-oracle", "4", big, "a0", "a0")
    assert code == 3 and "resource limit" in err
    phi = "(a | b) & (a | ~b) & (c | d) & (c | ~d)"
    assert run(capsys, "interpolate", "--method", "tableau", "--limit-nodes", "10", phi, "a & c")[0] == 3
    assert run(capsys, "interpolate", "--method", "resolution", "--limit-resolvents", "3", phi, "a & c")[0] == 3
    monkeypatch.setenv("INTERP_ORACLE_LIMIT", "4")
    code, _, _ = run(capsys, "check", big, "a0", "a0")
    assert code == 3


def test_json_output(capsys):
    code, out, _ = run(capsys, "interpolate", "--format", "json", "--method", "tableau", "p & q1", "q2 -> p")
    doc = json.loads(out)
    assert code == 0
    assert doc == {"version": 1, "status": "ok", "method": "tableau", "interpolant": "p"}
    code, out, _ = run(capsys, "interpolate", "--format", "json", "p", "q")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "not-entailed" and doc["countermodel"] == {"p": True, "q": False}


def test_uniform(capsys, tmp_path):
    trace = tmp_path / "t.json"
    code, out, _ = run(capsys, "uniform", "--keep", "c,e", "--method", "resolution", "--trace", str(trace),
                       "~(d & e) & (a -> d) & (a | c) & e")
    assert code == 0 and equivalent(parse(out), parse("e & c"))
    doc = json.loads(trace.read_text())
    assert doc["version"] == 1 and doc["method"] == "resolution"
    assert {s["eliminate"] for s in doc["steps"]} >= {"a", "d"}
    for method in ("qe", "dnf"):
        code, out, _ = run(capsys, "uniform", "--forget", "a,d", "--method", method,
                           "~(d & e) & (a -> d) & (a | c) & e")
        assert code == 0 and equivalent(parse(out), parse("e & c"))


def test_uniform_rejects_tableau():
    with pytest.raises(SystemExit) as e:
        main(["uniform", "--keep", "p", "--method", "tableau", "p"])
    assert e.value.code == 2


def test_uniform_dimacs(capsys, tmp_path):
    f = tmp_path / "in.cnf"
    f.write_text("c var 1 a\nc var 2 c\nc var 3 d\nc var 4 e\np cnf 4 4\n-3 -4 0\n-1 3 0\n1 2 0\n4 0\n")
    code, out, _ = run(capsys, "uniform", "--dimacs", "--keep", "c,e", "--method", "resolution", f"@{f}")
    assert code == 0
    assert out.startswith("c var 1 c\nc var 2 e\np cnf 2 2\n")


def test_define(capsys):
    code, out, _ = run(capsys, "define", "--sigma", "q", "--atom", "p", "p <-> q")
    assert code == 0 and out.strip() == "q"
    code, out, _ = run(capsys, "define", "--sigma", "q", "--atom", "p", "p | q")
    assert code == 1 and out.startswith("not definable")


def test_split(capsys, tmp_path):
    code, out, _ = run(capsys, "split", "p & q")
    assert code == 0 and out.splitlines() == ["{p} : p", "{q} : q"]
    trace = tmp_path / "s.json"
    code, out, _ = run(capsys, "split", "--format", "json", "--trace", str(trace), "p", "q | r")
    assert json.loads(out)["blocks"] == [{"atoms": ["p"], "axiom": "p"}, {"atoms": ["q", "r"], "axiom": "q | r"}]
    assert json.loads(trace.read_text())["theory"] == ["p", "q | r"]


def test_check(capsys, tmp_path):
    assert run(capsys, "check", "p & q1", "q2 -> p", "p")[0] == 0
    assert run(capsys, "check", "p & q1", "q2 -> p", "~p")[0] == 1
    phi, psi = "(p -> q) & (r -> (p | q)) & t", "(p -> (q & t)) & ((q & s) -> t)"
    assert run(capsys, "check", "--lyndon", phi, psi, "(p -> q) & t")[0] == 0
    assert run(capsys, "check", phi, psi, "(p -> (q & t)) & (q -> t)")[0] == 0
    trace = tmp_path / "c.json"
    code, out, _ = run(capsys, "check", "--lyndon", "--trace", str(trace), phi, psi, "(p -> (q & t)) & (q -> t)")
    assert code == 1 and out.strip() == "not a valid Lyndon interpolant"
    doc = json.loads(trace.read_text())
    assert doc["left_entails"] and doc["right_entails"] and ["q", "-"] in doc["polarities"]["chi"]
    assert run(capsys, "check", "--separator", "p", "~p", "p")[0] == 0


def test_interpolate_traces(capsys, tmp_path):
    for method, key in (("resolution", "proof"), ("tableau", "tableau"), ("qe", "steps"), ("dnf", "pairs")):
        trace = tmp_path / f"{method}.json"
        code, _, _ = run(capsys, "interpolate", "--method", method, "--trace", str(trace), "p & q & r", "s -> (p | q)")
        assert code == 0
        doc = json.loads(trace.read_text())
        assert doc["version"] == 1 and doc["method"] == method and key in doc


def test_file_and_dimacs_inputs(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("p & q1\n")
    b.write_text("q2 -> p\n")
    assert run(capsys, "interpolate", f"@{a}", f"@{b}")[1].strip() == "p"
    assert run(capsys, "interpolate", "@/nonexistent/file", "p")[0] == 2
    left, right = tmp_path / "l.cnf", tmp_path / "r.cnf"
    left.write_text("p cnf 2 2\n1 0\n2 0\n")
    right.write_text("p cnf 2 1\n1 0\n")
    code, out, _ = run(capsys, "interpolate", "--dimacs", f"@{left}", f"@{right}")
    assert code == 0 and out.strip() == "x1"


def test_stats(capsys, tmp_path):
    code, out, _ = run(capsys, "stats", "(p & q) | (p & q)")
    assert code == 0 and "dag_size: 4" in out and "tree_size: 7" in out
    trace = tmp_path / "st.json"
    code, out, _ = run(capsys, "stats", "--format", "json", "--trace", str(trace), "p & q & r", "s -> (p | q)")
    doc = json.loads(out)
    assert code == 0
    for m in ("resolution", "resolution-mcmillan"):
        assert doc[m]["separator_dag_size"] <= 5 * max(1, doc[m]["resolvents"]) + 2
    assert doc["tableau"]["separator_dag_size"] <= doc["tableau"]["tableau_nodes"]
    assert json.loads(trace.read_text())["tableau"] == doc["tableau"]
    assert run(capsys, "stats", "p", "q")[0] == 1


def test_deterministic_output(capsys):
    argv = ["interpolate", "--format", "json", "--method", "resolution", "(a | b) & (~a | c) & (~b | c)", "c | d"]
    first = run(capsys, *argv)
    assert all(run(capsys, *argv) == first for _ in range(3))


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "propinterp.cli", "interpolate", "--method", "dnf", "p & q", "p"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "p"
