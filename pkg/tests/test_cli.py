import json

import pytest

from abslinf import cli
from abslinf.convolution import g_complex
from abslinf.lie import free_lie_algebra
from abslinf.integration import BRACKET_SCALE


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_required_examples(capsys):
    assert run(capsys, "trees", "enum", "--arity", "3", "--weight", "1")[:2] == (0, "[(|||)]\n")
    code, out, _ = run(capsys, "bch", "--weight", "3")
    assert code == 0
    assert out.splitlines() == ["1/1 x", "1/1 y", "1/2 [x,y]", "1/12 [x,[x,y]]", "1/12 [[x,y],y]"]
    code, out, _ = run(capsys, "check", "dupont", "--n", "1", "--degree", "4")
    assert code == 0 and out.startswith("pass")


def test_json_report_is_deterministic(capsys):
    a = run(capsys, "--json", "bch", "--weight", "4")[1]
    b = run(capsys, "--json", "bch", "--weight", "4")[1]
    assert a == b
    rep = json.loads(a)
    assert rep["command"] == ["--json", "bch", "--weight", "4"] and rep["status"] == "ok"
    assert all("/" in e["coeff"] for e in rep["result"])


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["trees", "enum", "--bogus"])
    assert e.value.code == 2
    assert run(capsys, "model", "pi", "nowhere.json")[0] == 2
    assert run(capsys, "trees", "aut", "(|)")[0] == 2


def test_trees_and_transfer(capsys):
    assert run(capsys, "trees", "aut", "((||)(||))")[1].strip() == "8"
    assert "(*||)" in run(capsys, "trees", "split", "(||)")[1]
    assert run(capsys, "transfer", "op", "--n", "1", "--tree", "(||)", "--inputs", "0", "0,1")[1].strip() == "1/2 w01"
    rep = json.loads(run(capsys, "--json", "transfer", "table", "--n", "1")[1])
    assert rep["result"]["n"] == 1 and rep["result"]["entries"]


def test_dupont_and_mc(capsys):
    assert run(capsys, "dupont", "whitney", "--n", "1", "--subset", "0,1")[1].strip() == "dt1"
    code, out, _ = run(capsys, "mc", "build", "--n", "1", "--weight", "3")
    assert code == 0 and "d(a01) = -1/1 a0 + 1/1 a1 - 1/2 (a0 a01)" in out
    assert run(capsys, "check", "mc", "--n", "1", "--weight", "4")[0] == 0
    assert run(capsys, "check", "bch", "--weight", "4")[0] == 0


def test_models_and_maps(capsys):
    rep = json.loads(run(capsys, "--json", "model", "pi", "sphere:2", "--degrees", "2..3", "--weight", "5")[1])
    assert rep["result"]["dims"] == {"2": 1, "3": 1}
    out = json.loads(run(capsys, "model", "minimal", "boundary:3")[1])
    assert out["minimal_generators"] == out["simplicial_homology"]
    assert run(capsys, "model", "build", "point", "--weight", "3")[0] == 0
    assert json.loads(run(capsys, "map", "pi", "--target", "sphere:2", "--weight", "5")[1])["dims"] == {"1": 1, "2": 2}


def test_extend(capsys):
    code, out, _ = run(capsys, "extend", "--ring", "quadratic:-1", "--candidate", "x*y=1")
    assert code == 0 and "candidate is Maurer-Cartan" in out
    code, out, _ = run(capsys, "extend", "--candidate", "1*y=1")
    assert code == 1 and "a_1_y**2 + 1 = 0" in out


def test_simplex_and_horn_files(tmp_path, capsys):
    g = free_lie_algebra("xy", 3, BRACKET_SCALE).to_json()
    horn = {"algebra": g, "n": 2, "k": 1,
            "values": {"0,1": [{"label": "x", "coeff": "1"}], "1,2": [{"label": "y", "coeff": "1"}]}}
    p = tmp_path / "horn.json"
    p.write_text(json.dumps(horn))
    code, out, _ = run(capsys, "--json", "horn", "fill", str(p))
    assert code == 0
    filled = json.loads(out)["result"]
    assert {e["label"]: e["coeff"] for e in filled["0,2"]}["xy"] == "1/2"
    simplex = {"algebra": g, "n": 2, "values": filled}
    q = tmp_path / "s.json"
    q.write_text(json.dumps(simplex))
    assert run(capsys, "simplex", "check", str(q))[:2] == (0, "simplex\n")
    filled["0,2"] = [{"label": "x", "coeff": "1"}]
    q.write_text(json.dumps(simplex))
    assert run(capsys, "simplex", "check", str(q))[0] == 1


def test_check_structure_file(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(g_complex().to_json()))
    assert run(capsys, "check", "structure", "--file", str(p))[0] == 0
    bad = {"basis": [{"label": "x", "degree": 0, "weight": 1}, {"label": "w", "degree": -1, "weight": 1},
                     {"label": "u", "degree": -2, "weight": 2}],
           "W": 2, "curvature": [{"label": "w", "coeff": "1"}],
           "operations": [{"arity": 2, "inputs": ["w", "x"], "output": [{"label": "u", "coeff": "1"}]}]}
    p.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "check", "structure", "--file", str(p))
    assert code == 1 and "arity 1" in out
    p.write_text("{not json")
    assert run(capsys, "check", "structure", "--file", str(p))[0] == 2
