import json

import pytest

from dposet.cli import run
from dposet.digraph import Digraph


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate(capsys):
    code, out, _ = call(capsys, "enumerate", "--max-n", "3", "--summary")
    assert code == 0 and json.loads(out)["sizes"] == [2, 10, 104]
    code, out, _ = call(capsys, "enumerate", "--max-n", "2")
    doc = json.loads(out)
    assert doc["sizes"] == [2, 10]


def test_hasse_dot_and_json(capsys):
    code, out, _ = call(capsys, "hasse", "--order", "sub", "--max-level", "2", "--format", "dot")
    assert code == 0 and sum("[level=" in line for line in out.splitlines()) == 12
    code, out, _ = call(capsys, "hasse", "--order", "emb", "--max-level", "2", "--format", "json")
    doc = json.loads(out)
    # embeddability levels are graded by vertices + edges
    assert doc["order"] == "embeddability" and len(doc["nodes"]) == 3


def test_fo_eval(capsys, tmp_path):
    f = tmp_path / "min.fo"
    f.write_text("forall y. (y <= x -> y = x)\n")
    code, out, _ = call(capsys, "fo-eval", "--formula", str(f), "--universe-n", "3")
    assert code == 0 and json.loads(out)["defined_set"] == ["1:0", "1:1"]
    code, out, _ = call(capsys, "fo-eval", "--formula", str(f), "--universe-n", "2", "--bind", "x=L1")
    assert code == 0 and json.loads(out)["value"] is True
    g = tmp_path / "two.fo"
    g.write_text("x <= y")
    code, _, err = call(capsys, "fo-eval", "--formula", str(g), "--universe-n", "2")
    assert code == 2 and err
    bad = tmp_path / "bad.fo"
    bad.write_text("x <=")
    code, _, err = call(capsys, "fo-eval", "--formula", str(bad), "--universe-n", "2")
    assert code == 2 and "column" in err


def test_graph_ops(capsys, tmp_path):
    code, out, _ = call(capsys, "graph", "--op", "canon", "--a", "Larrow")
    assert code == 0 and json.loads(out) == {"canonical": "2:0011", "labeling": [2, 1]}
    path = tmp_path / "o3.dgf"
    path.write_text(Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)]).to_dgf())
    assert call(capsys, "graph", "--op", "sub", "--a", "I2", "--b", str(path))[1].strip() == "true"
    assert call(capsys, "graph", "--op", "sub", "--a", "E2", "--b", str(path))[1].strip() == "false"
    assert call(capsys, "graph", "--op", "emb", "--a", "E2", "--b", str(path))[1].strip() == "true"
    assert call(capsys, "graph", "--op", "iso", "--a", "O3", "--b", str(path))[1].strip() == "true"
    assert call(capsys, "graph", "--op", "sub", "--a", "I2")[0] == 2
    assert call(capsys, "graph", "--op", "bogus", "--a", "I2")[0] == 2
    assert call(capsys, "graph", "--op", "canon", "--a", str(tmp_path / "missing.dgf"))[0] == 2


def test_aut(capsys):
    code, out, _ = call(capsys, "aut", "--action", "closure", "--scope", "generators")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == 768 and len(doc["generators"]) == 29
    code, out, _ = call(capsys, "aut", "--action", "verify", "--rule", "pi:(BC)")
    assert code == 0 and json.loads(out)["status"] == "pass"
    assert call(capsys, "aut", "--action", "verify", "--rule", "pi:(AE)")[0] == 2
    code, out, _ = call(capsys, "aut", "--action", "identities")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_lemma_exit_codes(capsys):
    code, out, _ = call(capsys, "verify-lemma", "--id", "io-def", "--universe-n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass" and "elapsed" not in doc
    code, out, _ = call(capsys, "verify-lemma", "--id", "male-rel", "--params", "uniqueness_max=7")
    assert code == 1 and json.loads(out)["status"] == "fail"
    assert call(capsys, "verify-lemma", "--id", "male-rel", "--params", "i=5", "--params", "j=5")[0] == 2
    assert call(capsys, "verify-lemma", "--id", "nope")[0] == 2
    code, out, _ = call(capsys, "verify-lemma", "--id", "io-def", "--universe-n", "1", "--margin", "1")
    assert code == 0 and json.loads(out)["status"] == "skipped"
    code, out, _ = call(capsys, "verify-lemma", "--id", "circle-count", "--timing")
    assert "elapsed" in json.loads(out)


def test_main_theorem_command(capsys):
    code, out, _ = call(capsys, "main-theorem", "--graph", "L1", "--samples", "20")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass" and doc["details"]["reached"] == ["1:0", "1:1"]
    assert call(capsys, "main-theorem", "--graph", "L1", "--l-sizes", "2", "--d-sizes", "4")[0] == 2
    assert call(capsys, "main-theorem", "--graph", "E3")[0] == 2


def test_pretty_output(capsys):
    code, out, _ = call(capsys, "verify-lemma", "--id", "io-def", "--universe-n", "2", "--pretty")
    assert code == 0 and "io-def" in out and not out.lstrip().startswith("{")


def test_output_is_deterministic(capsys):
    argv = ["verify-lemma", "--id", "circle-count"]
    first = call(capsys, *argv)[1]
    assert call(capsys, *argv)[1] == first
    argv = ["main-theorem", "--graph", "Larrow", "--samples", "30", "--seed", "4"]
    first = call(capsys, *argv)[1]
    assert call(capsys, *argv)[1] == first


def test_usage_errors(capsys):
    assert call(capsys)[0] == 2
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "enumerate", "--max-n", "zero")[0] == 2
