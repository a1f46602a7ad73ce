import json

import pytest

from fairflow.cli import main, parse_instance, serialize_instance
from support import I1, I2, I3


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, inst in {"i1": I1, "i2": I2, "i3": I3}.items():
        path = tmp_path / f"{name}.json"
        path.write_text(serialize_instance(inst))
        paths[name] = str(path)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_instance_round_trip():
    text = serialize_instance(I2)
    assert text == '{"k":2,"m":4,"voters":[[0,3],[0,1],[0,1],[2]]}'
    assert parse_instance(text) == I2
    assert serialize_instance(parse_instance(text)) == text


def test_check_examples(files, capsys):
    code, out, _ = run(capsys, "check", files["i1"], "(1,1/3,2/3)", "grp")
    assert code == 1 and json.loads(out)["witness"] == [0, 1, 2]
    code, _, _ = run(capsys, "check", files["i1"], "(1,1/2,1/2)", "grp")
    assert code == 0
    code, out, _ = run(capsys, "check", files["i3"], "(0,1/3,0,2/3)", "gfs")
    assert code == 1 and json.loads(out)["witness"] == [0, 1]


def test_check_other_axioms(files, capsys):
    assert run(capsys, "check", files["i1"], "(1,0,1)", "pjr")[0] == 0
    assert run(capsys, "check", files["i1"], "(0,1,1)", "strong-ufs")[0] == 1
    assert run(capsys, "check", files["i1"], "(1,1/2,1/2)", "pjr")[0] == 3
    pay = files["dir"] / "pay.json"
    pay.write_text(json.dumps({"committee": ["1", "0", "0"], "affordable_committee": [0],
                               "payments": [["1/3", "0", "0"]] * 3 + [["0", "0", "0"]]}))
    assert run(capsys, "check", files["i1"], str(pay), "affordable")[0] == 0
    assert run(capsys, "check", files["i1"], "(1,1/2,1/2)", "affordable")[0] == 2


def test_solve_rules(files, capsys):
    for rule in ("gcut", "rut"):
        code, out, _ = run(capsys, "solve", files["i2"], "--rule", rule)
        doc = json.loads(out)
        assert code == 0 and doc["committee"] == ["1", "1/2", "1/2", "0"]
        assert doc["verdicts"]["grp"] and doc["welfare"] == "9/2"
    code, out, _ = run(capsys, "solve", files["i1"], "--rule", "mes-bbw", "--lottery")
    doc = json.loads(out)
    assert doc["affordable_committee"] == [0]
    assert doc["lottery"] == [{"committee": [0, 1], "weight": "1/2"}, {"committee": [0, 2], "weight": "1/2"}]
    code, out, _ = run(capsys, "solve", files["i2"], "--rule", "utilitarian")
    assert json.loads(out)["committee"] == ["1", "1", "0", "0"]


def test_solve_empty_ballots(tmp_path, capsys):
    path = tmp_path / "blank.json"
    path.write_text('{"k":2,"m":3,"voters":[[],[]]}')
    code, out, _ = run(capsys, "solve", str(path), "--rule", "gcut")
    assert json.loads(out)["committee"] == ["1", "1", "0"]


def test_solve_output_and_determinism(files, capsys, monkeypatch):
    out_path = files["dir"] / "res.json"
    assert run(capsys, "solve", files["i1"], "--rule", "gcut", "--lottery", "--seed", "3", "--output", str(out_path))[0] == 0
    first = out_path.read_text()
    run(capsys, "solve", files["i1"], "--rule", "gcut", "--lottery", "--seed", "3", "--output", str(out_path))
    assert out_path.read_text() == first
    monkeypatch.setenv("FAIRFLOW_SEED", "11")
    _, out, _ = run(capsys, "solve", files["i1"], "--rule", "gcut", "--lottery", "--seed", "3")
    assert json.loads(out)["seed"] == 11
    # a result file can be fed back to check
    monkeypatch.delenv("FAIRFLOW_SEED")
    assert run(capsys, "check", files["i1"], str(out_path), "grp")[0] == 0


def test_decompose_command(capsys):
    code, out, _ = run(capsys, "decompose", "(1,1/2,1/2)", "--sample", "--seed", "1")
    doc = json.loads(out)
    assert code == 0 and doc["k"] == 2 and len(doc["lottery"]) == 2
    assert doc["sample"] in ([0, 1], [0, 2])


def test_bench(files, capsys):
    cfg = files["dir"] / "bench.json"
    cfg.write_text(json.dumps({"instances": [{"file": "i2.json", "name": "I2"}], "rules": ["rut", "gcut"]}))
    code, out, _ = run(capsys, "bench", str(cfg))
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "instance,rule,n,m,k,welfare,grp"
    assert lines[1:] == ["I2,rut,4,4,2,9/2,True", "I2,gcut,4,4,2,9/2,True"]
    assert run(capsys, "bench", str(cfg))[1] == out
    cfg.write_text(json.dumps({"instances": [{"file": "i2.json"}], "rules": []}))
    assert run(capsys, "bench", str(cfg))[1].strip() == "instance,rule,n,m,k,welfare,grp"
    model = {"type": "impartial-culture", "n": 5, "m": 4, "k": 2, "prob": "1/2"}
    cfg.write_text(json.dumps({"instances": [{"model": model, "seeds": [1, 2]}], "rules": ["gcut"]}))
    code, out, _ = run(capsys, "bench", str(cfg), "--timing")
    assert code == 0 and len(out.strip().splitlines()) == 3 and "runtime_s" in out
    cfg.write_text("{not json")
    assert run(capsys, "bench", str(cfg))[0] == 2


def test_gen(capsys):
    code, out, _ = run(capsys, "gen", "--model", "impartial-culture", "--n", "4", "--m", "3", "--k", "2", "--prob", "1/2", "--seed", "7")
    assert code == 0 and parse_instance(out).n == 4
    assert run(capsys, "gen", "--model", "impartial-culture", "--n", "4", "--m", "3", "--k", "2", "--prob", "1/2", "--seed", "7")[1] == out
    code, out, _ = run(capsys, "gen", "--model", "party-list", "--m", "3", "--k", "2", "--groups", "2:0,1;2:2")
    assert parse_instance(out).approvals == I1.approvals[1:3] + I1.approvals[1:3] or parse_instance(out).n == 4
    assert run(capsys, "gen", "--model", "impartial-culture", "--prob", "3/2")[0] == 3
    assert run(capsys, "gen", "--model", "resampling", "--n", "3", "--m", "3", "--k", "1", "--base", "0", "--phi", "1/3")[0] == 0


def test_exit_codes(files, tmp_path, capsys):
    code, _, err = run(capsys, "check", "missing.json", "(1)", "grp")
    assert code == 2 and json.loads(err)["error"] == "parse"
    bad = tmp_path / "bad.json"
    bad.write_text('{"k":2,"m":3,"voters":[[5]]}')
    assert run(capsys, "solve", str(bad), "--rule", "gcut")[0] == 2
    assert run(capsys, "check", files["i1"], "(1,1/2)", "grp")[0] == 3
    assert run(capsys, "check", files["i1"], "(1,1/2,1/2,0)", "grp")[0] == 3
    assert run(capsys, "solve", files["i1"], "--rule", "nash")[0] == 2
