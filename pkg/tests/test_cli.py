import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from pantsdec.cli import BAD, FALSE, OK, labeled_document, main
from pantsdec.fixtures import FIXTURES

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_triangle(capsys):
    code, out, _ = run(capsys, "check", FIX / "triangle.json")
    assert code == OK
    rep = json.loads(out)
    assert rep["ok"] and rep["schema_version"] == 1


def test_check_monogon(capsys):
    code, out, _ = run(capsys, "check", FIX / "monogon.json")
    assert code == FALSE
    rep = json.loads(out)
    assert not rep["ok"] and rep["face_violations"][0]["face"] == 0


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_stored_fixtures_match_builders(name):
    X, lab = FIXTURES[name]()
    doc = json.loads((FIX / f"{name}.json").read_text())
    assert doc == json.loads(json.dumps(labeled_document(X, lab)))


def test_validate_and_census(capsys):
    code, out, _ = run(capsys, "validate", FIX / "pi2.json")
    assert code == OK and json.loads(out)["ok"]
    code, out, _ = run(capsys, "census", FIX / "pi2.json")
    rep = json.loads(out)
    assert code == OK and rep["euler"] == 3 and rep["even"]


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check", bad)
    assert code == BAD and "error" in err
    bad.write_text(json.dumps({"vertices": [{"id": 0}]}))
    assert run(capsys, "validate", bad)[0] == BAD
    assert run(capsys, "check", tmp_path / "missing.json")[0] == BAD
    assert run(capsys, "check", FIX / "triangle.json", "--bogus")[0] == BAD
    assert run(capsys, "synth", "a | q")[0] == BAD


def test_check_without_labels(tmp_path, capsys):
    doc = json.loads((FIX / "square.json").read_text())
    del doc["labels"]
    f = tmp_path / "square.json"
    f.write_text(json.dumps(doc))
    assert run(capsys, "check", f)[0] == BAD


def test_label_round_trip(tmp_path, capsys):
    out = tmp_path / "labeled.json"
    assert run(capsys, "label", FIX / "pi2.json", "--out", out)[0] == OK
    assert run(capsys, "check", out)[0] == OK


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", FIX / "square.json")
    rep = json.loads(out)
    assert code == OK and rep["normalized"]["s2xs2"] == 1
    code, out, _ = run(capsys, "classify", FIX / "pentagon.json", "--trace")
    assert code == OK and json.loads(out)["trace"]


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", FIX / "pi2.json")
    rep = json.loads(out)
    assert code == OK
    assert rep["iso_criteria"]["verdict"]
    assert [c["self_intersection"] for c in rep["nodal"]["components"]] == [1, 1, 1, 1]
    code, out, _ = run(capsys, "invariants", FIX / "doubled-pants.json")
    assert not json.loads(out)["iso_criteria"]["verdict"]


def test_synth_and_verify(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "synth", "a,b | abAB", "--out", cert)
    assert code == OK
    assert json.loads(out)["h1"] == "Z^2"
    code, out, _ = run(capsys, "verify", cert)
    assert code == OK and json.loads(out)["ok"]
    doc = json.loads(cert.read_text())
    doc["verdicts"]["euler"] += 1
    cert.write_text(json.dumps(doc))
    assert run(capsys, "verify", cert)[0] == FALSE
    cert.write_text(json.dumps({"kind": "nothing"}))
    assert run(capsys, "verify", cert)[0] == BAD


def test_tropical_sample_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "tropical", "sample", "--n", 1, "--point", "1,1,0.5", "--count", 100,
                     "--out", out)
    assert code == OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["re0", "im0", "re1", "im1", "re2", "im2"]
    assert len(rows) == 101
    for r in rows[1:]:
        v = [float(x) for x in r]
        assert abs(v[0] + v[2] + v[4]) <= 1e-12 and abs(v[1] + v[3] + v[5]) <= 1e-12
    assert run(capsys, "tropical", "sample", "--n", 2, "--point", "1,1,0.5")[0] == BAD


def test_tropical_classify(capsys):
    code, out, _ = run(capsys, "tropical", "classify", "--point", "1,1,1,1")
    rep = json.loads(out)
    assert code == OK and rep["type"] == [0, 2] and rep["fiber"]["base"] == "F2"
    assert run(capsys, "tropical", "classify", "--point", "1,0.5,0")[0] == FALSE
    code, out, _ = run(capsys, "tropical", "project", "--point", "1,0.6,0.3")
    assert json.loads(out)["image"] == pytest.approx([1, 1, 0.5])


def test_tropical_model_matches_fixture(capsys):
    code, out, _ = run(capsys, "tropical", "model")
    rep = json.loads(out)
    doc = json.loads((FIX / "pi2.json").read_text())
    assert code == OK
    assert {k: rep[k] for k in doc} == doc


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", 3, "--kmax", 3)
    assert code == OK and json.loads(out)["count"] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pantsdec", "check", str(FIX / "triangle.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "pantsdec", "check", str(FIX / "monogon.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
