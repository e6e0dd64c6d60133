import json
from pathlib import Path

import jsonschema
import pytest

from uqcanon.cli import main

SCHEMAS = Path(__file__).resolve().parent.parent / "schemas"


def _validate(path, schema):
    doc = json.loads(Path(path).read_text())
    jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
    return doc


def _run(tmp_path, *args):
    out = tmp_path / "out"
    rc = main([*args, "--out", str(out)])
    return rc, out


def test_dims(tmp_path):
    rc, out = _run(tmp_path, "dims", "--cartan", "A2", "--max-height", "4")
    assert rc == 0
    doc = _validate(out / "dims.json", "dims")
    assert (out / "dims.csv").exists() and (out / "dims.png").exists()
    assert doc


def test_verify_a2(tmp_path):
    rc, out = _run(tmp_path, "verify", "--cartan", "A2", "--max-height", "4", "--no-figures")
    assert rc == 0
    doc = _validate(out / "verify.json", "verify")
    assert doc["passed"] and doc["sections"]["graph_structure"]["order_independent"]


def test_verify_a3_fails_on_positivity(tmp_path, capsys):
    rc, out = _run(tmp_path, "verify", "--cartan", "A3", "--max-height", "5", "--no-figures")
    assert rc == 1
    doc = _validate(out / "verify.json", "verify")
    failed = [k for k, s in doc["sections"].items() if not s["passed"]]
    assert failed == ["characterization"]
    _validate(out / "failure.json", "failure")
    assert "verification failed" in capsys.readouterr().err
    rc, out2 = _run(tmp_path / "r", "verify", "--cartan", "A3", "--max-height", "5", "--no-figures", "--positivity", "report")
    assert rc == 0


def test_canonical_and_transition(tmp_path):
    rc, out = _run(tmp_path, "canonical", "--cartan", "A2", "--max-height", "3")
    assert rc == 0
    _validate(out / "canonical.json", "canonical")
    rc, out = _run(tmp_path, "transition", "--cartan", "A2", "--max-height", "3", "--weight", "1,2")
    assert rc == 0
    doc = _validate(out / "transition.json", "transition")
    rows = (out / "transition" / "1-2.csv").read_text().splitlines()
    assert len(rows) == 3
    assert doc


def test_crystal_and_export(tmp_path, capsys):
    rc, out = _run(tmp_path, "crystal", "--cartan", "A1-double-bond", "--max-height", "3")
    assert rc == 0
    _validate(out / "graph.json", "graph")
    _validate(out / "lemma_suite.json", "lemma_suite")
    assert (out / "graph.dot").read_text().startswith("digraph")
    capsys.readouterr()
    assert main(["export", "--cartan", "A1", "--max-height", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["vertices"]) == 4


def test_blambda(tmp_path):
    rc, out = _run(tmp_path, "blambda", "--cartan", "A2", "--max-height", "6", "--bound", "2,2")
    assert rc == 0
    doc = _validate(out / "blambda.json", "blambda")
    assert doc["total_dimension"] == doc["oracle_total"] == 8
    assert doc["complete"] and doc["mismatches"] == []


@pytest.mark.parametrize(
    "args",
    [
        ["dims", "--cartan", "B7"],
        ["blambda", "--cartan", "A2", "--bound", "0,2"],
        ["export", "--cartan", "A2", "--format", "svg"],
        ["dims", "--cartan", "A2", "--order", "1,1"],
        ["canonical", "--cartan", "A2", "--max-height", "2", "--weight", "3,3"],
        ["dims", "--cartan", "A2", "--order", "x"],
    ],
)
def test_config_errors(tmp_path, args):
    assert main([*args, "--out", str(tmp_path)]) == 2


def test_outputs_byte_identical(tmp_path):
    digests = []
    for k, extra in enumerate([[], ["--jobs", "2", "--cache-dir", str(tmp_path / "c")], ["--cache-dir", str(tmp_path / "c")]]):
        out = tmp_path / f"o{k}"
        assert main(["verify", "--cartan", "A2", "--max-height", "4", "--out", str(out), *extra]) == 0
        assert main(["transition", "--cartan", "A2", "--max-height", "4", "--out", str(out), *extra]) == 0
        digests.append({p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
    assert digests[0] == digests[1] == digests[2]


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("UQCANON_CACHE_DIR", str(tmp_path / "envcache"))
    assert main(["dims", "--cartan", "A1", "--max-height", "2", "--out", str(tmp_path / "o")]) == 0
    assert list((tmp_path / "envcache").rglob("*.json"))
