import json
import subprocess
import sys
from pathlib import Path

import pytest

from patchlab import cli

DOCS = Path(__file__).resolve().parent.parent / "docs" / "instances"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "machine")
    return code, json.loads(out)


def write(tmp_path, doc, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def test_axioms_on_s3_int_aut(capsys):
    code, rep = run_json(capsys, DOCS / "axioms_s3.json")
    assert code == 0
    assert rep["schema"] == "patchlab-report/1" and rep["task"] == "axioms"
    assert rep["result"]["valid"] and rep["result"]["summary"] == "valid crossed module"


def test_peiffer_failure_is_a_verdict_not_an_error(capsys):
    code, rep = run_json(capsys, DOCS / "peiffer_s3.json")
    assert code == 0 and not rep["result"]["valid"]
    peiffer = [x for x in rep["result"]["axioms"] if x["axiom"].startswith("Peiffer")][0]
    assert peiffer["witness"] is not None


def test_classify_bitorsors_c3(capsys):
    code, rep = run_json(capsys, DOCS / "bitorsors_c3.json")
    assert code == 0 and rep["result"]["count"] == 2 and rep["result"]["agree"]


def test_malformed_table_exits_2_with_witness(capsys):
    code, rep = run_json(capsys, DOCS / "malformed.json")
    assert code == 2
    assert rep["status"] == "error" and rep["error"] == "NoInverse"
    assert rep["detail"]["witness"] == [1] and rep["detail"]["location"] == "$.groups.G"


def test_unresolved_reference_and_bad_json_exit_2(capsys, tmp_path):
    code, rep = run_json(capsys, write(tmp_path, {"schema": "patchlab-instance/1", "task": "h0",
                                                  "params": {"gammaGroup": "nope"}}))
    assert code == 2 and rep["detail"]["location"]
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, rep = run_json(capsys, bad)
    assert code == 2 and rep["error"] == "InvalidInput"


def test_order_cap_exits_3(capsys):
    code, rep = run_json(capsys, DOCS / "axioms_s3.json", "--limit-order", 3)
    assert code == 3 and rep["error"] == "ResourceLimit"


def test_check_promotes_failures(capsys, tmp_path, monkeypatch):
    monkeypatch.setitem(cli.HANDLERS, "h0", lambda inst, opts: ({"stub": True}, [{"theorem": "stub"}]))
    doc = write(tmp_path, {"schema": "patchlab-instance/1", "task": "h0", "params": {"group": "C2"}})
    assert run(capsys, doc)[0] == 0
    assert run(capsys, doc, "--check")[0] == 1


@pytest.mark.parametrize("name", sorted(p.name for p in DOCS.glob("*.json")))
def test_reports_are_byte_identical(capsys, name):
    first = run(capsys, DOCS / name, "--format", "machine")
    second = run(capsys, DOCS / name, "--format", "machine")
    assert first == second


@pytest.mark.parametrize("name", ["bitorsors_c3.json", "center_c2s3.json", "factorize_subgroup.json",
                                  "mv_klein_c3.json", "axioms_s3.json"])
def test_verify_report_round_trip(capsys, tmp_path, name):
    code, out = run(capsys, DOCS / name, "--format", "machine")
    saved = tmp_path / "report.json"
    saved.write_text(out)
    assert run(capsys, DOCS / name, "--verify-report", saved)[0] == 0


def test_verify_report_catches_tampering(capsys, tmp_path):
    code, rep = run_json(capsys, DOCS / "factorize_subgroup.json")
    rep["result"]["witness"]["v0"]["class"] = 1 - rep["result"]["witness"]["v0"]["class"]
    saved = write(tmp_path, rep, "report.json")
    assert run(capsys, DOCS / "factorize_subgroup.json", "--verify-report", saved)[0] == 1


def test_edge_op_switch_is_recorded(capsys):
    code, rep = run_json(capsys, DOCS / "factorize_subgroup.json", "--edge-op", "opposite")
    assert code == 0 and rep["conventions"]["edge_op"] == "opposite"


def test_smoke_suite_and_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "patchlab", "--seed-suite", "smoke", "--check",
                           "--format", "machine"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout[-2000:]
    rep = json.loads(proc.stdout)
    assert rep["result"]["all_hold"] and rep["result"]["count"] > 0
