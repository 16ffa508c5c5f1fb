import json
import subprocess
import sys

import pytest

from modbrace.brace_core import Brace, brace_to_document
from modbrace.cli import EXIT_DEFECT, EXIT_INPUT, EXIT_OK, main
from modbrace.module_core import FiniteModule


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def trivial_doc(tmp_path):
    path = tmp_path / "trivial.json"
    path.write_text(json.dumps(brace_to_document(Brace.trivial(FiniteModule([4, 2])))))
    return path


def test_verify_trivial(capsys, trivial_doc):
    code, rec = run_json(capsys, "verify", trivial_doc)
    assert code == EXIT_OK and rec["classification"] == "D-brace"


def test_verify_tampered(capsys, tmp_path, two_z8):
    doc = brace_to_document(two_z8)
    doc["gamma"][1] = doc["gamma"][0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, rec = run_json(capsys, "verify", path)
    assert code == EXIT_DEFECT and rec["counterexample"] is not None


def test_verify_malformed(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"module": {"moduli": [4]}, "gamma": [0]}')
    assert run(capsys, "verify", path)[0] == EXIT_INPUT
    path.write_text("not json")
    assert run(capsys, "verify", path)[0] == EXIT_INPUT
    assert run(capsys, "verify", tmp_path / "missing.json")[0] == EXIT_INPUT


def test_unknown_flags_rejected(capsys):
    assert main(["verify", "x.json", "--bogus"]) == EXIT_INPUT
    assert main(["frobnicate"]) == EXIT_INPUT
    capsys.readouterr()


def test_enumerate(capsys, tmp_path):
    code, rec = run_json(capsys, "enumerate", "--ring", "2,2,1", "--exponents", "2")
    assert code == EXIT_OK and rec["backtracking"]["count"] == 2 and rec["agree"]
    code, rec = run_json(capsys, "enumerate", "--ring", "2,1,1", "--exponents", "1")
    assert rec["holomorph"]["count"] == 1
    out = tmp_path / "z9.jsonl"
    code, rec = run_json(capsys, "enumerate", "--ring", "3,2,1", "--exponents", "2", "--out", out,
                         "--classes")
    assert code == EXIT_OK and rec["classes"] == 2
    assert len(out.read_text().splitlines()) == 3
    summary = json.loads((tmp_path / "z9.jsonl.summary.json").read_text())
    assert summary["count"] == 3


def test_enumerate_budget(capsys):
    code, rec = run_json(capsys, "enumerate", "--ring", "2,1,1", "--exponents", "1,1,1",
                         "--budget", "5")
    assert code == EXIT_INPUT and not rec["backtracking"]["complete"]


def test_enumerate_bad_ring(capsys):
    assert run(capsys, "enumerate", "--ring", "4,1,1", "--exponents", "1")[0] == EXIT_INPUT


def test_theorem_corpus(capsys, tmp_path):
    out = tmp_path / "z9.jsonl"
    run(capsys, "enumerate", "--ring", "3,2,1", "--exponents", "2", "--out", out)
    code, rec = run_json(capsys, "theorem", out)
    assert code == EXIT_OK and rec["summary"]["defect"] == 0 and rec["summary"]["confirmed"] == 3


def test_radical_and_theorem(capsys, tmp_path):
    doc = tmp_path / "two_z8.json"
    code, rec = run_json(capsys, "radical", "multiples:8,2", "--out", doc)
    assert code == EXIT_OK and rec["nilpotency_index"] == 3 and rec["two_sided"]
    assert rec["adjoint_comparison"]["circle_stats"] == {"1": 1, "2": 3}
    code, rec = run_json(capsys, "theorem", doc)
    assert code == EXIT_OK and rec["reports"][0]["verdict"] == "out-of-hypothesis"
    code, rec = run_json(capsys, "series", doc)
    assert rec["series"][0]["left"]["orders"] == [4, 2, 1]


def test_radical_galois(capsys, tmp_path):
    doc = tmp_path / "gr.json"
    code, rec = run_json(capsys, "radical", "galois-ideal:3,3,2,1", "--out", doc)
    assert code == EXIT_OK and rec["adjoint_comparison"]["rank_D"] == 1
    code, rec = run_json(capsys, "theorem", doc)
    assert code == EXIT_OK and rec["reports"][0]["hypothesis_holds"]


def test_radical_errors(capsys):
    assert run(capsys, "radical", "nonsense:1")[0] == EXIT_INPUT
    assert run(capsys, "radical", "multiples:8")[0] == EXIT_INPUT


def test_split(capsys, tmp_path):
    doc = tmp_path / "r.json"
    run(capsys, "radical", "multiples:8,2", "--out", doc)
    code, rec = run_json(capsys, "split", doc)
    assert code == EXIT_OK and rec["split"][0]["summand_orders"] == [4]


@pytest.mark.parametrize("name", ["gaussian", "galois-gain", "sylow-split"])
def test_demos(capsys, tmp_path, name):
    code, rec = run_json(capsys, "demo", name, "--out", tmp_path)
    assert code == EXIT_OK
    doc = rec["document"]
    assert run(capsys, "verify", doc)[0] == EXIT_OK


def test_demo_contents(capsys, tmp_path):
    _, rec = run_json(capsys, "demo", "gaussian", "--out", tmp_path)
    assert rec["gamma_(1,0)_is_minus_id"] and rec["S-linear"]
    _, rec = run_json(capsys, "demo", "galois-gain", "--out", tmp_path)
    assert (rec["rank_D"], rec["rank_Z"]) == (1, 2)
    assert rec["D_hypothesis"] and not rec["Z_hypothesis"]
    _, rec = run_json(capsys, "demo", "sylow-split", "--out", tmp_path)
    assert rec["summand_orders"] == [3, 4] and all(rec["ideals"])


def test_table_truncation(capsys, tmp_path):
    out = tmp_path / "c.jsonl"
    run(capsys, "enumerate", "--ring", "2,1,1", "--exponents", "1,1,1", "--out", out)
    code, text = run(capsys, "theorem", out)
    assert code == EXIT_OK and "more" in text


def test_module_entry_point(tmp_path, trivial_doc):
    proc = subprocess.run([sys.executable, "-m", "modbrace", "verify", str(trivial_doc)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "D-brace" in proc.stdout
