import json
from pathlib import Path

import pytest

from supergeo import io
from supergeo.cli import run

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def report_ok(doc, schema="report"):
    io.check_schema(doc, schema)


def test_classify_n11(capsys):
    code, doc, _ = call(capsys, "classify", "--model", "N11")
    assert code == 0
    assert doc["tag"] == "SemiOrientable" and doc["components"] == 2
    assert doc["body_orientable"] is True and doc["bundle_orientable"] is False
    report_ok(doc)


def test_euler_pi_grassmannian(capsys):
    code, doc, _ = call(capsys, "euler", "--model", "pi-grassmannian:1,3")
    assert code == 0 and doc["euler_pair"] == [3, 3]
    report_ok(doc)


def test_missing_model_is_usage_error(capsys):
    code, doc, _ = call(capsys, "classify", "--model", "missing")
    assert code == 2
    assert set(doc) == {"error", "context"}
    report_ok(doc)


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["classify"], ["classify", "--model", "N11", "--sign-tol", "-1"],
    ["intersect", "job.json", "--grid-density", "1"], ["euler"],
    ["grassmannian", "--k", "1", "--l", "0", "--m", "2", "--n", "1", "--pi"],
])
def test_bad_usage_exits_2_with_json(capsys, argv):
    code, doc, _ = call(capsys, *argv)
    assert code == 2 and "error" in doc


def test_registry_lists_models(capsys):
    code, doc, _ = call(capsys, "registry")
    assert code == 0 and {"N11", "K21", "S21", "C32", "S1_trivial", "T2_pi"} <= set(doc["models"])


def test_validate(capsys):
    code, doc, _ = call(capsys, "validate", "--model", "grassmannian:1,1,2,2")
    assert code == 0 and doc["ok"]
    report_ok(doc)


def test_validate_failure_exits_1(capsys, tmp_path):
    doc = io.model_to_json(io.resolve_model("N11"))
    doc["transitions"][0]["components"][0] = "x1 + 0.1"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, rep, _ = call(capsys, "validate", "--model", str(path))
    assert code == 1 and not rep["ok"]


def test_intersect_job(capsys):
    code, doc, _ = call(capsys, "intersect", str(JOBS / "double_wrap.json"))
    assert code == 0 and doc["pair"] == [2, 2] and doc["transversal"]
    report_ok(doc)


def test_euler_job(capsys):
    code, doc, _ = call(capsys, "euler", str(JOBS / "sphere_euler.json"))
    assert code == 0 and doc["euler_pair"] == [2, 2] and len(doc["zeros"]) == 2


def test_degenerate_field_exits_1(capsys, tmp_path):
    job = {"model": "pi-grassmannian:1,2",
           "vector_field": {"U1": ["x1^2 - x2^2", "2*x1*x2"], "U2": ["-1 + 0*x1", "0*x2"]}}
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    code, doc, _ = call(capsys, "euler", str(path))
    assert code == 1 and doc["context"]["type"] == "DegeneracyError"


def test_schema_violation_has_pointer(capsys, tmp_path):
    job = json.loads((JOBS / "double_wrap.json").read_text())
    del job["morphism"]["source"]
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    code, doc, _ = call(capsys, "intersect", str(path))
    assert code == 2 and doc["context"]["pointer"] == "/morphism"


def test_unreadable_job(capsys, tmp_path):
    code, doc, _ = call(capsys, "intersect", str(tmp_path / "nothing.json"))
    assert code == 2 and "cannot read" in doc["error"]


def test_output_is_byte_identical(capsys):
    outs = [call(capsys, "intersect", str(JOBS / "double_wrap.json"))[2] for _ in range(2)]
    assert outs[0] == outs[1]
    gens = [call(capsys, "grassmannian", "--k", "1", "--l", "1", "--m", "3", "--n", "3", "--pi")[2]
            for _ in range(2)]
    assert gens[0] == gens[1]


def test_grassmannian_emit_and_reuse(capsys, tmp_path):
    target = tmp_path / "gr.json"
    code, doc, _ = call(capsys, "grassmannian", "--k", "1", "--l", "1", "--m", "2", "--n", "2",
                        "--pi", "--emit", str(target))
    assert code == 0 and json.loads(target.read_text()) == doc
    report_ok(doc, "model")
    code, rep, _ = call(capsys, "classify", "--model", str(target))
    assert code == 0 and rep["tag"] == "Orientable"


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "r.json"
    assert run(["classify", "--model", "K21", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(target.read_text())
    assert doc["body_orientable"] is False and doc["bundle_orientable"] is True


def test_tolerance_flags_override(capsys):
    code, doc, _ = call(capsys, "intersect", str(JOBS / "double_wrap.json"),
                        "--newton-tol", "1e-12", "--sign-tol", "1e-7", "--grid-density", "16")
    assert code == 0 and doc["newton_tol"] == 1e-12 and doc["sign_tol"] == 1e-7
