"""End-to-end tests for the command line interface."""

import json

import numpy as np
import pytest

from mubkit.cli import EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_UNSUPPORTED, main
from mubkit.matcore import matrix_from_json


@pytest.fixture(autouse=True)
def isolated_tolerance(monkeypatch):
    monkeypatch.delenv("MUBKIT_TOL", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_mub_builtin_export_and_verify(tmp_path, capsys):
    out = tmp_path / "fam"
    code, data = run_json(capsys, "mub", "--dim", "3", "--out", str(out))
    assert code == EXIT_PASS
    assert data["pass"] is True
    assert data["bases"] == ["B1", "B2", "B3", "B4"]
    assert (out / "family.json").exists()
    assert sorted(p.name for p in out.glob("basis_*.json")) == [
        "basis_B1.json", "basis_B2.json", "basis_B3.json", "basis_B4.json"]
    manifest = json.loads((out / "family.json").read_text())
    assert manifest == {"dim": 3, "bases": ["B1", "B2", "B3", "B4"],
                        "convention": "m-descending"}
    code, data = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_PASS
    assert data["pass"] is True
    assert {c["check"] for c in data["checks"]} == {
        "member_count", "orthonormality", "unbiasedness"}
    for check in data["checks"]:
        assert set(check) == {"check", "worst_deviation", "pass"}


def test_mub_generated_prime(capsys):
    code, data = run_json(capsys, "mub", "--dim", "7", "--source", "generated")
    assert code == EXIT_PASS
    assert len(data["bases"]) == 8


def test_mub_dimension_six_is_structured_refusal(capsys):
    code, data = run_json(capsys, "mub", "--dim", "6")
    assert code == EXIT_UNSUPPORTED
    assert data["error"] == "unsupported"
    assert data["dim"] == 6
    assert "no complete MUB family known" in data["message"]


def test_mub_generated_rejects_non_prime(capsys):
    code, data = run_json(capsys, "mub", "--dim", "4", "--source", "generated")
    assert code == EXIT_UNSUPPORTED
    assert data["dim"] == 4


def test_verify_catches_tampered_basis(tmp_path, capsys):
    out = tmp_path / "fam"
    run_json(capsys, "mub", "--dim", "3", "--out", str(out))
    target = out / "basis_B2.json"
    data = json.loads(target.read_text())
    data["data"][0][0]["re"] += 5e-4
    target.write_text(json.dumps(data))
    code, report = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_FAIL
    failing = {c["check"] for c in report["checks"] if not c["pass"]}
    assert "orthonormality" in failing and "unbiasedness" in failing
    # a loose tolerance accepts the same files
    code, report = run_json(capsys, "--tol", "0.01", "verify", "--in", str(out))
    assert code == EXIT_PASS


def test_verify_tolerance_from_environment(tmp_path, capsys, monkeypatch):
    out = tmp_path / "fam"
    run_json(capsys, "mub", "--dim", "3", "--out", str(out))
    target = out / "basis_B3.json"
    data = json.loads(target.read_text())
    data["data"][1][1]["im"] += 5e-4
    target.write_text(json.dumps(data))
    monkeypatch.setenv("MUBKIT_TOL", "0.01")
    code, _ = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_PASS
    monkeypatch.setenv("MUBKIT_TOL", "not-a-number")
    code, report = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_UNSUPPORTED
    assert report["error"] == "invalid"


def test_invalid_tolerance_flag(capsys):
    code, data = run_json(capsys, "--tol", "-1", "mub", "--dim", "2")
    assert code == EXIT_UNSUPPORTED
    assert data["error"] == "invalid"


def test_verify_missing_directory_contents(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, data = run_json(capsys, "verify", "--in", str(empty))
    assert code == EXIT_IO
    assert data["error"] == "io"


def test_verify_malformed_json(tmp_path, capsys):
    out = tmp_path / "fam"
    run_json(capsys, "mub", "--dim", "2", "--out", str(out))
    (out / "basis_B2.json").write_text("{broken", encoding="utf-8")
    code, data = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_IO
    assert "basis_B2.json" in data["message"]


def test_operators_export_and_verify(tmp_path, capsys):
    out = tmp_path / "ops"
    code, data = run_json(capsys, "operators", "--dim", "3", "--out", str(out))
    assert code == EXIT_PASS
    assert data["pass"] is True
    assert data["operator_count"] == 8
    manifest = json.loads((out / "operators.json").read_text())
    assert manifest["dim"] == 3
    assert [c["basis_label"] for c in manifest["classes"]] == [
        "B1", "B2", "B3", "B4"]
    for entry in manifest["classes"]:
        assert len(entry["operators"]) == 2
        for name in entry["operators"]:
            assert (out / name).exists()
    assert (out / "verification_report.json").exists()
    code, report = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_PASS
    names = [c["check"] for c in report["checks"]]
    assert names == ["member_count", "orthonormality", "unbiasedness",
                     "hermiticity", "tracelessness", "hs_orthogonality",
                     "within_class_commutation", "eigen_relation",
                     "cross_class_witness", "completeness"]


def test_verify_catches_tampered_operator(tmp_path, capsys):
    out = tmp_path / "ops"
    run_json(capsys, "operators", "--dim", "3", "--out", str(out))
    target = out / "op_B2_k1.json"
    data = json.loads(target.read_text())
    data["data"][0][0]["re"] += 0.25
    target.write_text(json.dumps(data))
    code, report = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_FAIL
    failing = {c["check"] for c in report["checks"] if not c["pass"]}
    assert "eigen_relation" in failing


def test_verify_operators_without_family_is_io_error(tmp_path, capsys):
    out = tmp_path / "ops"
    run_json(capsys, "operators", "--dim", "2", "--out", str(out))
    (out / "family.json").unlink()
    code, data = run_json(capsys, "verify", "--in", str(out))
    assert code == EXIT_IO


def test_operators_dimension_six_refused(capsys):
    code, data = run_json(capsys, "operators", "--dim", "6")
    assert code == EXIT_UNSUPPORTED
    assert "no complete MUB family known" in data["message"]


def test_tensors_export(tmp_path, capsys):
    out = tmp_path / "tens"
    code, data = run_json(capsys, "tensors", "--two-j", "2", "--out", str(out))
    assert code == EXIT_PASS
    manifest = json.loads((out / "tensors.json").read_text())
    assert manifest["two_j"] == 2
    assert len(manifest["entries"]) == 9  # k = 0, 1, 2
    names = {e["file"] for e in manifest["entries"]}
    assert "tensor_k1_qm1.json" in names
    assert "tensor_k2_q2.json" in names
    from mubkit.tensors import spherical_tensor

    for entry in manifest["entries"]:
        matrix = matrix_from_json(json.loads((out / entry["file"]).read_text()))
        want = spherical_tensor(1.0, entry["k"], entry["q"])
        assert np.max(np.abs(matrix - want)) < 1e-15


def test_tensors_single_component(tmp_path, capsys):
    out = tmp_path / "tens"
    code, data = run_json(capsys, "tensors", "--two-j", "3", "--k", "2",
                          "--q", "-2", "--out", str(out))
    assert code == EXIT_PASS
    assert data["files"] == ["tensor_k2_qm2.json", "tensors.json"]


def test_tensors_invalid_rank(tmp_path, capsys):
    out = tmp_path / "tens"
    code, data = run_json(capsys, "tensors", "--two-j", "2", "--k", "9",
                          "--out", str(out))
    assert code == EXIT_UNSUPPORTED


def test_tomo_exact_reconstruction(capsys):
    code, data = run_json(capsys, "tomo", "--dim", "4", "--trials", "3")
    assert code == EXIT_PASS
    assert data["shots"] is None
    assert data["aggregate"]["count"] == 3
    assert data["aggregate"]["max_trace_distance"] < 1e-10


def test_tomo_sampled_run_is_deterministic(capsys):
    args = ("tomo", "--dim", "3", "--shots", "5000", "--trials", "4",
            "--seed", "9")
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == EXIT_PASS
    assert out1 == out2
    data = json.loads(out1)
    assert data["shots"] == 5000
    assert len(data["results"]) == 4
    assert all(r["trace_distance"] > 0 for r in data["results"])


def test_tomo_zero_trials(capsys):
    code, data = run_json(capsys, "tomo", "--dim", "2", "--trials", "0")
    assert code == EXIT_PASS
    assert data["results"] == [] and data["aggregate"] is None


def test_tomo_project_flag(capsys):
    code, data = run_json(capsys, "tomo", "--dim", "2", "--shots", "200",
                          "--trials", "2", "--project")
    assert code == EXIT_PASS
    assert all(r["projected"] for r in data["results"])


def test_tomo_invalid_shots(capsys):
    code, data = run_json(capsys, "tomo", "--dim", "3", "--shots", "many")
    assert code == EXIT_UNSUPPORTED
    code, data = run_json(capsys, "tomo", "--dim", "3", "--shots", "-5")
    assert code == EXIT_UNSUPPORTED


def test_tomo_dimension_six_refused(capsys):
    code, data = run_json(capsys, "tomo", "--dim", "6")
    assert code == EXIT_UNSUPPORTED
    assert "no complete MUB family known" in data["message"]


def test_tables_contains_reference_blocks(capsys):
    code, out = run(capsys, "tables")
    assert code == EXIT_PASS
    assert "alpha_3" in out
    assert "-i*w/sqrt(2)" in out
    assert "beta_1" in out and "3/sqrt(5)" in out
    assert "gamma_24" in out
    dim5 = out.split("== dimension 5 ==")[1]
    assert dim5.count("basis B") == 6
    # deterministic output
    code2, out2 = run(capsys, "tables")
    assert out2 == out


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_missing_required_argument_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["mub"])
    assert err.value.code == 2
