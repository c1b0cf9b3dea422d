import json

import pytest

from hopflattice.cli import (EXIT_CONFIG, EXIT_FAIL, EXIT_OK, SCHEMA, RunConfig, main,
                             parse_algebra, run)
from hopflattice.errors import SpecError
from hopflattice.hopf import verify_hopf_axioms


def invoke(capsys, *args):
    code = main(list(args))
    return code, json.loads(capsys.readouterr().out)


def test_verify_axioms_s3(capsys):
    code, rep = invoke(capsys, "verify", "--suite", "axioms", "--algebra", "group:S3")
    assert code == EXIT_OK
    assert rep["schema"] == SCHEMA and rep["status"] == "ok"
    assert rep["suites"]["axioms"]["passed"]
    assert "residuals" in rep["suites"]["axioms"]


def test_ground_dim_tetrahedron(capsys):
    code, rep = invoke(capsys, "ground-dim", "--surface", "sphere:tetrahedron",
                       "--algebra", "group:Z2")
    assert code == EXIT_OK
    assert rep["ground_dim"] == 1 and rep["state_dim"] == 64
    for key in ("surface", "algebra", "residuals", "elapsed_ms"):
        assert key in rep


def test_ground_dim_with_brute(capsys):
    code, rep = invoke(capsys, "ground-dim", "--surface", "torus:square-1v",
                       "--algebra", "function:S3", "--brute")
    assert code == EXIT_OK and rep["ground_dim"] == rep["brute_ground_dim"] == 8


def test_malformed_surface_exit_2(capsys):
    code, rep = invoke(capsys, "ground-dim", "--surface", "sphere:dodecagon")
    assert code == EXIT_CONFIG
    assert rep["status"] == "config_error" and "dodecagon" in rep["error"]


@pytest.mark.parametrize("args", [
    ["verify", "--algebra", "group"],
    ["verify", "--algebra", "ring:Z2"],
    ["verify", "--algebra", "group:Q9"],
    ["verify", "--tol-op", "-1"],
    ["verify", "--suite", "nonsense"],
    ["protected", "--surface", "torus:square-1v", "--sites", "auto:1", "--labels", "0,1"],
])
def test_config_errors(capsys, args):
    assert main(args) == EXIT_CONFIG


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("HOPFLATTICE_SEED", "0x2A")
    _, rep = invoke(capsys, "wedderburn", "--algebra", "group:S3")
    assert rep["config"]["seed"] == 42
    _, rep = invoke(capsys, "wedderburn", "--algebra", "group:S3", "--seed", "7")
    assert rep["config"]["seed"] == 7
    monkeypatch.setenv("HOPFLATTICE_SEED", "banana")
    assert main(["wedderburn"]) == EXIT_CONFIG


def test_run_missing_raw_file():
    code, rep = run(RunConfig("verify", algebra="raw:/nonexistent.json"))
    assert code == EXIT_CONFIG and rep["exit_code"] == EXIT_CONFIG


def test_failing_check_reports_exit_1(tmp_path, capsys):
    from hopflattice.hopf import hopf_to_dict
    H = parse_algebra("group:Z3")
    data = hopf_to_dict(H)
    data["antipode"] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, rep = invoke(capsys, "verify", "--suite", "axioms", "--algebra", f"raw:{path}")
    assert code == EXIT_FAIL
    assert rep["status"] == "check_failed"
    assert rep["suites"]["axioms"]["residuals"]["antipode"] > 0.5


def test_composable_algebra_specs():
    assert parse_algebra("double:group:Z2").dim == 4
    assert parse_algebra("dual:function:S3").dim == 6
    assert parse_algebra("double:dual:group:Z3").dim == 9
    for spec in ("double:group:Z2", "dual:group:S3", "function:D4"):
        assert verify_hopf_axioms(parse_algebra(spec)).ok()
    with pytest.raises(SpecError):
        parse_algebra("double:")


def test_cayley_file_spec(tmp_path):
    path = tmp_path / "z2.txt"
    path.write_text("2\n0 1\n1 0\n")
    assert parse_algebra(f"group:{path}").dim == 2


def test_protected_report(capsys):
    code, rep = invoke(capsys, "protected", "--surface", "torus:square-1v", "--algebra",
                       "group:Z2", "--sites", "auto:1", "--labels", "all")
    assert code == EXIT_OK
    assert rep["L_dim"] == 4 and rep["consistency_ok"]
    assert [r["dim_M"] for r in rep["protected"]] == [4, 0, 0, 0]
    code, rep = invoke(capsys, "protected", "--surface", "sphere:tetrahedron", "--algebra",
                       "group:Z2", "--sites", "auto:1", "--labels", "0")
    assert code == EXIT_OK
    assert rep["dim_M"] == rep["route_a"] == rep["route_b"] == 1
    assert rep["labels"] == [0]


def test_wedderburn_and_double(capsys):
    _, rep = invoke(capsys, "wedderburn", "--algebra", "group:S3")
    assert [b["dim"] for b in rep["blocks"]] == [1, 1, 2] and rep["total"] == 6
    code, rep = invoke(capsys, "double", "--algebra", "group:Z2")
    assert code == EXIT_OK
    assert rep["dim"] == 4 and len(rep["blocks"]) == 4
    assert rep["haar_consistency_residual"] < 1e-10
    assert rep["quasitriangularity_residual"] < 1e-10


@pytest.mark.parametrize("suite", ["commutation", "duality", "orientation", "haar"])
def test_verify_model_suites(capsys, suite):
    code, rep = invoke(capsys, "verify", "--suite", suite, "--algebra", "group:Z2",
                       "--surface", "torus:grid-2x2")
    assert code == EXIT_OK, rep


@pytest.mark.parametrize("oracle,algebra,surface", [
    ("commuting-pairs", "group:S3", "sphere:bigon"),
    ("brute-ground-dim", "group:Z3", "torus:square-1v"),
    ("haar", "dual:group:S3", "sphere:bigon"),
    ("haar", "function:Z3", "sphere:bigon"),
])
def test_oracle_commands(capsys, oracle, algebra, surface):
    code, rep = invoke(capsys, "oracle", oracle, "--algebra", algebra, "--surface", surface)
    assert code == EXIT_OK and rep["match"]


def test_output_file_and_determinism(tmp_path, capsys):
    out = tmp_path / "r.json"
    args = ["protected", "--surface", "torus:square-1v", "--algebra", "group:Z3",
            "--sites", "auto:1", "--labels", "all", "--out", str(out)]
    main(args)
    first = json.loads(out.read_text())
    main(args)
    second = json.loads(out.read_text())
    capsys.readouterr()
    first.pop("elapsed_ms")
    second.pop("elapsed_ms")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
