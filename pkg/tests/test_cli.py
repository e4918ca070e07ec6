import json

import pytest

from clifop.cli import main
from clifop.maxwell import MaxwellSolution
from clifop.polyfun import CliffordPolynomial, WeightedFunction


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_suite_exit_zero(capsys):
    code, out, _ = run(["verify", "--suite", "core_relations", "--n", "3", "--degree", "5"], capsys)
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 15 and all(x["verdict"] == "zero" for x in lines)


def test_verify_expression_zero(capsys):
    code, _, _ = run(["verify", "--expr", "[Gamma, X^2]", "--n", "4", "--degree", "4"], capsys)
    assert code == 0


def test_verify_failure_exit_one_with_witness(capsys):
    code, out, _ = run(["verify", "--expr", "[E,X]+X", "--n", "2", "--degree", "2"], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["witness"] == "1" and data["image"]


@pytest.mark.parametrize("argv", [
    ["verify", "--expr", "[E,X", "--n", "2"],
    ["verify", "--n", "2"],
    ["verify", "--expr", "X", "--n", "0"],
    ["nonsense"],
    ["decompose", "--in", "/nonexistent/file.json"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_malformed_json_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["ck-extend", "--in", str(bad)], capsys)
    assert code == 2 and "malformed JSON" in err


def test_degree_bound_env_override(monkeypatch, capsys):
    monkeypatch.setenv("CLIFOP_DEGREE", "2")
    _, out, _ = run(["verify", "--expr", "[E,X]-X", "--n", "2"], capsys)
    assert json.loads(out)["bound"] == 2
    monkeypatch.setenv("CLIFOP_DEGREE", "two")
    code, _, _ = run(["verify", "--expr", "[E,X]-X", "--n", "2"], capsys)
    assert code == 2


def test_threads_do_not_change_output(monkeypatch, capsys):
    argv = ["verify", "--suite", "osp12", "--n", "2", "--degree", "3"]
    _, serial, _ = run(argv, capsys)
    monkeypatch.setenv("CLIFOP_THREADS", "2")
    _, parallel, _ = run(argv, capsys)
    assert serial == parallel


def test_markdown_report(capsys):
    code, out, _ = run(["verify", "--suite", "core_relations", "--n", "2", "--degree", "2", "--report", "md"], capsys)
    assert code == 0
    assert out.startswith("| identity |")
    assert out.count("\n") == 17


def test_gen_hermite_round_trip(tmp_path, capsys):
    out = tmp_path / "h.json"
    assert run(["gen-hermite", "--n", "2", "--k", "3", "--out", str(out)], capsys)[0] == 0
    data = json.loads(out.read_text())
    assert len(data["states"]) == 4
    first = WeightedFunction.from_json(data["states"][1]["raw"])
    assert first.envelope == -0.5 and first.poly == CliffordPolynomial.vector_variable(2).scale(2)
    assert [r["ratio"] for r in data["ratios"]] == [str(r["lowering_factor"]) for r in data["ratios"]]


def test_gen_maxwell_round_trip_and_numeric(tmp_path, capsys):
    out = tmp_path / "m.json"
    argv = ["gen-maxwell", "--n", "3", "--s", "2", "--numeric", "--lambda", "1.0", "--points", "5", "--out", str(out)]
    assert run(argv, capsys)[0] == 0
    data = json.loads(out.read_text())
    sol = MaxwellSolution.from_json(data)
    assert sol.s == 2 and sol.rho_sq == 7
    assert set(data["numeric"]) >= {"samples", "max_pde_residual", "max_eigen_residual"}


def test_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run(["gen-maxwell", "--n", "2", "--s", "1", "--numeric", "--points", "3", "--out", str(path)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_decompose_and_ck_extend(tmp_path, capsys):
    src = tmp_path / "p.json"
    src.write_text(json.dumps(CliffordPolynomial.monomial((2, 1), 1).to_json()))
    code, out, _ = run(["decompose", "--in", str(src), "--full"], capsys)
    assert code == 0
    parts = [CliffordPolynomial.from_json(p) for p in json.loads(out)["parts"]]
    assert len(parts) == 4
    code, out, _ = run(["ck-extend", "--in", str(src)], capsys)
    assert code == 0 and json.loads(out)["residual_zero"] is True


def test_eval_samples_stored_function(tmp_path, capsys):
    src = tmp_path / "p.json"
    src.write_text(json.dumps(CliffordPolynomial.constant(2).to_json()))
    code, out, _ = run(["eval", "--in", str(src), "--points", "3"], capsys)
    assert code == 0
    samples = json.loads(out)["numeric"]["samples"]
    assert len(samples) == 3 and all(s["value"]["0"] == 1.0 for s in samples)
