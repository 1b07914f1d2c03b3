import json

import pytest

from rookmonoids.cli import EXIT_BUDGET, EXIT_OK, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_elements_text(capsys):
    code, out, _ = run_cli(capsys, "elements", "--family", "or", "--n", "4")
    assert code == EXIT_OK
    assert "OR_4: 37 elements" in out
    assert "rank 2: 16" in out


def test_elements_json(capsys):
    code, out, _ = run_cli(capsys, "elements", "--family", "sr", "--n", "4",
                           "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["size"] == 57
    assert len(payload["elements"]) == 57


def test_elements_budget_refusal(capsys):
    code, _, err = run_cli(capsys, "elements", "--family", "r", "--n", "8")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_elements_rejects_odd_degree(capsys):
    code, _, err = run_cli(capsys, "elements", "--n", "3")
    assert code == EXIT_BUDGET
    assert "even" in err


def test_green_counts(capsys):
    code, out, _ = run_cli(capsys, "green", "--family", "or", "--n", "4")
    assert code == EXIT_OK
    assert "J-classes: 5" in out
    code, out, _ = run_cli(capsys, "green", "--family", "or", "--n", "6")
    assert "H-classes: 214" in out


def test_green_json_reports_discrepancy(capsys):
    code, out, _ = run_cli(capsys, "green", "--family", "or", "--n", "4",
                           "--format", "json")
    payload = json.loads(out)
    kinds = [d["kind"] for d in payload["discrepancies"]]
    assert kinds == ["rank_m_d_class_size"]
    assert payload["formulas"]["j_class_count"] == 5


def test_green_dot(capsys):
    code, out, _ = run_cli(capsys, "green", "--family", "or", "--n", "4",
                           "--format", "dot")
    assert code == EXIT_OK
    assert out.startswith("digraph j_order")


def test_ideals(capsys):
    code, out, _ = run_cli(capsys, "ideals", "--family", "or", "--n", "4")
    assert code == EXIT_OK
    assert "6 absorbing down-sets" in out
    assert "union" in out


def test_congruences_predict(capsys):
    code, out, _ = run_cli(capsys, "congruences", "predict", "--family", "or",
                           "--n", "4")
    assert code == EXIT_OK
    assert "12 distinct predicted congruences" in out
    assert "OR_eq1" in out


def test_congruences_enumerate(capsys):
    code, out, _ = run_cli(capsys, "congruences", "enumerate", "--family", "or",
                           "--n", "2", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["count"] == 7


def test_congruences_verify_ok(capsys):
    code, out, _ = run_cli(capsys, "congruences", "verify", "--family", "sr",
                           "--n", "2")
    assert code == EXIT_OK
    assert "predicted but not found: 0" in out
    code, out, _ = run_cli(capsys, "congruences", "verify", "--family", "or",
                           "--n", "4")
    assert code == EXIT_OK
    assert "found but not predicted: 5" in out


def test_congruences_verify_budget(capsys):
    code, _, err = run_cli(capsys, "congruences", "verify", "--family", "or",
                           "--n", "8")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_counterexample(capsys):
    code, out, _ = run_cli(capsys, "counterexample")
    assert code == EXIT_OK
    assert "membership violated at i = 1" in out
    assert "sigma in OR_8: True" in out
    assert "conjugate in SR_8: False" in out


def test_counterexample_json(capsys):
    code, out, _ = run_cli(capsys, "counterexample", "--format", "json")
    payload = json.loads(out)
    assert payload["violated_at"] == 1
    assert payload["sigma_in_OR"] is True
    assert payload["conjugate_in_SR"] is False
    assert payload["s_in_unit_group"] is False


def test_erratum(capsys):
    code, out, _ = run_cli(capsys, "erratum", "--n", "4", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["rank_m_d_class_size"]["observed_per_class"] == [8, 8]
    assert len(payload["extra_absorbing_downsets"]) == 1


def test_output_to_file(tmp_path, capsys):
    target = tmp_path / "universe.json"
    code, out, _ = run_cli(capsys, "elements", "--family", "or", "--n", "2",
                           "--format", "json", "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["size"] == 4


@pytest.mark.parametrize("argv", [
    ("elements", "--family", "or", "--n", "4", "--format", "json"),
    ("green", "--family", "or", "--n", "4", "--format", "json"),
    ("congruences", "verify", "--family", "or", "--n", "4", "--format", "json"),
])
def test_output_is_deterministic(capsys, argv):
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_element_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("RCL_BUDGET_ELEMENTS", "30")
    code, _, err = run_cli(capsys, "elements", "--family", "or", "--n", "4")
    assert code == EXIT_BUDGET
    assert "budget" in err
    monkeypatch.setenv("RCL_BUDGET_ELEMENTS", "40")
    code, out, _ = run_cli(capsys, "elements", "--family", "or", "--n", "4")
    assert code == EXIT_OK


def test_internal_invariant_exit_code(capsys, monkeypatch):
    from rookmonoids import InvariantViolation
    import rookmonoids.cli as cli

    def boom(universe, **kwargs):
        raise InvariantViolation("forced for the test")

    monkeypatch.setattr(cli, "verify_classification", boom)
    code, _, err = run_cli(capsys, "congruences", "verify", "--family", "or",
                           "--n", "2")
    assert code == 3
    assert "invariant" in err


def test_verify_output_independent_of_threads(capsys):
    _, one, _ = run_cli(capsys, "congruences", "verify", "--family", "or",
                        "--n", "4", "--format", "json", "--threads", "1")
    _, two, _ = run_cli(capsys, "congruences", "verify", "--family", "or",
                        "--n", "4", "--format", "json", "--threads", "2")
    assert one == two
