"""End-to-end CLI coverage: output shapes, exit codes, determinism, env
seeding, and file input/output."""

import csv
import io
import json
import subprocess
import sys

import pytest

from meanlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ── eval ──────────────────────────────────────────────────────────────────────


def test_eval_prints_the_bare_value(capsys):
    code, out, _ = run_cli(capsys, "eval", "--builtin", "p=2",
                           "--w", "0.5,0.5", "--x", "1,7")
    assert code == 0
    assert float(out.strip()) == 5.0


def test_eval_geometric_and_dsl(capsys):
    code, out, _ = run_cli(capsys, "eval", "--builtin", "0",
                           "--w", "0.5,0.5", "--x", "4,9")
    assert code == 0 and float(out.strip()) == 6.0
    code, out, _ = run_cli(capsys, "eval", "--dsl", "sum(w*x^2)^0.5",
                           "--w", "0.5,0.5", "--x", "1,7")
    assert code == 0 and float(out.strip()) == 5.0


def test_eval_json_format(capsys):
    code, out, _ = run_cli(capsys, "eval", "--builtin", "inf",
                           "--w", "0.5,0.5,0", "--x", "1,2,5", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 2.0
    assert payload["system"] == "power_mean[p=inf]"


def test_eval_csv_format(capsys):
    code, out, _ = run_cli(capsys, "eval", "--builtin", "1",
                           "--w", "1", "--x", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["record", "field", "value"]
    cells = {(r[0], r[1]): r[2] for r in rows[1:]}
    assert cells[("report", "value")] == "3.0"


def test_eval_input_file(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"w": [0.5, 0.5], "x": [1, 7]}))
    code, out, _ = run_cli(capsys, "eval", "--builtin", "2", "--input", str(path))
    assert code == 0 and float(out.strip()) == 5.0


def test_eval_output_file(tmp_path, capsys):
    path = tmp_path / "out.txt"
    code, out, _ = run_cli(capsys, "eval", "--builtin", "2",
                           "--w", "0.5,0.5", "--x", "1,7", "--output", str(path))
    assert code == 0 and out == ""
    assert float(path.read_text().strip()) == 5.0


# ── usage and evaluation errors ───────────────────────────────────────────────


def test_dsl_parse_error_reports_position_and_exits_2(capsys):
    code, _, err = run_cli(capsys, "eval", "--dsl", "sum(w*",
                           "--w", "1", "--x", "1")
    assert code == 2
    assert "line 1" in err and "column" in err


def test_bad_weights_exit_2(capsys):
    code, _, err = run_cli(capsys, "eval", "--builtin", "2",
                           "--w", "0.5,0.6", "--x", "1,2")
    assert code == 2 and "sum" in err


def test_bad_builtin_exit_2(capsys):
    code, _, err = run_cli(capsys, "eval", "--builtin", "two",
                           "--w", "1", "--x", "1")
    assert code == 2


def test_missing_vectors_exit_2(capsys):
    code, _, err = run_cli(capsys, "eval", "--builtin", "2")
    assert code == 2 and "--input" in err


def test_malformed_input_file_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "eval", "--builtin", "2", "--input", str(path))
    assert code == 2
    path.write_text(json.dumps({"w": [1.0]}))  # x missing
    code, _, _ = run_cli(capsys, "eval", "--builtin", "2", "--input", str(path))
    assert code == 2


def test_runtime_evaluation_error_exits_1(capsys):
    code, _, err = run_cli(capsys, "eval", "--dsl", "sum(w/x)",
                           "--w", "1", "--x", "0")
    assert code == 1 and "evaluation failed" in err


def test_usage_errors_from_argparse_exit_2(capsys):
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["axioms"]) == 2  # a system is required
    capsys.readouterr()


# ── axioms ────────────────────────────────────────────────────────────────────


def test_axioms_pass_for_an_honest_builtin(capsys):
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "2",
                           "--trials", "50", "--seed", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["seed"] == 4
    assert len(payload["checks"]) == 10


def test_axioms_convexity_counterexample_for_sqrt_mean(capsys):
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "p=0.5",
                           "--trials", "50", "--seed", "42")
    assert code == 1
    payload = json.loads(out)
    convexity = next(c for c in payload["checks"]
                     if c["property_name"] == "convexity")
    assert convexity["passed"] is False
    ce = convexity["counterexample"]
    assert ce["w"] == [0.5, 0.5]
    assert ce["x"] == [1.0, 0.0]
    assert ce["aux"]["y"] == [0.0, 1.0]
    assert ce["lhs"] == 0.5 and ce["rhs"] == 0.25


def test_axioms_positive_weights_flag(capsys):
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "2",
                           "--trials", "30", "--positive-weights")
    assert code == 0
    payload = json.loads(out)
    assert payload["positive_weights_only"] is True
    zero_weight = next(c for c in payload["checks"]
                       if c["property_name"] == "zero_weight")
    assert zero_weight["trials"] == 0 and "not applicable" in zero_weight["note"]


def test_axioms_reports_are_byte_identical(tmp_path, capsys):
    args = ["axioms", "--builtin", "2", "--trials", "40", "--seed", "9"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.csv", tmp_path / "d.csv"
    assert main(args + ["--format", "csv", "--output", str(c)]) == 0
    assert main(args + ["--format", "csv", "--output", str(d)]) == 0
    assert c.read_bytes() == d.read_bytes()
    capsys.readouterr()


def test_axioms_csv_has_one_record_per_check(capsys):
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "1",
                           "--trials", "20", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    records = {r[0] for r in rows[1:]}
    assert "checks:convexity" in records and "report" in records


def test_seed_env_var_default(capsys, monkeypatch):
    monkeypatch.setenv("MEANLAB_SEED", "31")
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "2", "--trials", "20")
    assert code == 0 and json.loads(out)["seed"] == 31
    # an explicit flag wins over the environment
    code, out, _ = run_cli(capsys, "axioms", "--builtin", "2",
                           "--trials", "20", "--seed", "5")
    assert json.loads(out)["seed"] == 5
    monkeypatch.setenv("MEANLAB_SEED", "not-a-number")
    code, _, err = run_cli(capsys, "axioms", "--builtin", "2", "--trials", "20")
    assert code == 2 and "MEANLAB_SEED" in err


# ── recover / characterize / sandwich ─────────────────────────────────────────


def test_recover_builtin(capsys):
    code, out, _ = run_cli(capsys, "recover", "--builtin", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["exponent"] == "3.0"
    assert payload["degenerate_zero"] is False
    assert len(payload["samples"]) == 31


def test_recover_degenerate_exits_1(capsys):
    code, out, _ = run_cli(capsys, "recover", "--builtin", "0")
    assert code == 1
    assert json.loads(out)["degenerate_zero"] is True


def test_recover_invalid_probe_exits_1(capsys):
    code, _, err = run_cli(capsys, "recover", "--dsl", "sum(w*x)+1")
    assert code == 1 and "recovery failed" in err


def test_characterize_consistent_builtin(capsys):
    code, out, _ = run_cli(capsys, "characterize", "--builtin", "2",
                           "--trials", "40", "--seed", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "consistent"
    assert [s["name"] for s in payload["stages"]] == ["uniform", "rational", "sandwich"]


def test_characterize_blend_exits_1(capsys):
    code, out, _ = run_cli(capsys, "characterize", "--dsl",
                           "(sum(w*x)+sum(w*x^2)^0.5)/2", "--trials", "40")
    assert code == 1
    assert json.loads(out)["verdict"] == "counterexample"


def test_characterize_degenerate_exits_1(capsys):
    code, out, _ = run_cli(capsys, "characterize", "--dsl", "min(x*w^0)",
                           "--trials", "20")
    assert code == 1
    assert json.loads(out)["verdict"] == "degenerate"


def test_sandwich_ordered_exits_0(capsys):
    code, out, _ = run_cli(capsys, "sandwich", "--builtin", "2",
                           "--w", "0.318309886,0.681690114", "--x", "1,2",
                           "--delta", "0.01")
    assert code == 0
    payload = json.loads(out)
    assert payload["ordered"] is True
    assert payload["denominator"] == 200
    assert payload["value_lower"] <= payload["value_at"] <= payload["value_upper"]


def test_sandwich_bad_delta_exits_2(capsys):
    code, _, _ = run_cli(capsys, "sandwich", "--builtin", "2",
                         "--w", "0.5,0.5", "--x", "1,2", "--delta", "0")
    assert code == 2
    code, _, err = run_cli(capsys, "sandwich", "--builtin", "2",
                           "--w", "0.5,0.5", "--x", "1,2", "--delta", "1e-9",
                           "--max-denominator", "100")
    assert code == 2 and "denominator" in err


def test_console_script_is_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "meanlab.cli", "eval", "--builtin", "2",
         "--w", "0.5,0.5", "--x", "1,7"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert float(proc.stdout.strip()) == 5.0
