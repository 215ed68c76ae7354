"""
Tests for the ecfcensus command line
"""
import json
from unittest.mock import patch

import pytest

from cli.main import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main
from models.report import CheckRow


def run_json(capsys, argv):
    status = main(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return status, (json.loads(out)["rows"] if out else None)


def test_expand_golden_ratio(capsys):
    status, rows = run_json(capsys, ["expand", "1,-1,-1,+", "ecf"])
    assert status == EXIT_OK
    row = rows[0]
    assert row["kind"] == "ECF"
    assert row["period"] == "(2,-1),(2,1)"
    assert row["purely_periodic"] is True
    assert row["classification"] == "E_reduced;RCF_reduced"
    assert row["rho"] == pytest.approx(4 * 1.4436354751788103)


def test_expand_bcf_and_non_reduced(capsys):
    status, rows = run_json(capsys, ["expand", "2,-6,1,+", "bcf"])
    assert status == EXIT_OK
    assert rows[0]["period"] == "3,6"
    status, rows = run_json(capsys, ["expand", "1,0,-2,+"])
    assert status == EXIT_OK
    assert rows[0]["rho"] is None


def test_invalid_spec_exits_2(capsys):
    assert main(["expand", "1,-3,2,+"]) == EXIT_INVALID
    assert main(["expand", "1,2"]) == EXIT_INVALID
    assert main(["classify", "1,-1,-1,*"]) == EXIT_INVALID


def test_classify(capsys):
    status, rows = run_json(capsys, ["classify", "1,-1,-1,+", "1,-4,1,+"])
    assert status == EXIT_OK
    assert [row["E_reduced"] for row in rows] == [True, True]
    assert [row["B_reduced"] for row in rows] == [False, True]


def test_census_excluded_parameters_exit_2(capsys):
    assert main(["census", "--kind", "B", "--alpha", "1", "--beta", "1", "--N", "20"]) == EXIT_INVALID
    assert main(["census", "--alpha", "0.5", "--N", "20"]) == EXIT_INVALID


def test_census_methods_agree(capsys):
    status, rows = run_json(capsys, ["census", "--alpha", "2", "--beta1", "1", "--N", "40", "--methods", "both"])
    assert status == EXIT_OK
    assert [row["method"] for row in rows] == ["congruence", "word_dfs"]
    assert rows[0]["exact_count"] == rows[1]["exact_count"]


def test_census_csv_to_file(tmp_path, capsys):
    target = tmp_path / "census.csv"
    status = main(["census", "--kind", "B", "--alpha", "2", "--beta", "1", "--N", "30", "--out", str(target)])
    assert status == EXIT_OK
    header = target.read_text(encoding="utf-8").splitlines()[0]
    assert header.startswith("kind,alpha,beta1,beta2,N,method,exact_count")


def test_verify_failure_exits_1(capsys):
    failing = [CheckRow(suite="galois", label="dual_equals_negated_conjugate", passed=False)]
    with patch("cli.main.verification_suites.run", return_value=failing):
        assert main(["verify", "--suite", "galois"]) == EXIT_FAILED


def test_verify_ungated_failure_is_reported_only(capsys):
    rows = [CheckRow(suite="totient", label="identity_odd_printed", passed=False, gated=False)]
    with patch("cli.main.verification_suites.run", return_value=rows):
        assert main(["verify", "--suite", "totient"]) == EXIT_OK
        assert main(["verify", "--suite", "totient", "--check"]) == EXIT_FAILED


def test_verify_quick_suite(capsys):
    assert main(["verify", "--suite", "galois"]) == EXIT_OK


def test_totient_command(capsys):
    status, rows = run_json(capsys, ["totient", "--N", "100"])
    assert status == EXIT_OK
    labels = {row["label"] for row in rows}
    assert {"s0", "s2_odd", "identity_even_at_2n"} <= labels


def test_kloosterman_command(capsys):
    status, rows = run_json(capsys, ["kloosterman", "--q", "7", "--h", "-1"])
    assert status == EXIT_OK
    assert rows[0]["exact"] == 6.0
    assert main(["kloosterman", "--q", "6", "--h", "2"]) == EXIT_INVALID


def test_pell_commands(capsys):
    status, rows = run_json(capsys, ["pell", "--disc", "5"])
    assert status == EXIT_OK
    assert [(row["group"], row["t"], row["u"]) for row in rows] == [("F", 2, 1), ("F_plus", 9, 4)]
    status, rows = run_json(capsys, ["pell", "--omega", "1,-1,-1,+"])
    assert status == EXIT_OK
    assert rows[0]["matches_oracle"] is True
    assert rows[0]["stabilizer"] == "[[3,2],[2,1]]"
    assert main(["pell", "--omega", "1,0,-2,+"]) == EXIT_INVALID


def test_help_and_usage_errors(capsys):
    assert main(["--help"]) == EXIT_OK
    assert main(["census", "--N", "10", "--M", "10"]) == EXIT_INVALID
    assert main([]) == EXIT_INVALID
