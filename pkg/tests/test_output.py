"""
Tests for CSV and JSON row output
"""
import json

import pytest

from models.report import CheckRow
from utils.output import render, rows_to_frame, summary_counts, write_rows


@pytest.fixture
def rows():
    return [
        CheckRow(suite="totient", label="s0", exact=32.0, predicted=30.4, passed=True),
        CheckRow(suite="totient", label="s1", passed=None, payload={"N": 10}),
        CheckRow(suite="totient", label="printed", passed=False, gated=False),
    ]


def test_csv_header_and_line_endings(rows):
    text = render(rows, "csv")
    assert text.splitlines()[0].startswith("suite,label,exact,predicted")
    assert "\r\n" not in text
    assert text.endswith("\n")


def test_nested_payload_is_flattened(rows):
    frame = rows_to_frame(rows)
    assert json.loads(frame.loc[1, "payload"]) == {"N": 10}


def test_json_carries_schema_version(rows):
    document = json.loads(render(rows, "json"))
    assert document["schema_version"] == "1.0"
    assert [row["label"] for row in document["rows"]] == ["s0", "s1", "printed"]


def test_unknown_format(rows):
    with pytest.raises(ValueError):
        render(rows, "xml")


def test_write_rows_to_file(rows, tmp_path):
    target = tmp_path / "nested" / "rows.csv"
    write_rows(rows, "csv", str(target))
    assert target.read_bytes().count(b"\n") == len(rows) + 1
    assert b"\r" not in target.read_bytes()


def test_write_rows_to_stdout(rows, capsys):
    write_rows(rows[:1], "json")
    assert json.loads(capsys.readouterr().out)["rows"][0]["exact"] == 32.0


def test_summary_counts(rows):
    assert summary_counts(rows) == {"passed": 1, "failed": 1, "unchecked": 1}
    assert not rows[2].failed
