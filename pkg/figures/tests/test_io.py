import json

import pytest

from fpsfigures import MissingColumnError, SchemaError, read_power, read_summary


def test_read_summary_parses_and_converts(summary_csv):
    rows = read_summary(summary_csv)
    assert len(rows) == 6
    assert rows[0]["mean_se"] == 8.1
    assert rows[0]["sweep_value"] == -5.0
    assert isinstance(rows[0]["n_ok"], int)


def test_read_summary_schema_mismatch(tmp_path):
    path = tmp_path / "old.csv"
    path.write_text("# schema=fpshybrid.summary.v0\nmethod\nx\n")
    with pytest.raises(SchemaError, match="fpshybrid.summary.v1"):
        read_summary(path)


def test_read_summary_missing_column(tmp_path, summary_csv):
    text = summary_csv.read_text().replace("stderr_se", "sem")
    bad = tmp_path / "bad.csv"
    bad.write_text(text)
    with pytest.raises(MissingColumnError, match="stderr_se"):
        read_summary(bad)


def test_read_power(power_json):
    rows = read_power(power_json)
    assert [r["power_total_w"] for r in rows] == [115.2, 59.2, 57.6, 11.84,
                                                  109.44]


def test_read_power_schema_mismatch(tmp_path):
    path = tmp_path / "power.json"
    path.write_text(json.dumps({"schema": "other", "rows": []}))
    with pytest.raises(SchemaError):
        read_power(path)


def test_read_power_missing_field(tmp_path):
    path = tmp_path / "power.json"
    path.write_text(json.dumps({"schema": "fpshybrid.power.v1",
                                "rows": [{"structure": "x"}]}))
    with pytest.raises(MissingColumnError, match="power_total_w"):
        read_power(path)
