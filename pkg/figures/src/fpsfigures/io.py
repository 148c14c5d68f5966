"""Readers for the versioned result files written by the simulation harness."""

from __future__ import annotations

import csv
import json

SUMMARY_SCHEMA = "fpshybrid.summary.v1"
POWER_SCHEMA = "fpshybrid.power.v1"

SUMMARY_COLUMNS = ("method", "sweep_axis", "sweep_value", "n_ok", "mean_se",
                   "std_se", "stderr_se")
POWER_COLUMNS = ("structure", "power_total_w")


class SchemaError(ValueError):
    """Input file does not declare the expected schema version."""


class MissingColumnError(ValueError):
    """A column required by the declared schema is absent."""


class EmptySeriesError(ValueError):
    """Filters left nothing to plot; the message lists what is available."""


def read_summary(path) -> list[dict]:
    """Parse a summary CSV; returns rows with numeric fields converted."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != f"# schema={SUMMARY_SCHEMA}":
            raise SchemaError(
                f"{path}: expected '# schema={SUMMARY_SCHEMA}', got {header!r}")
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in SUMMARY_COLUMNS if c not in fields]
        if missing:
            raise MissingColumnError(f"{path}: missing columns {missing}")
        rows = []
        for row in reader:
            rows.append({**row,
                         "sweep_value": float(row["sweep_value"]),
                         "n_ok": int(row["n_ok"]),
                         "mean_se": float(row["mean_se"]),
                         "stderr_se": float(row["stderr_se"])})
    return rows


def read_power(path) -> list[dict]:
    """Parse a hardware-power JSON report."""
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != POWER_SCHEMA:
        raise SchemaError(
            f"{path}: expected schema {POWER_SCHEMA!r}, got {data.get('schema')!r}")
    rows = data.get("rows", [])
    for row in rows:
        missing = [c for c in POWER_COLUMNS if c not in row]
        if missing:
            raise MissingColumnError(f"{path}: power row missing {missing}")
    return rows
