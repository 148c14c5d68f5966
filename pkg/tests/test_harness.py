import json
import textwrap

import pytest

from fpshybrid import ConfigError
from fpshybrid.cli import main
from fpshybrid.harness import (DETAIL_SCHEMA, POWER_SCHEMA, SUMMARY_SCHEMA,
                               ExperimentConfig, describe_hardware, load_config,
                               run_experiment, write_outputs, write_power_json)

SMALL_YAML = textwrap.dedent("""\
    system:
      n_tx: 16
      n_rx: 4
      n_rf_tx: 2
      n_rf_rx: 1
      n_users: 2
      n_streams: 1
      n_subcarriers: 4
      snr_db: 0.0
    channel:
      tx_array_dims: [4, 4]
      rx_array_dims: [2, 2]
      n_clusters: 3
      n_rays: 4
    arch:
      n_ps: 8
    sweep:
      axis: snr_db
      values: [-5.0, 0.0]
    n_realizations: 2
    baselines: [fully-digital, fps-altmin, random-switch]
    output:
      path: out/run
""")


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text(SMALL_YAML)
    return path


def test_load_config_resolves_fields(config_path):
    cfg = load_config(config_path)
    assert cfg.sweep_axis == "snr_db"
    assert cfg.sweep_values == (-5.0, 0.0)
    assert cfg.system.n_tx == 16
    assert cfg.arch.n_ps == 8
    assert cfg.echo()["sweep"]["values"] == [-5.0, 0.0]


def test_load_config_reports_field_paths(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text(SMALL_YAML.replace("n_rf_tx: 2", "n_rf_tx: 1"))
    with pytest.raises(ConfigError, match="system:"):
        load_config(bad)
    missing = tmp_path / "missing.yaml"
    missing.write_text("channel: {}\narch: {n_ps: 4}\n")
    with pytest.raises(ConfigError, match="system: section missing"):
        load_config(missing)


def test_invalid_sweep_axis_rejected(config_path):
    cfg = load_config(config_path)
    with pytest.raises(ConfigError, match="sweep.axis"):
        ExperimentConfig(**{**cfg.__dict__, "sweep_axis": "bandwidth"})


def test_group_sweep_validated_up_front(config_path):
    cfg = load_config(config_path)
    with pytest.raises(ConfigError, match="sweep.values"):
        ExperimentConfig(**{**cfg.__dict__, "sweep_axis": "n_groups",
                            "sweep_values": (1, 3)})


def test_run_experiment_deterministic(config_path):
    cfg = load_config(config_path)
    d1, s1 = run_experiment(cfg)
    d2, s2 = run_experiment(cfg)
    assert d1 == d2 and s1 == s2
    assert all(row["status"] == "ok" for row in d1)
    # 3 methods x 2 sweep values x 2 realizations
    assert len(d1) == 12
    assert len(s1) == 6
    per_method = {row["method"] for row in s1}
    assert per_method == {"fully-digital", "fps-altmin", "random-switch"}


def test_summary_statistics(config_path):
    cfg = load_config(config_path)
    detail, summary = run_experiment(cfg)
    for row in summary:
        values = [float(r["se_bits_per_hz"]) for r in detail
                  if r["method"] == row["method"]
                  and r["sweep_value"] == row["sweep_value"]]
        assert int(row["n_ok"]) == len(values)
        assert float(row["mean_se"]) == pytest.approx(
            sum(values) / len(values), rel=1e-9)


def test_write_outputs_schema_lines(config_path, tmp_path):
    cfg = load_config(config_path)
    detail, summary = run_experiment(cfg)
    written = write_outputs(cfg, detail, summary, out_dir=tmp_path)
    assert written["detail"].read_text().startswith(f"# schema={DETAIL_SCHEMA}\n")
    assert written["summary"].read_text().startswith(f"# schema={SUMMARY_SCHEMA}\n")
    report = json.loads(written["json"].read_text())
    assert report["schema"] == DETAIL_SCHEMA
    assert report["config"]["system"]["n_tx"] == 16


def test_describe_hardware_and_power_json(tmp_path):
    rows = describe_hardware(144, 8, 10)
    path = tmp_path / "power.json"
    write_power_json(rows, path)
    data = json.loads(path.read_text())
    assert data["schema"] == POWER_SCHEMA
    totals = {r["structure"]: r["power_total_w"] for r in data["rows"]}
    assert totals["DPS-fully"] == 115.2


def test_cli_run(config_path, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["run", str(config_path)]) == 0
    out = capsys.readouterr().out
    assert "detail" in out and "summary" in out
    assert (tmp_path / "out" / "run.detail.csv").exists()


def test_cli_hardware(capsys):
    assert main(["hardware", "--n-tx", "144", "--n-rf", "8", "--n-ps", "10"]) == 0
    out = capsys.readouterr().out
    assert "FPS-fully" in out and "59.2" in out


def test_cli_oracle_check(capsys):
    assert main(["oracle-check", "--trials", "30"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("system: {n_tx: 4}\narch: {n_ps: 2}\n")
    assert main(["run", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err
