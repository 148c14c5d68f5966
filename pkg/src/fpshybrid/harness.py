"""Reproducible Monte-Carlo experiments over SNR, phase-shifter count, or grouping.

Detail and summary results are written as versioned CSV plus a JSON report;
all rows carry the seed, method, and sweep value, and reruns of the same
config are byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import json
import os
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .cancellation import build_hybrid_solution
from .channel import generate_channel
from .config import AnalogArchitecture, ChannelParams, ConfigError, SystemConfig
from .core import StoppingRule
from .digital import bd_digital_precoder
from .evaluation import (DigitalSolution, EvaluationReport, hardware_profiles,
                         random_switch_baseline, spectral_efficiency)

DETAIL_SCHEMA = "fpshybrid.results.v1"
SUMMARY_SCHEMA = "fpshybrid.summary.v1"
POWER_SCHEMA = "fpshybrid.power.v1"

DETAIL_COLUMNS = ["method", "sweep_axis", "sweep_value", "realization", "seed",
                  "se_bits_per_hz", "iterations", "status", "error"]
SUMMARY_COLUMNS = ["method", "sweep_axis", "sweep_value", "n_ok", "n_failed",
                   "mean_se", "std_se", "stderr_se"]

VALID_AXES = ("snr_db", "n_ps", "n_groups")
VALID_METHODS = ("fully-digital", "fps-altmin", "random-switch")


@dataclass(frozen=True)
class ExperimentConfig:
    system: SystemConfig
    channel: ChannelParams
    arch: AnalogArchitecture
    sweep_axis: str = "snr_db"
    sweep_values: tuple = (0.0,)
    n_realizations: int = 1
    baselines: tuple[str, ...] = ("fully-digital", "fps-altmin")
    combiner_mode: str = "digital"
    base_seed: int = 0
    output_path: str = "results"
    output_format: str = "both"
    stop: StoppingRule = field(default_factory=StoppingRule)

    def __post_init__(self):
        if self.sweep_axis not in VALID_AXES:
            raise ConfigError(f"sweep.axis: must be one of {VALID_AXES}, "
                              f"got {self.sweep_axis!r}")
        if not self.sweep_values:
            raise ConfigError("sweep.values: must be non-empty")
        if self.n_realizations < 1:
            raise ConfigError("n_realizations: must be >= 1")
        for m in self.baselines:
            if m not in VALID_METHODS:
                raise ConfigError(f"baselines: unknown method {m!r}")
        if self.combiner_mode not in ("digital", "hybrid"):
            raise ConfigError(f"combiner_mode: must be digital or hybrid, "
                              f"got {self.combiner_mode!r}")
        if self.sweep_axis == "n_groups":
            for v in self.sweep_values:
                try:
                    self.arch_for(v).validate_grouping(self.system.n_tx,
                                                       self.system.n_rf_tx)
                except ConfigError as exc:
                    raise ConfigError(f"sweep.values: {exc}") from exc

    def system_for(self, value) -> SystemConfig:
        if self.sweep_axis != "snr_db":
            return self.system
        return SystemConfig.from_snr(
            float(value), n_tx=self.system.n_tx, n_rx=self.system.n_rx,
            n_rf_tx=self.system.n_rf_tx, n_rf_rx=self.system.n_rf_rx,
            n_users=self.system.n_users, n_streams=self.system.n_streams,
            n_subcarriers=self.system.n_subcarriers,
            noise_power=self.system.noise_power)

    def arch_for(self, value) -> AnalogArchitecture:
        if self.sweep_axis == "n_ps":
            return AnalogArchitecture(n_ps=int(value), n_groups=self.arch.n_groups)
        if self.sweep_axis == "n_groups":
            return AnalogArchitecture(n_ps=self.arch.n_ps,
                                      phases=self.arch.phases,
                                      n_groups=int(value))
        return self.arch

    def echo(self) -> dict:
        """All resolved parameters, so the output has no hidden defaults."""
        return {
            "system": dataclasses.asdict(self.system),
            "channel": dataclasses.asdict(self.channel),
            "arch": dataclasses.asdict(self.arch),
            "sweep": {"axis": self.sweep_axis, "values": list(self.sweep_values)},
            "n_realizations": self.n_realizations,
            "baselines": list(self.baselines),
            "combiner_mode": self.combiner_mode,
            "base_seed": self.base_seed,
            "stop": dataclasses.asdict(self.stop),
        }


def load_config(path) -> ExperimentConfig:
    """Parse a YAML experiment config with field-path error messages."""
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    def section(name, required=True):
        value = raw.get(name)
        if value is None:
            if required:
                raise ConfigError(f"{name}: section missing")
            return {}
        if not isinstance(value, dict):
            raise ConfigError(f"{name}: must be a mapping")
        return value

    sys_raw = dict(section("system"))
    try:
        if "tx_power" in sys_raw:
            system = SystemConfig(**sys_raw)
        else:
            snr_db = float(sys_raw.pop("snr_db", 0.0))
            system = SystemConfig.from_snr(snr_db, **sys_raw)
    except (ConfigError, TypeError) as exc:
        raise ConfigError(f"system: {exc}") from exc

    chan_raw = dict(section("channel", required=False))
    for key in ("tx_array_dims", "rx_array_dims"):
        if key in chan_raw:
            chan_raw[key] = tuple(chan_raw[key])
    try:
        channel = ChannelParams(**chan_raw)
        channel.validate_against(system)
    except (ConfigError, TypeError) as exc:
        raise ConfigError(f"channel: {exc}") from exc

    arch_raw = dict(section("arch"))
    if "phases" in arch_raw:
        arch_raw["phases"] = tuple(arch_raw["phases"])
    try:
        arch = AnalogArchitecture(**arch_raw)
    except (ConfigError, TypeError) as exc:
        raise ConfigError(f"arch: {exc}") from exc

    sweep_raw = section("sweep", required=False)
    stop_raw = section("stop", required=False)
    out_raw = section("output", required=False)
    try:
        return ExperimentConfig(
            system=system, channel=channel, arch=arch,
            sweep_axis=sweep_raw.get("axis", "snr_db"),
            sweep_values=tuple(sweep_raw.get("values", [system.snr_db])),
            n_realizations=int(raw.get("n_realizations", 1)),
            baselines=tuple(raw.get("baselines",
                                    ["fully-digital", "fps-altmin"])),
            combiner_mode=raw.get("combiner_mode", "digital"),
            base_seed=int(raw.get("base_seed", 0)),
            output_path=out_raw.get("path", "results"),
            output_format=out_raw.get("format", "both"),
            stop=StoppingRule(**stop_raw) if stop_raw else StoppingRule())
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _run_cell(cfg: ExperimentConfig, value, realization: int) -> list[dict]:
    """All requested methods on one (sweep value, realization) cell."""
    seed = cfg.base_seed + realization
    system = cfg.system_for(value)
    arch = cfg.arch_for(value)
    params = dataclasses.replace(cfg.channel, seed=seed)
    rows = []
    base = {"sweep_axis": cfg.sweep_axis, "sweep_value": value,
            "realization": realization, "seed": seed}
    try:
        channel = generate_channel(system, params)
        target, combiner_targets = bd_digital_precoder(channel, system)
    except Exception as exc:  # noqa: BLE001 - failures become rows, not aborts
        return [{**base, "method": m, "se_bits_per_hz": "", "iterations": 0,
                 "status": "failed", "error": repr(exc)}
                for m in cfg.baselines]

    for method in cfg.baselines:
        row = {**base, "method": method, "error": ""}
        try:
            if method == "fully-digital":
                _, total = spectral_efficiency(
                    channel, DigitalSolution(target, combiner_targets), system)
                iters = 0
            elif method == "fps-altmin":
                solution = build_hybrid_solution(
                    channel, system, arch, target, combiner_targets,
                    cfg.combiner_mode, cfg.stop)
                _, total = spectral_efficiency(channel, solution, system)
                state = solution.state
                iters = (state.n_iterations if hasattr(state, "n_iterations")
                         else max(st.n_iterations for st in state.states))
            else:
                report = random_switch_baseline(
                    system, arch, channel, seed, target, combiner_targets,
                    cfg.combiner_mode, cfg.stop)
                total, iters = report.se_bits_per_hz, report.iterations
            row.update(se_bits_per_hz=f"{total:.12g}", iterations=iters,
                       status="ok")
        except Exception as exc:  # noqa: BLE001
            row.update(se_bits_per_hz="", iterations=0, status="failed",
                       error=repr(exc))
        rows.append(row)
    return rows


def run_experiment(cfg: ExperimentConfig, workers: int | None = None
                   ) -> tuple[list[dict], list[dict]]:
    """Execute the sweep; returns (detail_rows, summary_rows), sorted."""
    if workers is None:
        workers = int(os.environ.get("FPSHYBRID_WORKERS", "1"))
    cells = [(value, r) for value in cfg.sweep_values
             for r in range(cfg.n_realizations)]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, [cfg] * len(cells),
                                   [c[0] for c in cells], [c[1] for c in cells]))
    else:
        chunks = [_run_cell(cfg, value, r) for value, r in cells]
    detail = [row for chunk in chunks for row in chunk]
    detail.sort(key=lambda r: (r["method"], str(r["sweep_value"]),
                               r["realization"]))

    summary = []
    for method in cfg.baselines:
        for value in cfg.sweep_values:
            ok = [float(r["se_bits_per_hz"]) for r in detail
                  if r["method"] == method and r["sweep_value"] == value
                  and r["status"] == "ok"]
            failed = sum(1 for r in detail
                         if r["method"] == method and r["sweep_value"] == value
                         and r["status"] == "failed")
            mean = statistics.fmean(ok) if ok else float("nan")
            std = statistics.stdev(ok) if len(ok) > 1 else 0.0
            stderr = std / np.sqrt(len(ok)) if ok else float("nan")
            summary.append({
                "method": method, "sweep_axis": cfg.sweep_axis,
                "sweep_value": value, "n_ok": len(ok), "n_failed": failed,
                "mean_se": f"{mean:.12g}", "std_se": f"{std:.12g}",
                "stderr_se": f"{stderr:.12g}"})
    return detail, summary


def _write_csv(path: Path, schema: str, columns: list[str],
               rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={schema}\n")
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def write_outputs(cfg: ExperimentConfig, detail: list[dict],
                  summary: list[dict], out_dir: Path | None = None) -> dict:
    """Write detail/summary CSV and/or a JSON report; returns written paths."""
    prefix = Path(cfg.output_path)
    if out_dir is not None:
        prefix = out_dir / prefix.name
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written = {}
    if cfg.output_format in ("csv", "both"):
        detail_path = prefix.with_suffix(".detail.csv")
        summary_path = prefix.with_suffix(".summary.csv")
        _write_csv(detail_path, DETAIL_SCHEMA, DETAIL_COLUMNS, detail)
        _write_csv(summary_path, SUMMARY_SCHEMA, SUMMARY_COLUMNS, summary)
        written.update(detail=detail_path, summary=summary_path)
    if cfg.output_format in ("json", "both"):
        json_path = prefix.with_suffix(".json")
        with open(json_path, "w") as fh:
            json.dump({"schema": DETAIL_SCHEMA, "config": cfg.echo(),
                       "detail": detail, "summary": summary}, fh, indent=1)
        written["json"] = json_path
    return written


def describe_hardware(n_tx: int, n_rf: int, n_ps: int,
                      n_groups: int = 1) -> list[dict]:
    """Hardware-count and power rows for the configured system size."""
    rows = []
    for p in hardware_profiles(n_tx, n_rf, n_ps, n_groups):
        rows.append({
            "structure": p.structure, "n_ps": p.n_ps, "ps_type": p.ps_type,
            "p_ps_mw": p.p_ps_mw, "other_kind": p.other_kind, "n_oc": p.n_oc,
            "p_oc_mw": p.p_oc_mw, "power_total_w": p.power_total_w,
            "note": p.note})
    return rows


def write_power_json(rows: list[dict], path) -> None:
    with open(path, "w") as fh:
        json.dump({"schema": POWER_SCHEMA, "rows": rows}, fh, indent=1)
