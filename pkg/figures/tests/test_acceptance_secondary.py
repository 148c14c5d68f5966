"""Acceptance: regenerate every figure kind from freshly produced result
files, talking to the simulation package only through its CLI and file
schemas."""

import json
import shutil
import subprocess
import textwrap

import pytest

from fpsfigures import FigureSpec, render
from fpsfigures.render import _power_figure

DESK_SYSTEM = textwrap.dedent("""\
    system:
      n_tx: 36
      n_rx: 4
      n_rf_tx: 2
      n_rf_rx: 1
      n_users: 2
      n_streams: 1
      n_subcarriers: 16
      snr_db: 0.0
    channel:
      tx_array_dims: [6, 6]
      rx_array_dims: [2, 2]
""")

SWEEPS = {
    "se_vs_snr": ("snr_db", "[-5, 0, 5]",
                  "[fully-digital, fps-altmin, random-switch]"),
    "se_vs_nps": ("n_ps", "[5, 10, 20]", "[fps-altmin]"),
    "se_vs_groups": ("n_groups", "[1, 2]", "[fps-altmin]"),
}


def _verdict(capsys, name, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def harness_cli():
    exe = shutil.which("fpshybrid")
    if exe is None:
        pytest.fail("fpshybrid CLI not on PATH; install the simulation package")
    return exe


def test_figure_regeneration(harness_cli, tmp_path, capsys):
    rendered = []
    for kind, (axis, values, baselines) in SWEEPS.items():
        cfg = tmp_path / f"{kind}.yaml"
        cfg.write_text(DESK_SYSTEM + textwrap.dedent(f"""\
            arch:
              n_ps: 20
            sweep:
              axis: {axis}
              values: {values}
            n_realizations: 4
            baselines: {baselines}
            output:
              path: {tmp_path / kind}
        """))
        subprocess.run([harness_cli, "run", str(cfg)], check=True,
                       capture_output=True)
        out = tmp_path / f"{kind}.png"
        render(FigureSpec(str(tmp_path / f"{kind}.summary.csv"), kind,
                          str(out)))
        rendered.append(out.exists())
    ok = all(rendered)
    _verdict(capsys, "figure-regeneration", ok,
             f"{sum(rendered)}/{len(SWEEPS)} sweep figures rendered")


def test_power_bars_match_reference_table(harness_cli, tmp_path, capsys):
    # the five comparison totals come from two phase-shifter budgets of the
    # switch-network structure plus the three fixed competitor structures
    rows = []
    for n_ps in (10, 2):
        path = tmp_path / f"power_{n_ps}.json"
        subprocess.run([harness_cli, "hardware", "--n-tx", "144", "--n-rf",
                        "8", "--n-ps", str(n_ps), "--json", str(path)],
                       check=True, capture_output=True)
        data = json.loads(path.read_text())
        for row in data["rows"]:
            row = dict(row)
            if row["structure"] == "FPS-fully":
                row["structure"] = f"FPS-fully ({n_ps})"
            rows.append(row)
    wanted = ["DPS-fully", "FPS-fully (10)", "SPS-fully", "FPS-fully (2)",
              "Butler-fully"]
    table = [next(r for r in rows if r["structure"] == name)
             for name in wanted]
    merged = tmp_path / "power_table.json"
    merged.write_text(json.dumps({"schema": "fpshybrid.power.v1",
                                  "rows": table}))
    out = tmp_path / "power_bars.png"
    spec = FigureSpec(str(merged), "power_bars", str(out))
    heights = [p.get_height() for p in _power_figure(spec).axes[0].patches]
    render(spec)
    expected = [115.2, 59.2, 57.6, 11.84, 109.44]
    ok = heights == expected and out.exists()
    _verdict(capsys, "power-bars-reference-table", ok,
             f"bar heights {heights} W")
