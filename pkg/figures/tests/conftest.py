import json
import textwrap

import pytest

SUMMARY_CSV = textwrap.dedent("""\
    # schema=fpshybrid.summary.v1
    method,sweep_axis,sweep_value,n_ok,n_failed,mean_se,std_se,stderr_se
    fully-digital,snr_db,-5.0,10,0,8.1,0.5,0.158
    fully-digital,snr_db,0.0,10,0,11.4,0.6,0.19
    fully-digital,snr_db,5.0,10,0,14.9,0.7,0.221
    fps-altmin,snr_db,-5.0,10,0,6.9,0.5,0.158
    fps-altmin,snr_db,0.0,10,0,10.1,0.6,0.19
    fps-altmin,snr_db,5.0,10,0,13.2,0.7,0.221
""")

POWER_ROWS = [
    {"structure": "DPS-fully", "power_total_w": 115.2},
    {"structure": "FPS-fully (10)", "power_total_w": 59.2},
    {"structure": "SPS-fully", "power_total_w": 57.6},
    {"structure": "FPS-fully (2)", "power_total_w": 11.84},
    {"structure": "Butler-fully", "power_total_w": 109.44},
]


@pytest.fixture
def summary_csv(tmp_path):
    path = tmp_path / "sweep.summary.csv"
    path.write_text(SUMMARY_CSV)
    return path


@pytest.fixture
def power_json(tmp_path):
    path = tmp_path / "power.json"
    path.write_text(json.dumps({"schema": "fpshybrid.power.v1",
                                "rows": POWER_ROWS}))
    return path
