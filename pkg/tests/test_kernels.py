import os
import subprocess
import sys

import numpy as np

from fpshybrid import _kernels


def test_alpha_scan_paths_agree():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        xs = np.sort(rng.standard_normal(n))
        if not xs.any():
            continue
        a_py, f_py, n_py, fb_py = _kernels._alpha_scan_py(xs)
        a_d, f_d, n_d, fb_d = _kernels.alpha_scan(xs)
        assert abs(f_py - f_d) < 1e-12
        assert abs(a_py - a_d) < 1e-12
        assert n_py == n_d and fb_py == fb_d


def test_alpha_scan_all_equal_fallback_free():
    xs = np.full(5, 2.0)
    a, f, n_cand, fallback = _kernels._alpha_scan_py(xs)
    assert a == 2.0 and abs(f) < 1e-12
    assert not fallback


def test_cluster_outer_sums_paths_agree():
    rng = np.random.default_rng(4)
    gains = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    a_rx = rng.standard_normal((3, 5, 4)) + 1j * rng.standard_normal((3, 5, 4))
    a_tx = rng.standard_normal((3, 5, 6)) + 1j * rng.standard_normal((3, 5, 6))
    ref = _kernels._cluster_outer_sums_py(gains, a_rx, a_tx)
    out = _kernels.cluster_outer_sums(gains, a_rx, a_tx)
    assert np.allclose(out, ref, atol=1e-12)


def test_env_flag_selects_numpy_path():
    code = ("import fpshybrid._kernels as k; "
            "assert not k.NUMBA_ENABLED; "
            "assert k.alpha_scan is k._alpha_scan_py")
    env = dict(os.environ, FPSHYBRID_NUMBA="0")
    subprocess.run([sys.executable, "-c", code], check=True, env=env)


def test_default_flag_prefers_numba():
    env = dict(os.environ)
    env.pop("FPSHYBRID_NUMBA", None)
    code = ("import fpshybrid._kernels as k; "
            "import numba; "
            "assert k.NUMBA_ENABLED")
    subprocess.run([sys.executable, "-c", code], check=True, env=env)
