"""Throughput comparison of the numba kernels against the numpy fallback.

Run as ``python benchmarks/bench_kernels.py``; the numba path must be enabled
(do not set FPSHYBRID_NUMBA=0), since both implementations are imported from
the same process and timed side by side.
"""

import argparse
import time

import numpy as np

from fpshybrid import _kernels


def _time(fn, args_list, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_alpha_scan(rng, repeats):
    print(f"{'alpha_scan':<22}{'n':>8}{'numpy [ms]':>12}{'numba [ms]':>12}"
          f"{'speedup':>9}")
    for n in (64, 512, 4096, 32768):
        args = [(np.sort(rng.standard_normal(n)),) for _ in range(50)]
        _kernels._alpha_scan_nb(*args[0])      # trigger compilation
        t_py = _time(_kernels._alpha_scan_py, args, repeats)
        t_nb = _time(_kernels._alpha_scan_nb, args, repeats)
        print(f"{'':<22}{n:>8}{t_py * 1e3:>12.2f}{t_nb * 1e3:>12.2f}"
              f"{t_py / t_nb:>9.2f}x")


def bench_cluster_outer_sums(rng, repeats):
    print(f"{'cluster_outer_sums':<22}{'size':>8}{'numpy [ms]':>12}"
          f"{'numba [ms]':>12}{'speedup':>9}")
    for n_rx, n_tx in ((4, 36), (16, 144), (16, 256)):
        shape = (5, 10)
        args = []
        for _ in range(20):
            gains = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            a_rx = (rng.standard_normal(shape + (n_rx,))
                    + 1j * rng.standard_normal(shape + (n_rx,)))
            a_tx = (rng.standard_normal(shape + (n_tx,))
                    + 1j * rng.standard_normal(shape + (n_tx,)))
            args.append((gains, a_rx, a_tx))
        _kernels._cluster_outer_sums_nb(*args[0])
        t_py = _time(_kernels._cluster_outer_sums_py, args, repeats)
        t_nb = _time(_kernels._cluster_outer_sums_nb, args, repeats)
        print(f"{'':<22}{n_rx}x{n_tx:>4}{t_py * 1e3:>12.2f}{t_nb * 1e3:>12.2f}"
              f"{t_py / t_nb:>9.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not _kernels.NUMBA_ENABLED:
        raise SystemExit("numba path disabled (FPSHYBRID_NUMBA=0); "
                         "nothing to compare")
    rng = np.random.default_rng(args.seed)
    bench_alpha_scan(rng, args.repeats)
    print()
    bench_cluster_outer_sums(rng, args.repeats)


if __name__ == "__main__":
    main()
