"""Command-line entry points: run experiments, print the hardware table,
and run the quick oracle cross-checks."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError
from .core import solve_switch_and_alpha, update_fdd
from .harness import (describe_hardware, load_config, run_experiment,
                      write_outputs, write_power_json)
from .oracles import brute_force_alpha_switch


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output is not None:
        cfg = type(cfg)(**{**cfg.__dict__, "output_path": args.output})
    detail, summary = run_experiment(cfg, workers=args.workers)
    written = write_outputs(cfg, detail, summary)
    for kind, path in written.items():
        print(f"{kind}: {path}")
    n_failed = sum(1 for row in detail if row["status"] == "failed")
    if n_failed:
        print(f"{n_failed} realization rows failed", file=sys.stderr)
        return 1
    return 0


def _cmd_hardware(args) -> int:
    rows = describe_hardware(args.n_tx, args.n_rf, args.n_ps, args.groups)
    header = f"{'structure':<18}{'N_PS':>8}{'N_OC':>10}{'P_total [W]':>14}  note"
    print(header)
    for row in rows:
        print(f"{row['structure']:<18}{row['n_ps']:>8}{row['n_oc']:>10}"
              f"{row['power_total_w']:>14.4g}  {row['note']}")
    if args.json:
        write_power_json(rows, args.json)
        print(f"json: {args.json}")
    return 0


def _cmd_oracle_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = 0

    worst = 0.0
    for _ in range(args.trials):
        n = int(rng.integers(1, 11))
        x = rng.standard_normal(n)
        if not x.any():
            continue
        upd = solve_switch_and_alpha(x.reshape(1, -1))
        ref = brute_force_alpha_switch(x)
        worst = max(worst, abs(upd.f_min - ref.best_objective))
    ok = worst <= 1e-9
    failures += not ok
    print(f"gain/switch update vs subset enumeration: "
          f"max |diff| = {worst:.3e} {'PASS' if ok else 'FAIL'}")

    worst = 0.0
    for _ in range(args.trials):
        m = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
        fdd, nuclear = update_fdd(m, "fat")
        attained = float(np.trace(fdd @ m).real)
        worst = max(worst, abs(attained - nuclear))
    ok = worst <= 1e-9
    failures += not ok
    print(f"semi-unitary update vs nuclear norm:      "
          f"max |diff| = {worst:.3e} {'PASS' if ok else 'FAIL'}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpshybrid",
        description="Hybrid precoding with fixed phase shifters and a "
                    "dynamic switch network")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte-Carlo sweep from a config file")
    p_run.add_argument("config", help="YAML experiment config")
    p_run.add_argument("--output", help="override output path prefix")
    p_run.add_argument("--workers", type=int, default=None,
                       help="parallel realizations (default: $FPSHYBRID_WORKERS or 1)")
    p_run.set_defaults(func=_cmd_run)

    p_hw = sub.add_parser("hardware", help="print the hardware/power table")
    p_hw.add_argument("--n-tx", type=int, required=True)
    p_hw.add_argument("--n-rf", type=int, required=True)
    p_hw.add_argument("--n-ps", type=int, required=True)
    p_hw.add_argument("--groups", type=int, default=1)
    p_hw.add_argument("--json", help="also write the rows as JSON")
    p_hw.set_defaults(func=_cmd_hardware)

    p_oc = sub.add_parser("oracle-check",
                          help="cross-check closed-form updates against brute force")
    p_oc.add_argument("--trials", type=int, default=200)
    p_oc.add_argument("--seed", type=int, default=0)
    p_oc.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
