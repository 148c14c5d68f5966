"""Brute-force references certifying the closed-form updates on tiny instances.

These enumerators share no solver code with the core module beyond elementary
matrix products, so they are valid independent oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class SearchSpaceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best_objective: float
    best_assignment: str
    enumerated_count: int


def brute_force_alpha_switch(x: np.ndarray, max_n: int = 20) -> OracleResult:
    """Exhaustive minimum of ``||x - alpha*s||^2`` over all binary s.

    Per subset the optimal gain is the mean of the selected entries; the
    empty subset scores ``sum(x^2)``.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    n = x.size
    if n > max_n:
        raise SearchSpaceTooLargeError(f"n={n} exceeds cap {max_n}")
    total_sq = float(x @ x)
    codes = np.arange(2 ** n, dtype=np.uint32)
    membership = (codes[:, None] >> np.arange(n)) & 1       # (2^n, n)
    counts = membership.sum(axis=1)
    sums = membership @ x
    obj = np.full(codes.size, total_sq)
    nonempty = counts > 0
    obj[nonempty] = total_sq - sums[nonempty] ** 2 / counts[nonempty]
    best = int(np.argmin(obj))
    if counts[best]:
        alpha = sums[best] / counts[best]
        descr = f"subset mask {best:b}, alpha={alpha:.12g}"
    else:
        descr = "empty subset, alpha unconstrained"
    return OracleResult(best_objective=float(obj[best]), best_assignment=descr,
                        enumerated_count=int(codes.size))


def exhaustive_codebook_precoder(f_opt: np.ndarray, phase_vec: np.ndarray,
                                 max_space: int = 4096) -> OracleResult:
    """Exhaustive lower bound for a single-RF-chain, single-column target.

    Enumerates every binary switch matrix; per matrix the optimal *complex*
    scalar gain is the least-squares fit, which relaxes the real-gain,
    semi-unitary parameterization and therefore lower-bounds its optimum.
    """
    f_opt = np.asarray(f_opt).ravel()
    n_tx = f_opt.size
    n_ps = phase_vec.size
    space = 2 ** (n_tx * n_ps)
    if space > max_space:
        raise SearchSpaceTooLargeError(
            f"search space 2^({n_tx}*{n_ps}) = {space} exceeds cap {max_space}")

    # per-row analog gains of every switch-row pattern
    patterns = np.arange(2 ** n_ps)
    row_gains = ((patterns[:, None] >> np.arange(n_ps)) & 1) @ phase_vec

    norm_sq = float(np.vdot(f_opt, f_opt).real)
    best_obj = norm_sq                              # all-off switch matrix
    best_rows = (0,) * n_tx
    for rows in itertools.product(range(2 ** n_ps), repeat=n_tx):
        g = row_gains[list(rows)]
        g_sq = float(np.vdot(g, g).real)
        if g_sq == 0.0:
            continue
        fit = abs(np.vdot(g, f_opt)) ** 2 / g_sq
        obj = norm_sq - fit
        if obj < best_obj:
            best_obj = obj
            best_rows = rows
    return OracleResult(best_objective=float(best_obj),
                        best_assignment=f"row patterns {best_rows}",
                        enumerated_count=space)
