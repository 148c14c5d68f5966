"""Fully digital block-diagonalization precoder: the approximation target.

Per (user, subcarrier), the precoder block lies in the null space of every
other user's channel; within that null space the columns are the dominant
right singular directions of the user's own projected channel.  Power is
equal per stream (unit-norm columns), so each block has squared Frobenius
norm ``n_streams``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .config import SystemConfig

_RANK_RTOL = 1e-10


class InfeasibleDimensionsError(ValueError):
    """Null space too small to carry the requested number of streams."""


@dataclass(frozen=True)
class DigitalPrecoderTarget:
    """Combined target matrix, columns grouped as (subcarrier-outer, user-inner)."""

    f_opt: np.ndarray        # (n_tx, K * Ns * F)
    n_users: int
    n_streams: int
    n_subcarriers: int

    def __post_init__(self):
        expected = self.n_users * self.n_streams * self.n_subcarriers
        if self.f_opt.shape[1] != expected:
            raise ValueError(
                f"f_opt has {self.f_opt.shape[1]} columns, expected {expected}")
        self.f_opt.setflags(write=False)

    def block_slice(self, user: int, subcarrier: int) -> slice:
        start = (subcarrier * self.n_users + user) * self.n_streams
        return slice(start, start + self.n_streams)

    def block(self, user: int, subcarrier: int) -> np.ndarray:
        return self.f_opt[:, self.block_slice(user, subcarrier)]

    def subcarrier_slice(self, subcarrier: int) -> slice:
        width = self.n_users * self.n_streams
        return slice(subcarrier * width, (subcarrier + 1) * width)


@dataclass(frozen=True)
class DigitalCombinerSet:
    """Per-(user, subcarrier) receive combiners with orthonormal columns."""

    w_opt: np.ndarray        # (K, F, n_rx, Ns)

    def __post_init__(self):
        self.w_opt.setflags(write=False)

    def block(self, user: int, subcarrier: int) -> np.ndarray:
        return self.w_opt[user, subcarrier]


def null_space_basis(stacked: np.ndarray, n_cols: int) -> np.ndarray:
    """Orthonormal basis of the null space of ``stacked`` (rows x n_cols)."""
    if stacked.shape[0] == 0:
        return np.eye(n_cols, dtype=np.complex128)
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(s > _RANK_RTOL * s[0])) if s.size else 0
    return vh[rank:].conj().T


def bd_digital_precoder(channel: ChannelRealization,
                        cfg: SystemConfig) -> tuple[DigitalPrecoderTarget,
                                                    DigitalCombinerSet]:
    """Block-diagonalization precoder and matched combiners per subcarrier."""
    K, F, Ns = cfg.n_users, cfg.n_subcarriers, cfg.n_streams
    if channel.h.shape != (K, F, cfg.n_rx, cfg.n_tx):
        raise ValueError(
            f"channel dims {channel.h.shape} do not match config "
            f"{(K, F, cfg.n_rx, cfg.n_tx)}")

    f_opt = np.empty((cfg.n_tx, K * Ns * F), dtype=np.complex128)
    w_opt = np.empty((K, F, cfg.n_rx, Ns), dtype=np.complex128)
    for f in range(F):
        for k in range(K):
            others = np.vstack([channel.h[j, f] for j in range(K) if j != k]) \
                if K > 1 else np.empty((0, cfg.n_tx))
            basis = null_space_basis(others, cfg.n_tx)
            if basis.shape[1] < Ns:
                raise InfeasibleDimensionsError(
                    f"user {k}, subcarrier {f}: null space dimension "
                    f"{basis.shape[1]} < n_streams={Ns}")
            u, _, vh = np.linalg.svd(channel.h[k, f] @ basis, full_matrices=False)
            start = (f * K + k) * Ns
            f_opt[:, start:start + Ns] = basis @ vh[:Ns].conj().T
            w_opt[k, f] = u[:, :Ns]
    target = DigitalPrecoderTarget(f_opt=f_opt, n_users=K, n_streams=Ns,
                                   n_subcarriers=F)
    return target, DigitalCombinerSet(w_opt=w_opt)
