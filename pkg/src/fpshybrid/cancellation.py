"""Second-layer baseband processing: interference nulling and power scaling.

The first-layer hybrid precoder only approximates the fully digital target
and leaves residual inter-user interference.  A per-(user, subcarrier)
nulling matrix acting on the composite digital precoder removes it exactly,
after which a single scalar brings the total transmit power back to
``K * Ns * F``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .config import AnalogArchitecture, SystemConfig
from .core import (AltMinState, GroupSolution, PhaseBank, StoppingRule,
                   altmin, build_phase_bank, group_solve)
from .digital import (DigitalCombinerSet, DigitalPrecoderTarget,
                      InfeasibleDimensionsError, null_space_basis)


class ZeroPowerError(ValueError):
    """Degenerate analog precoder: nothing to normalize."""


@dataclass(frozen=True)
class Combiners:
    """Receive processing per user; ``w_rf`` is None in digital-combiner mode."""

    w_bb: np.ndarray                 # (K, F, rows, Ns); rows = n_rx or n_rf_rx
    w_rf: np.ndarray | None = None   # (K, n_rx, n_rf_rx)

    def __post_init__(self):
        self.w_bb.setflags(write=False)
        if self.w_rf is not None:
            self.w_rf.setflags(write=False)

    def combiner(self, user: int, subcarrier: int) -> np.ndarray:
        """Overall receive matrix ``W_RF @ W_BB`` (n_rx x Ns)."""
        if self.w_rf is None:
            return self.w_bb[user, subcarrier]
        return self.w_rf[user] @ self.w_bb[user, subcarrier]


def design_hybrid_combiners(channel: ChannelRealization, cfg: SystemConfig,
                            arch: AnalogArchitecture,
                            targets: DigitalCombinerSet,
                            mode: str = "digital",
                            stop: StoppingRule = StoppingRule()) -> Combiners:
    """Receive-side counterpart of the transmit design.

    ``digital`` mode passes the fully digital combiners through; ``hybrid``
    mode runs the switch-network solver per user on the concatenation of its
    per-subcarrier combiner targets.
    """
    if mode == "digital":
        return Combiners(w_bb=targets.w_opt.copy())
    if mode != "hybrid":
        raise ValueError(f"unknown combiner mode {mode!r}")
    K, F, Ns = cfg.n_users, cfg.n_subcarriers, cfg.n_streams
    m = cfg.n_rf_rx
    bank = build_phase_bank(arch, m)
    w_rf = np.empty((K, cfg.n_rx, m), dtype=np.complex128)
    w_bb = np.empty((K, F, m, Ns), dtype=np.complex128)
    for k in range(K):
        target = np.hstack([targets.w_opt[k, f] for f in range(F)])
        state = altmin(target, arch, m, stop)
        w_rf[k] = state.f_rf(bank)
        f_bb = state.f_bb
        for f in range(F):
            w_bb[k, f] = f_bb[:, f * Ns:(f + 1) * Ns]
    return Combiners(w_bb=w_bb, w_rf=w_rf)


def effective_channel(channel: ChannelRealization, f_rf: np.ndarray,
                      f_bb: np.ndarray, combiners: Combiners,
                      target: DigitalPrecoderTarget,
                      subcarrier: int) -> np.ndarray:
    """Per-user effective channels after precoder and combiner, stacked.

    Returns an array of shape (K, Ns, K*Ns) where row block ``k`` is
    ``W_k^H H_k F_RF F_BB(f)`` with the composite digital precoder of the
    given subcarrier.
    """
    K = channel.n_users
    f_bb_f = f_bb[:, target.subcarrier_slice(subcarrier)]
    tx_part = f_rf @ f_bb_f
    out = np.empty((K, target.n_streams, K * target.n_streams),
                   dtype=np.complex128)
    for k in range(K):
        w = combiners.combiner(k, subcarrier)
        out[k] = w.conj().T @ channel.h[k, subcarrier] @ tx_part
    return out


def bd_second_layer(h_eff: np.ndarray) -> np.ndarray:
    """Nulling matrices for one subcarrier from the effective channels.

    ``h_eff`` has shape (K, Ns, K*Ns).  Block ``k`` of the result spans the
    null space of the other users' effective channels, rotated so the own
    effective channel is diagonalized on it.
    """
    K, Ns, width = h_eff.shape
    out = np.empty((K, width, Ns), dtype=np.complex128)
    for k in range(K):
        others = np.vstack([h_eff[j] for j in range(K) if j != k]) \
            if K > 1 else np.empty((0, width))
        basis = null_space_basis(others, width)
        if basis.shape[1] < Ns:
            raise InfeasibleDimensionsError(
                f"effective null space dimension {basis.shape[1]} < {Ns}")
        _, _, vh = np.linalg.svd(h_eff[k] @ basis, full_matrices=False)
        out[k] = basis @ vh[:Ns].conj().T
    return out


def normalize_kappa(f_rf: np.ndarray, f_bb: np.ndarray, f_bd: np.ndarray,
                    target: DigitalPrecoderTarget) -> float:
    """Power normalization so the total transmit power equals ``K * Ns * F``."""
    K, F = target.n_users, target.n_subcarriers
    denom = 0.0
    for f in range(F):
        chain = f_rf @ f_bb[:, target.subcarrier_slice(f)]
        for k in range(K):
            denom += float(np.linalg.norm(chain @ f_bd[k, f]) ** 2)
    if denom <= 0.0:
        raise ZeroPowerError("zero transmit power before normalization")
    return K * target.n_streams * F / denom


@dataclass(frozen=True)
class HybridSolution:
    """Full transmit/receive chain of one solved instance."""

    cfg: SystemConfig
    bank: PhaseBank
    s: np.ndarray
    f_bb: np.ndarray                  # (n_rf_tx, K*Ns*F), gain folded in
    f_bd: np.ndarray                  # (K, F, K*Ns, Ns)
    kappa: float
    combiners: Combiners
    target: DigitalPrecoderTarget
    state: AltMinState | GroupSolution | None = None

    @property
    def f_rf(self) -> np.ndarray:
        return self.s @ self.bank.matrix

    def transmit_chain(self, user: int, subcarrier: int) -> np.ndarray:
        """Effective transmit matrix ``F_RF F_B(k,f)`` (n_tx x Ns)."""
        f_bb_f = self.f_bb[:, self.target.subcarrier_slice(subcarrier)]
        return np.sqrt(self.kappa) * (self.f_rf @ f_bb_f
                                      @ self.f_bd[user, subcarrier])

    def combiner(self, user: int, subcarrier: int) -> np.ndarray:
        return self.combiners.combiner(user, subcarrier)

    def total_power(self) -> float:
        return sum(float(np.linalg.norm(self.transmit_chain(k, f)) ** 2)
                   for k in range(self.cfg.n_users)
                   for f in range(self.cfg.n_subcarriers))


def build_hybrid_solution(channel: ChannelRealization, cfg: SystemConfig,
                          arch: AnalogArchitecture,
                          target: DigitalPrecoderTarget,
                          combiner_targets: DigitalCombinerSet,
                          combiner_mode: str = "digital",
                          stop: StoppingRule = StoppingRule(),
                          state: AltMinState | GroupSolution | None = None,
                          rx_arch: AnalogArchitecture | None = None) -> HybridSolution:
    """Run the full pipeline: switch-network solve, combiners, nulling, power.

    A precomputed solver ``state`` (e.g. from the random-switch baseline or a
    grouped solve) can be passed in; otherwise the grouped solver is run,
    which reduces to the fully-connected one for ``arch.n_groups == 1``.
    """
    bank = build_phase_bank(arch, cfg.n_rf_tx)
    if state is None:
        state = group_solve(target.f_opt, arch, cfg.n_rf_tx, stop)
    combiners = design_hybrid_combiners(
        channel, cfg, rx_arch if rx_arch is not None else arch,
        combiner_targets, mode=combiner_mode, stop=stop)

    f_rf = state.f_rf(bank)
    f_bb = state.f_bb
    K, F = cfg.n_users, cfg.n_subcarriers
    f_bd = np.empty((K, F, K * cfg.n_streams, cfg.n_streams), dtype=np.complex128)
    for f in range(F):
        h_eff = effective_channel(channel, f_rf, f_bb, combiners, target, f)
        f_bd[:, f] = bd_second_layer(h_eff)
    kappa = normalize_kappa(f_rf, f_bb, f_bd, target)
    return HybridSolution(cfg=cfg, bank=bank, s=state.s, f_bb=f_bb, f_bd=f_bd,
                          kappa=kappa, combiners=combiners, target=target,
                          state=state)
