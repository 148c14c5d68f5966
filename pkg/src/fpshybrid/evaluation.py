"""Spectral efficiency, the random-switch baseline, and the hardware model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cancellation import HybridSolution, build_hybrid_solution
from .channel import ChannelRealization
from .config import AnalogArchitecture, SystemConfig
from .core import (AltMinState, StoppingRule, build_phase_bank, init_fdd,
                   regime_for, update_fdd)
from .digital import DigitalCombinerSet, DigitalPrecoderTarget

LN2 = math.log(2.0)


class SingularCombinerError(ValueError):
    """Receive combiner lost rank; the noise covariance is not invertible."""


@dataclass(frozen=True)
class DigitalSolution:
    """Adapter exposing the fully digital baseline as a transmit/receive chain."""

    target: DigitalPrecoderTarget
    combiners: DigitalCombinerSet

    def transmit_chain(self, user: int, subcarrier: int) -> np.ndarray:
        return self.target.block(user, subcarrier)

    def combiner(self, user: int, subcarrier: int) -> np.ndarray:
        return self.combiners.block(user, subcarrier)


def spectral_efficiency(channel: ChannelRealization, solution,
                        cfg: SystemConfig) -> tuple[np.ndarray, float]:
    """Gaussian-signaling sum rate with a fixed linear receiver.

    Per (user, subcarrier) the rate is
    ``log2 det(I + snr * Rw^-1 G G^H)`` with ``G`` the combined
    receive-channel-transmit chain and ``Rw`` the combiner Gram matrix
    coloring the noise; user rates are averaged over subcarriers.
    """
    K, F, Ns = cfg.n_users, cfg.n_subcarriers, cfg.n_streams
    snr = cfg.snr_linear
    per_user = np.zeros(K)
    eye = np.eye(Ns)
    for k in range(K):
        for f in range(F):
            w = solution.combiner(k, f)
            rw = w.conj().T @ w
            if np.linalg.cond(rw) > 1e12:
                raise SingularCombinerError(
                    f"combiner of user {k}, subcarrier {f} is rank deficient")
            g = w.conj().T @ channel.h[k, f] @ solution.transmit_chain(k, f)
            mat = eye + snr * np.linalg.solve(rw, g @ g.conj().T)
            _, logdet = np.linalg.slogdet(mat)
            per_user[k] += logdet / LN2
    per_user /= F
    return per_user, float(per_user.sum())


def random_switch_solve(f_opt: np.ndarray, arch: AnalogArchitecture,
                        n_chains: int, rng: np.random.Generator,
                        stop: StoppingRule = StoppingRule()) -> AltMinState:
    """Baseline solver: Bernoulli(1/2) switch matrix, then alternate the
    scalar least-squares gain and the Procrustes digital update."""
    bank = build_phase_bank(arch, n_chains)
    shape = (f_opt.shape[0], bank.matrix.shape[0])
    resamples = 0
    s = rng.integers(0, 2, size=shape).astype(np.float64)
    while not s.any():
        s = rng.integers(0, 2, size=shape).astype(np.float64)
        resamples += 1
    n_on = float(s.sum())
    regime = regime_for(n_chains, f_opt.shape[1])
    fdd = init_fdd(f_opt, regime, n_chains)

    trace: list[float] = []
    gaps: list[float] = []
    alpha = 1.0
    converged = False
    n_iter = 0
    prev_obj = np.inf
    for n_iter in range(1, stop.max_iter + 1):
        x_mat = (f_opt @ fdd.conj().T @ bank.matrix.conj().T).real
        alpha = float((s * x_mat).sum() / n_on)
        trace.append(alpha * alpha * n_on - 2.0 * alpha * float((s * x_mat).sum()))
        m_mat = alpha * (f_opt.conj().T @ (s @ bank.matrix))
        fdd, nuclear = update_fdd(m_mat, regime)
        obj = alpha * alpha * n_on - 2.0 * nuclear
        trace.append(obj)
        gaps.append(float(np.linalg.norm(s @ bank.matrix @ fdd) ** 2) - n_on)
        if n_iter > 1 and prev_obj - obj <= stop.rel_tol * abs(prev_obj):
            converged = True
            break
        prev_obj = obj

    return AltMinState(f_dd=fdd, alpha=alpha, s=s, regime=regime,
                       objective_trace=trace, candidate_counts=[],
                       bound_gaps=gaps, converged=converged,
                       n_iterations=n_iter, fallback_events=resamples)


# per-component power from the hardware comparison table, in milliwatts
POWER_MW = {"adaptive": 50, "fixed": 20, "multi-channel-fixed": 20,
            "switch": 5, "coupler": 10}


@dataclass(frozen=True)
class HardwareProfile:
    """Component counts and powers of one analog-network structure."""

    structure: str
    n_ps: int
    ps_type: str                    # adaptive | fixed | multi-channel-fixed
    other_kind: str = "none"        # none | switch | coupler
    n_oc: int = 0
    p_ps_mw: int = 0
    p_oc_mw: int = 0
    note: str = ""

    def __post_init__(self):
        if self.p_ps_mw == 0:
            object.__setattr__(self, "p_ps_mw", POWER_MW[self.ps_type])
        if self.p_oc_mw == 0 and self.other_kind != "none":
            object.__setattr__(self, "p_oc_mw", POWER_MW[self.other_kind])

    @property
    def power_total_mw(self) -> int:
        return self.n_ps * self.p_ps_mw + self.n_oc * self.p_oc_mw

    @property
    def power_total_w(self) -> float:
        return self.power_total_mw / 1000


def power_total(profile: HardwareProfile) -> float:
    """Total analog-network power ``N_PS*P_PS + N_OC*P_OC`` in watts (exact)."""
    return profile.power_total_w


def hardware_profiles(n_tx: int, n_rf: int, n_ps: int,
                      n_groups: int = 1,
                      fps_accounting: str = "per-chain") -> list[HardwareProfile]:
    """Component counts of all compared structures for one system size.

    ``fps_accounting='per-chain'`` counts ``n_ps * n_rf`` fixed shifters for
    the switch-network structure (each shifter feeds every RF chain), which is
    the convention of the power-comparison table; ``'physical'`` counts the
    ``n_ps`` physical devices.
    """
    # Butler counts assume power-of-two array sizes; otherwise round the
    # log2 stage count down, which is how the comparison table handles it.
    log2_nt = int(math.floor(math.log2(n_tx)))
    log2_sub = int(math.floor(math.log2(n_tx // n_rf)))
    butler_exact = (n_tx == 2 ** log2_nt) and (n_tx // n_rf == 2 ** log2_sub)
    butler_note = "" if butler_exact else "log2 stage count rounded down"
    if fps_accounting == "per-chain":
        fps_nps = n_ps * n_rf
    elif fps_accounting == "physical":
        fps_nps = n_ps
    else:
        raise ValueError(f"unknown fps_accounting {fps_accounting!r}")

    profiles = [
        HardwareProfile("SPS-fully", n_rf * n_tx, "adaptive"),
        HardwareProfile("SPS-partial", n_tx, "adaptive"),
        HardwareProfile("Butler-fully",
                        n_rf * n_tx // 2 * (log2_nt - 1),
                        "fixed", "coupler",
                        n_rf * n_tx // 2 * log2_nt,
                        note=butler_note),
        HardwareProfile("Butler-partial",
                        n_tx // 2 * (log2_sub - 1),
                        "fixed", "coupler",
                        n_tx // 2 * log2_sub,
                        note=butler_note),
        HardwareProfile("DPS-fully", 2 * n_rf * n_tx, "adaptive"),
        HardwareProfile("DPS-partial", 2 * n_tx, "adaptive"),
    ]
    if n_groups == 1:
        structure = "FPS-fully"
    else:
        structure = f"FPS-group({n_groups})"
    profiles.append(
        HardwareProfile(structure, fps_nps, "multi-channel-fixed", "switch",
                        n_ps * n_rf * n_tx // n_groups))
    return profiles


@dataclass(frozen=True)
class EvaluationReport:
    """One method's outcome on one channel realization."""

    method: str
    se_bits_per_hz: float
    per_user_se: tuple[float, ...]
    seed: int
    iterations: int = 0
    candidate_set_sizes: tuple[int, ...] = ()
    power_total_w: float | None = None
    config_echo: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "se_bits_per_hz": self.se_bits_per_hz,
            "per_user_se": list(self.per_user_se),
            "seed": self.seed,
            "iterations": self.iterations,
            "candidate_set_sizes": list(self.candidate_set_sizes),
            "power_total_w": self.power_total_w,
            "config": self.config_echo,
        }


def random_switch_baseline(cfg: SystemConfig, arch: AnalogArchitecture,
                           channel: ChannelRealization, seed: int,
                           target: DigitalPrecoderTarget,
                           combiner_targets: DigitalCombinerSet,
                           combiner_mode: str = "digital",
                           stop: StoppingRule = StoppingRule()) -> EvaluationReport:
    """Full pipeline with a random switch matrix instead of the solver."""
    rng = np.random.default_rng(seed)
    state = random_switch_solve(target.f_opt, arch, cfg.n_rf_tx, rng, stop)
    solution = build_hybrid_solution(channel, cfg, arch, target,
                                     combiner_targets, combiner_mode, stop,
                                     state=state)
    per_user, total = spectral_efficiency(channel, solution, cfg)
    return EvaluationReport(method="random-switch", se_bits_per_hz=total,
                            per_user_se=tuple(per_user), seed=seed,
                            iterations=state.n_iterations)
