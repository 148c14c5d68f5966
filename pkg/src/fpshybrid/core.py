"""Alternating minimization for the fixed-phase-shifter switch network.

The analog precoder is ``F_RF = S @ C`` with a binary switch matrix ``S`` and
a block-diagonal bank ``C`` of fixed phasors.  The digital part is
``F_BB = alpha * F_DD`` with a real gain and a semi-unitary ``F_DD``.  The
algorithm alternates two globally optimal block updates on the surrogate
objective

    J(alpha, S, F_DD) = alpha^2 * ||S||_F^2 - 2*alpha*Re tr(F_DD F_opt^H S C)

which upper-bounds the fitting error ``||F_opt - S C F_BB||_F^2`` up to the
constant ``||F_opt||_F^2``.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._kernels import alpha_scan
from .config import AnalogArchitecture, ConfigError


class DegenerateTargetError(ValueError):
    """All-zero projection: every gain is optimal with an all-off switch
    matrix, which would break the downstream power normalization."""


@dataclass(frozen=True)
class PhaseBank:
    """Block-diagonal matrix of the shared fixed phasors, one block per RF chain."""

    c_vec: np.ndarray        # (n_ps,) complex, entries of magnitude 1/sqrt(n_ps)
    n_chains: int
    matrix: np.ndarray       # (n_ps * n_chains, n_chains)

    def __post_init__(self):
        self.c_vec.setflags(write=False)
        self.matrix.setflags(write=False)

    @property
    def n_ps(self) -> int:
        return self.c_vec.size


def build_phase_bank(arch: AnalogArchitecture, n_chains: int) -> PhaseBank:
    if n_chains < 1:
        raise ConfigError("n_chains must be >= 1")
    c = np.exp(1j * np.asarray(arch.phases)) / np.sqrt(arch.n_ps)
    matrix = np.kron(np.eye(n_chains), c.reshape(-1, 1))
    return PhaseBank(c_vec=c, n_chains=n_chains, matrix=matrix)


def assemble_analog(s: np.ndarray, bank: PhaseBank) -> np.ndarray:
    """Analog precoder ``F_RF = S @ C``."""
    return s @ bank.matrix


def regime_for(n_chains: int, target_cols: int) -> str:
    """'tall' when the digital matrix has at least as many rows as columns."""
    return "tall" if n_chains >= target_cols else "fat"


def init_fdd(f_opt: np.ndarray, regime: str, n_chains: int) -> np.ndarray:
    """Initial semi-unitary digital matrix from the SVD of the target.

    Tall regime: the full right-singular basis padded with zero rows.
    Fat regime: the leading ``n_chains`` right-singular directions.
    """
    target_cols = f_opt.shape[1]
    if regime not in ("tall", "fat"):
        raise ValueError(f"unknown regime {regime!r}")
    if (regime == "tall") != (n_chains >= target_cols):
        raise ValueError(
            f"regime {regime!r} inconsistent with n_chains={n_chains}, "
            f"target_cols={target_cols}")
    _, _, vh = np.linalg.svd(f_opt, full_matrices=False)
    if regime == "tall":
        fdd = np.zeros((n_chains, target_cols), dtype=np.complex128)
        fdd[:target_cols] = vh
        return fdd
    return vh[:n_chains].copy()


@dataclass(frozen=True)
class SwitchUpdate:
    """Result of the joint gain/switch block update."""

    alpha: float
    s: np.ndarray            # binary (0.0/1.0) matrix, shape of the input
    f_min: float             # exact ||x - alpha*s||^2 for the returned pair
    n_candidates: int        # size of the pruned candidate set
    fallback: bool           # True when only endpoint gains were evaluated


def solve_switch_and_alpha(x_mat: np.ndarray) -> SwitchUpdate:
    """Globally optimal real gain and binary switch matrix for ``||X - a*S||_F^2``.

    Vectorizes ``X``, sorts it, and evaluates the piecewise-quadratic
    objective at the pruned prefix/suffix-mean candidates; the switch entries
    follow by thresholding against ``alpha / 2``.
    """
    x_mat = np.asarray(x_mat, dtype=np.float64)
    if not np.all(np.isfinite(x_mat)):
        raise ValueError("switch update input contains non-finite entries")
    if not np.any(x_mat):
        raise DegenerateTargetError("all-zero switch update input")
    xs = np.sort(x_mat.ravel())
    alpha, _, n_candidates, fallback = alpha_scan(xs)
    if alpha > 0:
        s = (x_mat > alpha / 2.0).astype(np.float64)
    else:
        s = (x_mat < alpha / 2.0).astype(np.float64)
    f_min = float(np.sum((x_mat - alpha * s) ** 2))
    return SwitchUpdate(alpha=float(alpha), s=s, f_min=f_min,
                        n_candidates=int(n_candidates), fallback=bool(fallback))


def update_fdd(m_mat: np.ndarray, regime: str) -> tuple[np.ndarray, float]:
    """Semi-unitary maximizer of ``Re tr(F_DD @ m_mat)`` (orthogonal Procrustes).

    ``m_mat = alpha * F_opt^H S C`` with shape (target_cols, n_chains).
    Returns the update and the attained value, the sum of singular values.
    """
    u, sv, vh = np.linalg.svd(m_mat, full_matrices=False)
    fdd = vh.conj().T @ u.conj().T
    if regime == "tall":
        assert fdd.shape[0] >= fdd.shape[1]
    return fdd, float(sv.sum())


@dataclass(frozen=True)
class StoppingRule:
    """Stop on relative surrogate decrease below ``rel_tol`` or ``max_iter``."""

    rel_tol: float = 1e-4
    max_iter: int = 100


@dataclass(frozen=True)
class AltMinState:
    """Converged (or iteration-capped) solver state.

    ``objective_trace`` holds the surrogate value after every block update
    (two entries per iteration) and is non-increasing.  ``bound_gaps`` records
    ``||S C F_DD||_F^2 - ||S||_F^2`` per iteration, which stays <= 0.
    """

    f_dd: np.ndarray
    alpha: float
    s: np.ndarray
    regime: str
    objective_trace: list[float]
    candidate_counts: list[int]
    bound_gaps: list[float]
    converged: bool
    n_iterations: int
    fallback_events: int = 0

    @property
    def f_bb(self) -> np.ndarray:
        return self.alpha * self.f_dd

    def f_rf(self, bank: PhaseBank) -> np.ndarray:
        return assemble_analog(self.s, bank)

    def p1_objective(self, f_opt: np.ndarray, bank: PhaseBank) -> float:
        """Fitting error ``||F_opt - S C F_BB||_F^2`` of this state."""
        return float(np.linalg.norm(f_opt - self.f_rf(bank) @ self.f_bb) ** 2)

    def to_json(self) -> str:
        s_bool = self.s.astype(bool)
        payload = {
            "alpha": self.alpha,
            "regime": self.regime,
            "s_shape": list(self.s.shape),
            "s_bits": base64.b64encode(np.packbits(s_bool)).decode("ascii"),
            "f_dd_real": self.f_dd.real.tolist(),
            "f_dd_imag": self.f_dd.imag.tolist(),
            "objective_trace": self.objective_trace,
            "candidate_counts": self.candidate_counts,
            "converged": self.converged,
            "n_iterations": self.n_iterations,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "AltMinState":
        data = json.loads(text)
        shape = tuple(data["s_shape"])
        bits = np.unpackbits(
            np.frombuffer(base64.b64decode(data["s_bits"]), dtype=np.uint8),
            count=shape[0] * shape[1])
        s = bits.reshape(shape).astype(np.float64)
        f_dd = np.asarray(data["f_dd_real"]) + 1j * np.asarray(data["f_dd_imag"])
        return cls(f_dd=f_dd, alpha=data["alpha"], s=s, regime=data["regime"],
                   objective_trace=list(data["objective_trace"]),
                   candidate_counts=list(data["candidate_counts"]),
                   bound_gaps=[], converged=data["converged"],
                   n_iterations=data["n_iterations"])

    def switch_grid(self) -> str:
        """0/1 text rendering of the switch matrix for inspection."""
        return "\n".join("".join(str(int(v)) for v in row) for row in self.s)


def altmin(f_opt: np.ndarray, arch: AnalogArchitecture, n_chains: int,
           stop: StoppingRule = StoppingRule()) -> AltMinState:
    """Alternating minimization for the fully-connected switch network.

    Alternates the joint (gain, switch) update and the Procrustes update of
    the semi-unitary digital matrix from the SVD-based initial point.  After
    convergence the gain is refit by exact least squares on the original
    fitting error: the surrogate's quadratic term ``||S||_F^2`` overestimates
    ``||S C F_DD||_F^2``, which biases the in-loop gain low, and the refit is
    invariant downstream (the transmit power normalization absorbs scale).
    """
    target_cols = f_opt.shape[1]
    regime = regime_for(n_chains, target_cols)
    bank = build_phase_bank(arch, n_chains)
    fdd = init_fdd(f_opt, regime, n_chains)

    trace: list[float] = []
    counts: list[int] = []
    gaps: list[float] = []
    fallbacks = 0
    alpha, s = 0.0, np.zeros((f_opt.shape[0], bank.matrix.shape[0]))
    converged = False
    n_iter = 0
    prev_obj = np.inf
    for n_iter in range(1, stop.max_iter + 1):
        x_mat = (f_opt @ fdd.conj().T @ bank.matrix.conj().T).real
        upd = solve_switch_and_alpha(x_mat)
        alpha, s = upd.alpha, upd.s
        counts.append(upd.n_candidates)
        fallbacks += upd.fallback
        n_on = float(s.sum())
        trace.append(upd.f_min - float(np.sum(x_mat ** 2)))

        m_mat = alpha * (f_opt.conj().T @ (s @ bank.matrix))
        fdd, nuclear = update_fdd(m_mat, regime)
        obj = alpha * alpha * n_on - 2.0 * nuclear
        trace.append(obj)
        gaps.append(float(np.linalg.norm(s @ bank.matrix @ fdd) ** 2) - n_on)

        if n_iter > 1 and prev_obj - obj <= stop.rel_tol * abs(prev_obj):
            converged = True
            break
        prev_obj = obj

    f_syn = s @ bank.matrix @ fdd
    denom = float(np.linalg.norm(f_syn) ** 2)
    if denom > 0.0:
        alpha = float(np.vdot(f_syn, f_opt).real / denom)

    return AltMinState(f_dd=fdd, alpha=alpha, s=s, regime=regime,
                       objective_trace=trace, candidate_counts=counts,
                       bound_gaps=gaps, converged=converged,
                       n_iterations=n_iter, fallback_events=fallbacks)


@dataclass(frozen=True)
class GroupSolution:
    """Assembly of independent per-group solves for the grouped mapping.

    ``s`` is the block-diagonal switch matrix; ``f_bb`` stacks the per-group
    gain-scaled digital blocks row-wise, so the overall gain is 1.
    """

    s: np.ndarray
    f_bb: np.ndarray
    states: tuple[AltMinState, ...] = field(repr=False)

    @property
    def alpha(self) -> float:
        return 1.0

    def f_rf(self, bank: PhaseBank) -> np.ndarray:
        return assemble_analog(self.s, bank)

    @property
    def total_objective(self) -> float:
        return sum(st.objective_trace[-1] for st in self.states)


def group_solve(f_opt: np.ndarray, arch: AnalogArchitecture, n_chains: int,
                stop: StoppingRule = StoppingRule()):
    """Solve the grouped mapping as independent fully-connected subproblems.

    Rows of the target are split into ``arch.n_groups`` slices, each solved
    with ``n_chains / n_groups`` RF chains; returns the single-group
    ``AltMinState`` unchanged when ``n_groups == 1``.
    """
    arch.validate_grouping(f_opt.shape[0], n_chains)
    eta = arch.n_groups
    if eta == 1:
        return altmin(f_opt, arch, n_chains, stop)
    rows_per = f_opt.shape[0] // eta
    chains_per = n_chains // eta
    states = tuple(
        altmin(f_opt[g * rows_per:(g + 1) * rows_per], arch, chains_per, stop)
        for g in range(eta))
    s = scipy.linalg.block_diag(*[st.s for st in states])
    f_bb = np.vstack([st.f_bb for st in states])
    return GroupSolution(s=s, f_bb=f_bb, states=states)
