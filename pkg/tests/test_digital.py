import numpy as np
import pytest

from fpshybrid import (ChannelParams, InfeasibleDimensionsError, SystemConfig,
                       bd_digital_precoder, generate_channel)
from fpshybrid.digital import DigitalPrecoderTarget, null_space_basis


def test_null_space_basis_annihilates(rng):
    a = rng.standard_normal((3, 8)) + 1j * rng.standard_normal((3, 8))
    basis = null_space_basis(a, 8)
    assert basis.shape == (8, 5)
    assert np.allclose(a @ basis, 0, atol=1e-12)
    assert np.allclose(basis.conj().T @ basis, np.eye(5), atol=1e-12)


def test_null_space_basis_empty_input():
    basis = null_space_basis(np.empty((0, 4)), 4)
    assert np.array_equal(basis, np.eye(4))


def test_target_column_layout(desk_cfg, desk_bd):
    target, _ = desk_bd
    K, Ns, F = desk_cfg.n_users, desk_cfg.n_streams, desk_cfg.n_subcarriers
    assert target.f_opt.shape == (desk_cfg.n_tx, K * Ns * F)
    # block (k, f) sits inside the contiguous slice of subcarrier f
    sl = target.block_slice(user=1, subcarrier=3)
    sc = target.subcarrier_slice(3)
    assert sc.start <= sl.start and sl.stop <= sc.stop
    assert np.array_equal(target.block(1, 3), target.f_opt[:, sl])


def test_bd_blocks_have_unit_columns(desk_bd, desk_cfg):
    target, _ = desk_bd
    for f in range(desk_cfg.n_subcarriers):
        for k in range(desk_cfg.n_users):
            block = target.block(k, f)
            assert np.allclose(np.linalg.norm(block, axis=0), 1.0, atol=1e-10)


def test_bd_nulls_other_users(desk_channel, desk_cfg, desk_bd):
    target, _ = desk_bd
    for f in range(desk_cfg.n_subcarriers):
        for k in range(desk_cfg.n_users):
            for j in range(desk_cfg.n_users):
                if j == k:
                    continue
                leak = desk_channel.h[j, f] @ target.block(k, f)
                assert np.linalg.norm(leak) < 1e-10


def test_combiners_orthonormal(desk_bd, desk_cfg):
    _, combiners = desk_bd
    for f in range(desk_cfg.n_subcarriers):
        for k in range(desk_cfg.n_users):
            w = combiners.block(k, f)
            assert np.allclose(w.conj().T @ w, np.eye(desk_cfg.n_streams),
                               atol=1e-10)


def test_combiner_matches_projected_channel(desk_channel, desk_cfg, desk_bd):
    # the combiner spans the left singular space of H_k projected on the
    # null-space basis, so |w^H H f| equals the top singular value
    target, combiners = desk_bd
    k, f = 0, 2
    g = combiners.block(k, f).conj().T @ desk_channel.h[k, f] @ target.block(k, f)
    assert abs(g[0, 0]) > 1e-6


def test_infeasible_streams_raise():
    # two users with 6 rx antennas each on an 8-antenna transmitter: the
    # other-user null space has 8-6=2 dims, below the 3 requested streams
    cfg = SystemConfig.from_snr(0.0, n_tx=8, n_rx=6, n_users=2, n_streams=3,
                                n_subcarriers=1, n_rf_tx=6, n_rf_rx=3)
    params = ChannelParams(tx_array_dims=(4, 2), rx_array_dims=(3, 2), seed=0)
    with pytest.raises(InfeasibleDimensionsError):
        bd_digital_precoder(generate_channel(cfg, params), cfg)


def test_target_column_count_validated(rng):
    with pytest.raises(ValueError, match="columns"):
        DigitalPrecoderTarget(f_opt=np.zeros((4, 5), dtype=complex),
                              n_users=2, n_streams=1, n_subcarriers=3)


def test_channel_shape_mismatch_rejected(desk_channel):
    bad_cfg = SystemConfig.from_snr(0.0, n_tx=16, n_rx=4, n_users=2,
                                    n_streams=1, n_subcarriers=8, n_rf_tx=2,
                                    n_rf_rx=1)
    with pytest.raises(ValueError, match="do not match"):
        bd_digital_precoder(desk_channel, bad_cfg)
