import numpy as np
import pytest

from fpshybrid import (AnalogArchitecture, ChannelParams, SystemConfig,
                       bd_digital_precoder, generate_channel)


@pytest.fixture(scope="session")
def desk_cfg():
    return SystemConfig.from_snr(0.0, n_tx=36, n_rx=4, n_users=2, n_streams=1,
                                 n_subcarriers=8, n_rf_tx=2, n_rf_rx=1)


@pytest.fixture(scope="session")
def desk_params():
    return ChannelParams(tx_array_dims=(6, 6), rx_array_dims=(2, 2), seed=7)


@pytest.fixture(scope="session")
def desk_arch():
    return AnalogArchitecture(n_ps=15)


@pytest.fixture(scope="session")
def desk_channel(desk_cfg, desk_params):
    return generate_channel(desk_cfg, desk_params)


@pytest.fixture(scope="session")
def desk_bd(desk_cfg, desk_channel):
    return bd_digital_precoder(desk_channel, desk_cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
