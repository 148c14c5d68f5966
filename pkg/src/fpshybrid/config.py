"""System and channel configuration objects shared by all modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class ConfigError(ValueError):
    """Raised when a configuration violates one of its invariants."""


def snr_db_to_tx_power(snr_db: float, n_users: int, n_streams: int,
                       n_subcarriers: int, noise_power: float = 1.0) -> float:
    """Transmit power for a nominal SNR of ``P / (K * Ns * F * sigma_n^2)``."""
    return 10.0 ** (snr_db / 10.0) * n_users * n_streams * n_subcarriers * noise_power


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of the multiuser MIMO-OFDM downlink.

    The nominal SNR convention is ``P / (K * Ns * F * sigma_n^2)``, so
    ``tx_power``, ``noise_power`` and ``snr_db`` must be mutually consistent.
    """

    n_tx: int
    n_rx: int
    n_rf_tx: int
    n_rf_rx: int
    n_users: int
    n_streams: int
    n_subcarriers: int
    tx_power: float
    noise_power: float = 1.0
    snr_db: float = 0.0

    def __post_init__(self):
        counts = {
            "n_tx": self.n_tx, "n_rx": self.n_rx, "n_rf_tx": self.n_rf_tx,
            "n_rf_rx": self.n_rf_rx, "n_users": self.n_users,
            "n_streams": self.n_streams, "n_subcarriers": self.n_subcarriers,
        }
        for name, value in counts.items():
            if not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name}: must be a positive integer, got {value!r}")
        if not self.n_users * self.n_streams <= self.n_rf_tx < self.n_tx:
            raise ConfigError(
                f"transmit RF chains must satisfy K*Ns <= n_rf_tx < n_tx, got "
                f"K*Ns={self.n_users * self.n_streams}, n_rf_tx={self.n_rf_tx}, n_tx={self.n_tx}")
        if not self.n_streams <= self.n_rf_rx < self.n_rx:
            raise ConfigError(
                f"receive RF chains must satisfy Ns <= n_rf_rx < n_rx, got "
                f"Ns={self.n_streams}, n_rf_rx={self.n_rf_rx}, n_rx={self.n_rx}")
        if self.tx_power <= 0 or self.noise_power <= 0:
            raise ConfigError("tx_power and noise_power must be positive")
        expected = snr_db_to_tx_power(self.snr_db, self.n_users, self.n_streams,
                                      self.n_subcarriers, self.noise_power)
        if not math.isclose(self.tx_power, expected, rel_tol=1e-9):
            raise ConfigError(
                f"tx_power={self.tx_power} inconsistent with snr_db={self.snr_db} "
                f"(expected {expected})")

    @classmethod
    def from_snr(cls, snr_db: float, *, n_tx: int, n_rx: int, n_rf_tx: int,
                 n_rf_rx: int, n_users: int, n_streams: int, n_subcarriers: int,
                 noise_power: float = 1.0) -> "SystemConfig":
        """Build a config with the transmit power derived from the nominal SNR."""
        power = snr_db_to_tx_power(snr_db, n_users, n_streams, n_subcarriers, noise_power)
        return cls(n_tx=n_tx, n_rx=n_rx, n_rf_tx=n_rf_tx, n_rf_rx=n_rf_rx,
                   n_users=n_users, n_streams=n_streams, n_subcarriers=n_subcarriers,
                   tx_power=power, noise_power=noise_power, snr_db=snr_db)

    @property
    def snr_linear(self) -> float:
        return self.tx_power / (self.n_users * self.n_streams
                                * self.n_subcarriers * self.noise_power)

    @property
    def total_streams(self) -> int:
        """Number of columns of the combined digital precoder, K * Ns * F."""
        return self.n_users * self.n_streams * self.n_subcarriers


@dataclass(frozen=True)
class ChannelParams:
    """Clustered multipath channel parameters.

    ``angle_spread_deg`` is the standard deviation (degrees) of the Laplacian
    ray offsets around each cluster center, applied to both azimuth and
    elevation on both link ends.
    """

    n_clusters: int = 5
    n_rays: int = 10
    angle_spread_deg: float = 10.0
    tx_array_dims: tuple[int, int] = (1, 1)
    rx_array_dims: tuple[int, int] = (1, 1)
    seed: int = 0

    def __post_init__(self):
        if self.n_clusters < 1 or self.n_rays < 1:
            raise ConfigError("n_clusters and n_rays must be >= 1")
        for name in ("tx_array_dims", "rx_array_dims"):
            dims = getattr(self, name)
            if len(dims) != 2 or dims[0] < 1 or dims[1] < 1:
                raise ConfigError(f"{name}: must be a pair of positive integers")
        if self.angle_spread_deg < 0:
            raise ConfigError("angle_spread_deg must be non-negative")

    def validate_against(self, cfg: SystemConfig) -> None:
        if self.tx_array_dims[0] * self.tx_array_dims[1] != cfg.n_tx:
            raise ConfigError(
                f"tx_array_dims {self.tx_array_dims} do not multiply to n_tx={cfg.n_tx}")
        if self.rx_array_dims[0] * self.rx_array_dims[1] != cfg.n_rx:
            raise ConfigError(
                f"rx_array_dims {self.rx_array_dims} do not multiply to n_rx={cfg.n_rx}")


@dataclass(frozen=True)
class AnalogArchitecture:
    """Analog network description: fixed phase shifter bank plus grouping.

    ``n_groups = 1`` is the fully-connected mapping, ``n_groups = n_rf_tx``
    the partially-connected one.  Default phases are uniformly spaced on
    ``[0, 2*pi)``.
    """

    n_ps: int
    phases: tuple[float, ...] = field(default=())
    n_groups: int = 1

    def __post_init__(self):
        if self.n_ps < 1:
            raise ConfigError("n_ps must be >= 1")
        if self.n_groups < 1:
            raise ConfigError("n_groups must be >= 1")
        if not self.phases:
            uniform = tuple(2.0 * math.pi * i / self.n_ps for i in range(self.n_ps))
            object.__setattr__(self, "phases", uniform)
        elif len(self.phases) != self.n_ps:
            raise ConfigError(f"expected {self.n_ps} phases, got {len(self.phases)}")

    def validate_grouping(self, n_tx: int, n_rf: int) -> None:
        if self.n_groups > n_rf:
            raise ConfigError(f"n_groups={self.n_groups} exceeds RF chain count {n_rf}")
        if n_tx % self.n_groups or n_rf % self.n_groups:
            raise ConfigError(
                f"n_groups={self.n_groups} must divide n_tx={n_tx} and n_rf={n_rf}")
