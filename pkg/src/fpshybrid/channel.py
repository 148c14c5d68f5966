"""Clustered multipath channel generation with uniform planar arrays.

The frequency-domain channel of each user is a sum of ``n_clusters`` clusters
of ``n_rays`` rays, each an outer product of array response vectors weighted
by an i.i.d. circular complex Gaussian gain.  Cluster ``i`` carries the
per-subcarrier phase ``exp(-2j*pi*i*f/F)``.  The normalization
``gamma = sqrt(n_tx * n_rx / (n_clusters * n_rays))`` makes the expected
squared Frobenius norm of each channel matrix equal to ``n_tx * n_rx``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import cluster_outer_sums
from .config import ChannelParams, SystemConfig


def array_response(azimuth: float, elevation: float,
                   dims: tuple[int, int]) -> np.ndarray:
    """Unit-norm steering vector of a half-wavelength-spaced planar array.

    Element ``(m, n)`` of a ``rows x cols`` array has phase
    ``pi * (m * sin(azimuth) * sin(elevation) + n * cos(elevation))``; the
    vector is flattened row-major and scaled by ``1/sqrt(rows*cols)``.
    """
    rows, cols = dims
    if rows < 1 or cols < 1:
        raise ValueError(f"array dims must be positive, got {dims}")
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    phase = np.pi * (m * np.sin(azimuth) * np.sin(elevation) + n * np.cos(elevation))
    a = np.exp(1j * phase).ravel()
    return a / np.sqrt(rows * cols)


def _response_matrix(az: np.ndarray, el: np.ndarray, dims) -> np.ndarray:
    """Stack of steering vectors for angle arrays of shape (n_cl, n_ray)."""
    out = np.empty(az.shape + (dims[0] * dims[1],), dtype=np.complex128)
    for idx in np.ndindex(az.shape):
        out[idx] = array_response(az[idx], el[idx], dims)
    return out


@dataclass(frozen=True)
class ChannelRealization:
    """Frequency-domain channels ``h[k, f]`` plus the per-ray draw behind them."""

    h: np.ndarray                 # (K, F, n_rx, n_tx) complex
    params: ChannelParams
    gains: np.ndarray             # (K, n_clusters, n_rays) complex
    angles: np.ndarray            # (K, 4, n_clusters, n_rays): tx az/el, rx az/el

    def __post_init__(self):
        if self.h.ndim != 4:
            raise ValueError(f"channel tensor must be 4-D, got shape {self.h.shape}")
        self.h.setflags(write=False)
        self.gains.setflags(write=False)
        self.angles.setflags(write=False)

    @property
    def n_users(self) -> int:
        return self.h.shape[0]

    @property
    def n_subcarriers(self) -> int:
        return self.h.shape[1]

    def save(self, path) -> None:
        """Serialize to a self-describing ``.npz`` file for replay."""
        np.savez(path, h=self.h, gains=self.gains, angles=self.angles,
                 n_clusters=self.params.n_clusters, n_rays=self.params.n_rays,
                 angle_spread_deg=self.params.angle_spread_deg,
                 tx_array_dims=np.asarray(self.params.tx_array_dims),
                 rx_array_dims=np.asarray(self.params.rx_array_dims),
                 seed=self.params.seed)

    @classmethod
    def load(cls, path) -> "ChannelRealization":
        data = np.load(path)
        params = ChannelParams(
            n_clusters=int(data["n_clusters"]), n_rays=int(data["n_rays"]),
            angle_spread_deg=float(data["angle_spread_deg"]),
            tx_array_dims=tuple(int(v) for v in data["tx_array_dims"]),
            rx_array_dims=tuple(int(v) for v in data["rx_array_dims"]),
            seed=int(data["seed"]))
        return cls(h=data["h"], params=params, gains=data["gains"],
                   angles=data["angles"])


def generate_channel(cfg: SystemConfig, params: ChannelParams) -> ChannelRealization:
    """Draw one channel realization, deterministic in ``params.seed``.

    Cluster-center azimuths are uniform on [0, 2*pi), elevations uniform on
    [-pi/2, pi/2]; ray offsets are Laplacian with standard deviation
    ``params.angle_spread_deg``.
    """
    params.validate_against(cfg)
    rng = np.random.default_rng(params.seed)
    K, F = cfg.n_users, cfg.n_subcarriers
    n_cl, n_ray = params.n_clusters, params.n_rays
    spread = np.deg2rad(params.angle_spread_deg) / np.sqrt(2.0)  # Laplace scale
    gamma = np.sqrt(cfg.n_tx * cfg.n_rx / (n_cl * n_ray))

    h = np.empty((K, F, cfg.n_rx, cfg.n_tx), dtype=np.complex128)
    gains = np.empty((K, n_cl, n_ray), dtype=np.complex128)
    angles = np.empty((K, 4, n_cl, n_ray))
    # cluster-index phase ramp across subcarriers
    ramp = np.exp(-2j * np.pi * np.outer(np.arange(n_cl), np.arange(F)) / F)

    for k in range(K):
        centers_az = rng.uniform(0.0, 2.0 * np.pi, size=(2, n_cl, 1))
        centers_el = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size=(2, n_cl, 1))
        offsets = rng.laplace(0.0, spread, size=(4, n_cl, n_ray))
        angles[k, 0] = centers_az[0] + offsets[0]   # tx azimuth
        angles[k, 1] = centers_el[0] + offsets[1]   # tx elevation
        angles[k, 2] = centers_az[1] + offsets[2]   # rx azimuth
        angles[k, 3] = centers_el[1] + offsets[3]   # rx elevation
        re, im = rng.standard_normal((2, n_cl, n_ray))
        gains[k] = (re + 1j * im) / np.sqrt(2.0)

        a_tx = _response_matrix(angles[k, 0], angles[k, 1], params.tx_array_dims)
        a_rx = _response_matrix(angles[k, 2], angles[k, 3], params.rx_array_dims)
        cluster_sums = cluster_outer_sums(gains[k], a_rx, a_tx)
        h[k] = gamma * np.einsum("if,irt->frt", ramp, cluster_sums)

    return ChannelRealization(h=h, params=params, gains=gains, angles=angles)
