"""Scenario construction: power model, pathloss, Rayleigh channel draws.

Conventions:
- Noise power is the total noise per receive antenna across the whole band,
  so -110 dBm becomes sigma^2 = 10 ** ((-110 - 30) / 10) W.
- Small-scale fading entries are circularly-symmetric complex Gaussian with
  unit variance (0.5 per real and imaginary part).
- Randomness comes from numpy's PCG64 generator (``np.random.default_rng``).
  User i draws from the child stream ``SeedSequence(seed).spawn(K)[i]`` so a
  user's channel depends only on (seed, i, d_i).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Reference deployment: 5 MHz band, -110 dBm noise, macro-cell power model.
REFERENCE_BANDWIDTH_HZ = 5e6
REFERENCE_NOISE_DBM = -110.0
REFERENCE_ETA = 0.38
REFERENCE_P_DYN_W = 83.0
REFERENCE_P_STA_W = 45.5

PATHLOSS_INTERCEPT_DB = 128.1
PATHLOSS_SLOPE_DB = 37.6


@dataclass(frozen=True)
class PowerModel:
    """Base-station power consumption: P/eta + M*p_dyn + p_sta."""

    eta: float
    p_dyn: float
    p_sta: float

    def __post_init__(self) -> None:
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.p_dyn < 0.0:
            raise ValueError(f"p_dyn must be >= 0, got {self.p_dyn}")
        if self.p_sta < 0.0:
            raise ValueError(f"p_sta must be >= 0, got {self.p_sta}")

    def circuit_power(self, m: int) -> float:
        """Power drawn with zero transmit power: M*p_dyn + p_sta."""
        return m * self.p_dyn + self.p_sta


@dataclass(frozen=True)
class ChannelSet:
    """K downlink channels H_i (N x M) plus noise power and bandwidth."""

    channels: tuple[np.ndarray, ...]
    noise_power: float
    bandwidth: float
    m_antennas: int
    n_antennas: int

    def __post_init__(self) -> None:
        if self.noise_power <= 0.0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if self.bandwidth <= 0.0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        if not self.channels:
            raise ValueError("channel set needs at least one user")
        shape = (self.n_antennas, self.m_antennas)
        for i, h in enumerate(self.channels):
            if h.shape != shape:
                raise ValueError(f"channel {i} has shape {h.shape}, expected {shape}")
            if not np.all(np.isfinite(h)):
                raise ValueError(f"channel {i} has non-finite entries")

    @classmethod
    def from_matrices(
        cls,
        channels: Sequence[np.ndarray],
        noise_power: float,
        bandwidth: float,
    ) -> ChannelSet:
        """Build a channel set, inferring M and N from the first matrix."""
        mats = tuple(np.atleast_2d(np.asarray(h, dtype=complex)) for h in channels)
        if not mats:
            raise ValueError("channel set needs at least one user")
        n, m = mats[0].shape
        return cls(
            channels=mats,
            noise_power=float(noise_power),
            bandwidth=float(bandwidth),
            m_antennas=m,
            n_antennas=n,
        )

    @property
    def k_users(self) -> int:
        return len(self.channels)

    def permuted(self, order: Sequence[int]) -> ChannelSet:
        """Same channel set with users reordered by *order*."""
        return ChannelSet(
            channels=tuple(self.channels[j] for j in order),
            noise_power=self.noise_power,
            bandwidth=self.bandwidth,
            m_antennas=self.m_antennas,
            n_antennas=self.n_antennas,
        )


@dataclass(frozen=True)
class Scenario:
    channel_set: ChannelSet
    power_model: PowerModel
    rng_seed: int
    distances: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if any(d <= 0.0 for d in self.distances):
            raise ValueError("distances must be > 0")


def total_power(pm: PowerModel, p_transmit: float, m: int) -> float:
    """Total consumed power P/eta + M*p_dyn + p_sta in Watts."""
    if p_transmit < 0.0:
        raise ValueError(f"transmit power must be >= 0, got {p_transmit}")
    if m < 1:
        raise ValueError(f"antenna count must be >= 1, got {m}")
    if pm.circuit_power(m) <= 0.0:
        raise ValueError(f"circuit power M*p_dyn + p_sta must be > 0, got {pm.circuit_power(m)} at M = {m}")
    return p_transmit / pm.eta + pm.circuit_power(m)


def pathloss_db(d_km: float) -> float:
    """128.1 + 37.6*log10(d) with d in kilometres."""
    if d_km <= 0.0:
        raise ValueError(f"distance must be > 0 km, got {d_km}")
    return PATHLOSS_INTERCEPT_DB + PATHLOSS_SLOPE_DB * math.log10(d_km)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def rayleigh_matrix(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n x m matrix of i.i.d. CN(0, 1) entries."""
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2.0)


def draw_channels(
    seed: int,
    m: int,
    n: int,
    k: int,
    distances: Sequence[float],
    noise_dbm: float,
    bandwidth: float,
) -> ChannelSet:
    """Draw H_i = sqrt(10^(-PL(d_i)/10)) * G_i for K users, deterministic in *seed*."""
    if min(m, n, k) < 1:
        raise ValueError(f"m, n, k must be >= 1, got m={m}, n={n}, k={k}")
    if len(distances) != k:
        raise ValueError(f"expected {k} distances, got {len(distances)}")

    streams = np.random.SeedSequence(seed).spawn(k)
    channels = []
    for i, (stream, d) in enumerate(zip(streams, distances)):
        gain = math.sqrt(db_to_linear(-pathloss_db(float(d))))
        channels.append(gain * rayleigh_matrix(np.random.default_rng(stream), n, m))
        logger.debug("user %d: d=%.3f km, amplitude gain %.3e", i, d, gain)

    return ChannelSet(
        channels=tuple(channels),
        noise_power=dbm_to_watts(noise_dbm),
        bandwidth=float(bandwidth),
        m_antennas=m,
        n_antennas=n,
    )


def build_scenario(
    seed: int,
    m: int,
    n: int,
    k: int,
    distances: Sequence[float],
    noise_dbm: float,
    bandwidth: float,
    power_model: PowerModel,
) -> Scenario:
    ch = draw_channels(seed, m, n, k, distances, noise_dbm, bandwidth)
    return Scenario(
        channel_set=ch,
        power_model=power_model,
        rng_seed=seed,
        distances=tuple(float(d) for d in distances),
    )


def reference_power_model() -> PowerModel:
    return PowerModel(eta=REFERENCE_ETA, p_dyn=REFERENCE_P_DYN_W, p_sta=REFERENCE_P_STA_W)


def reference_scenario(seed: int, m: int = 4, n: int = 4, k: int = 10, d_km: float = 1.0) -> Scenario:
    """Scenario with the reference deployment constants and all users at *d_km*."""
    return build_scenario(
        seed=seed,
        m=m,
        n=n,
        k=k,
        distances=[d_km] * k,
        noise_dbm=REFERENCE_NOISE_DBM,
        bandwidth=REFERENCE_BANDWIDTH_HZ,
        power_model=reference_power_model(),
    )
