"""Random instance builders shared by the tests."""

from __future__ import annotations

import numpy as np

from eebc.objective import CovarianceSet
from eebc.system_model import ChannelSet, PowerModel

# Unit-scale power model: circuit power comparable to a few Watts of transmit power.
UNIT_PM = PowerModel(eta=0.5, p_dyn=1.0, p_sta=1.0)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return b + b.conj().T


def random_pd(rng: np.random.Generator, n: int, shift: float = 0.5) -> np.ndarray:
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return b @ b.conj().T + shift * np.eye(n)


def random_psd(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (b @ b.conj().T) / n


def random_channels(
    rng: np.random.Generator,
    m: int,
    n: int,
    k: int,
    noise: float = 1.0,
    bandwidth: float = 1.0,
    gain: float = 1.0,
) -> ChannelSet:
    mats = [
        gain * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2.0)
        for _ in range(k)
    ]
    return ChannelSet.from_matrices(mats, noise_power=noise, bandwidth=bandwidth)


def random_covariances(rng: np.random.Generator, n: int, k: int, scale: float = 1.0) -> CovarianceSet:
    return CovarianceSet.from_matrices([random_psd(rng, n, scale) for _ in range(k)])


