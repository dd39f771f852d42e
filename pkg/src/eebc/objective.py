"""MAC sum rate, the EE objective g, and the per-user decomposition.

The decomposition splits the MAC log-det into user i's own term and a
constant carried by everyone else:

    W log2|I + (1/s2) sum_j H_j^H Q_j H_j| = b_i + W log2|I + G_i^H Q_i G_i|

with Z_i = I + (1/s2) sum_{j!=i} H_j^H Q_j H_j, b_i = W log2|Z_i| and
G_i = H_i (s2 I + sum_{j!=i} H_j^H Q_j H_j)^(-1/2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from eebc import hermitian
from eebc.system_model import ChannelSet, PowerModel, total_power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceSet:
    """K uplink covariances Q_i (N x N Hermitian PSD, Watts)."""

    q: tuple[np.ndarray, ...]

    @classmethod
    def zeros(cls, k: int, n: int) -> CovarianceSet:
        return cls(q=tuple(np.zeros((n, n), dtype=complex) for _ in range(k)))

    @classmethod
    def from_matrices(cls, mats: Sequence[np.ndarray]) -> CovarianceSet:
        return cls(q=tuple(np.atleast_2d(np.asarray(a, dtype=complex)) for a in mats))

    def replaced(self, i: int, q_i: np.ndarray) -> CovarianceSet:
        """Copy with user i's covariance swapped for *q_i*."""
        mats = list(self.q)
        mats[i] = q_i
        return CovarianceSet(q=tuple(mats))

    def permuted(self, order: Sequence[int]) -> CovarianceSet:
        return CovarianceSet(q=tuple(self.q[j] for j in order))

    @property
    def k_users(self) -> int:
        return len(self.q)

    def is_psd(self, tol: float = 1e-9) -> bool:
        return all(hermitian.is_psd(q, tol) for q in self.q)


@dataclass(frozen=True)
class UserDecomposition:
    """Everything user i's subproblem needs once the others are fixed."""

    user: int
    z: np.ndarray
    g: np.ndarray
    a: float
    b: float


def per_user_powers(cov: CovarianceSet) -> list[float]:
    return [hermitian.trace_real(q) for q in cov.q]


def transmit_power(cov: CovarianceSet) -> float:
    """Sum of Tr(Q_i) in Watts."""
    return float(sum(per_user_powers(cov)))


def _check_dimensions(ch: ChannelSet, cov: CovarianceSet) -> None:
    if cov.k_users != ch.k_users:
        raise ValueError(f"covariance set has {cov.k_users} users, channel set has {ch.k_users}")
    n = ch.n_antennas
    for i, q in enumerate(cov.q):
        if q.shape != (n, n):
            raise ValueError(f"Q_{i} has shape {q.shape}, expected {(n, n)}")


def _received_sum(ch: ChannelSet, cov: CovarianceSet, skip: int | None = None) -> np.ndarray:
    """sum_j H_j^H Q_j H_j over all users except *skip* (M x M)."""
    m = ch.m_antennas
    acc = np.zeros((m, m), dtype=complex)
    for j, (h, q) in enumerate(zip(ch.channels, cov.q)):
        if j == skip:
            continue
        acc += h.conj().T @ q @ h
    return hermitian.symmetrize(acc)


def mac_sum_rate(ch: ChannelSet, cov: CovarianceSet) -> float:
    """W * log2 det(I_M + (1/s2) sum_i H_i^H Q_i H_i) in bits/s."""
    _check_dimensions(ch, cov)
    received = _received_sum(ch, cov) / ch.noise_power
    return ch.bandwidth * hermitian.logdet_eye_plus(received)


def ee_objective(ch: ChannelSet, pm: PowerModel, cov: CovarianceSet) -> float:
    """Energy efficiency g(Q_1..Q_K) in bits/Joule."""
    rate = mac_sum_rate(ch, cov)
    return rate / total_power(pm, max(transmit_power(cov), 0.0), ch.m_antennas)


def decompose_for_user(
    ch: ChannelSet,
    pm: PowerModel,
    cov: CovarianceSet,
    i: int,
) -> UserDecomposition:
    """Freeze every user but *i* and return (Z_i, G_i, a_i, b_i)."""
    _check_dimensions(ch, cov)
    if not 0 <= i < ch.k_users:
        raise ValueError(f"user index {i} out of range for {ch.k_users} users")

    interference = _received_sum(ch, cov, skip=i)
    m = ch.m_antennas
    z = np.eye(m) + interference / ch.noise_power
    whitener = hermitian.inv_sqrt_pd(ch.noise_power * np.eye(m) + interference)
    g = ch.channels[i] @ whitener

    others = sum(hermitian.trace_real(q) for j, q in enumerate(cov.q) if j != i)
    a = total_power(pm, max(others, 0.0), m)
    b = ch.bandwidth * hermitian.logdet_pd(z)
    return UserDecomposition(user=i, z=z, g=g, a=a, b=b)
