"""MAC to BC covariance mapping and the DPC sum rate.

Channels are noise-normalized (H / sigma) so both sides see unit noise.
For encoding position p (user u = order[p]):

    A = I_N + H_u (sum of BC covariances before p) H_u^H
    B = I_M + sum of H_j^H Q_j H_j over MAC users after p
    B^(-1/2) H_u^H A^(-1/2) = F L G^H          (thin SVD)
    Sigma_u = B^(-1/2) F G^H A^(1/2) Q_u A^(1/2) G F^H B^(-1/2)

User u then gets the same rate in the BC (interfered by earlier positions)
as in the MAC (decoded after every later position), and the total traces
agree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from eebc import hermitian
from eebc.objective import CovarianceSet
from eebc.system_model import ChannelSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BcSolution:
    """Downlink covariances Sigma_i (M x M) indexed by user, plus the order used."""

    bc_covariances: tuple[np.ndarray, ...]
    encoding_order: tuple[int, ...]
    dpc_sum_rate: float

    @property
    def total_power(self) -> float:
        return float(sum(hermitian.trace_real(s) for s in self.bc_covariances))


def _check_order(order: Sequence[int] | None, k: int) -> tuple[int, ...]:
    if order is None:
        return tuple(range(k))
    order = tuple(int(u) for u in order)
    if sorted(order) != list(range(k)):
        raise ValueError(f"encoding order {order} is not a permutation of 0..{k - 1}")
    return order


def _normalized(ch: ChannelSet) -> list[np.ndarray]:
    scale = 1.0 / np.sqrt(ch.noise_power)
    return [h * scale for h in ch.channels]


def dpc_sum_rate(
    ch: ChannelSet,
    bc: BcSolution | Sequence[np.ndarray],
    noise: float | None = None,
    order: Sequence[int] | None = None,
) -> float:
    """W * sum of the nested log-det ratios for the given encoding order (bits/s)."""
    if isinstance(bc, BcSolution):
        sigmas = bc.bc_covariances
        order = bc.encoding_order if order is None else order
    else:
        sigmas = tuple(bc)
    order = _check_order(order, ch.k_users)
    if len(sigmas) != ch.k_users:
        raise ValueError(f"{len(sigmas)} BC covariances for {ch.k_users} users")
    m = ch.m_antennas
    for u, s in enumerate(sigmas):
        if s.shape != (m, m):
            raise ValueError(f"Sigma_{u} has shape {s.shape}, expected {(m, m)}")

    noise = ch.noise_power if noise is None else noise
    n = ch.n_antennas
    cumulative = np.zeros((m, m), dtype=complex)
    total_bits = 0.0
    for u in order:
        h = ch.channels[u]
        before = hermitian.logdet_pd(np.eye(n) + h @ cumulative @ h.conj().T / noise)
        cumulative = cumulative + sigmas[u]
        after = hermitian.logdet_pd(np.eye(n) + h @ cumulative @ h.conj().T / noise)
        total_bits += after - before
    return ch.bandwidth * total_bits


def mac_to_bc(
    ch: ChannelSet,
    cov: CovarianceSet,
    order: Sequence[int] | None = None,
) -> BcSolution:
    """Map uplink covariances to downlink covariances with the same sum rate and power."""
    order = _check_order(order, ch.k_users)
    if cov.k_users != ch.k_users:
        raise ValueError(f"covariance set has {cov.k_users} users, channel set has {ch.k_users}")

    hs = _normalized(ch)
    m, n = ch.m_antennas, ch.n_antennas
    sigmas: list[np.ndarray] = [np.zeros((m, m), dtype=complex) for _ in range(ch.k_users)]
    bc_sum = np.zeros((m, m), dtype=complex)

    for pos, u in enumerate(order):
        q = cov.q[u]
        if not np.any(q != 0):
            continue
        h = hs[u]
        later = order[pos + 1:]
        b = np.eye(m, dtype=complex)
        for j in later:
            b += hs[j].conj().T @ cov.q[j] @ hs[j]
        a = np.eye(n, dtype=complex) + h @ bc_sum @ h.conj().T
        try:
            b_inv_half = hermitian.inv_sqrt_pd(b)
            a_half = hermitian.sqrt_psd(a)
            a_inv_half = hermitian.inv_sqrt_pd(a)
            f, _, gh = linalg.svd(b_inv_half @ h.conj().T @ a_inv_half, full_matrices=False)
        except (ValueError, linalg.LinAlgError) as exc:
            raise RuntimeError(f"duality map failed for user {u}: {exc}") from exc
        flip = b_inv_half @ f @ gh
        sigma = flip @ a_half @ q @ a_half @ flip.conj().T
        sigmas[u] = hermitian.symmetrize(sigma)
        bc_sum = bc_sum + sigmas[u]

    rate = dpc_sum_rate(ch, sigmas, order=order)
    logger.debug("mac_to_bc: order=%s, DPC rate %.6e bits/s", order, rate)
    return BcSolution(bc_covariances=tuple(sigmas), encoding_order=order, dpc_sum_rate=rate)
