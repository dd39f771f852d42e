"""Sum-power-constrained MAC sum capacity by iterative waterfilling.

Every iteration whitens each user's channel by the previous iterate's
interference, waterfills the total power P jointly over all users'
eigenchannels, and blends the result into the previous iterate with
weight 1/K. The blend is what makes the joint update converge.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from eebc import hermitian
from eebc.objective import CovarianceSet, mac_sum_rate
from eebc.system_model import ChannelSet, PowerModel, total_power

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 2000


def waterfill_total_power(gains: np.ndarray, p_total: float) -> tuple[np.ndarray, float]:
    """Classic waterfill p_k = [mu - 1/g_k]^+ with sum p_k = p_total.

    Returns the powers in the order of *gains* and the water level mu.
    """
    gains = np.asarray(gains, dtype=float)
    powers = np.zeros_like(gains)
    if p_total <= 0.0 or gains.size == 0:
        return powers, 0.0
    order = np.argsort(gains)[::-1]
    floors = 1.0 / gains[order]
    # Drop the weakest channels until the water sits above every remaining floor.
    cumulative = np.cumsum(floors)
    counts = np.arange(1, gains.size + 1)
    levels = (p_total + cumulative) / counts
    active = int(np.max(np.nonzero(levels > floors)[0])) + 1
    mu = float(levels[active - 1])
    powers[order[:active]] = mu - floors[:active]
    return powers, mu


def _effective_eigs(ch: ChannelSet, cov: CovarianceSet) -> list[hermitian.HermitianEig]:
    m = ch.m_antennas
    scale = 1.0 / np.sqrt(ch.noise_power)
    hs = [h * scale for h in ch.channels]
    received = [h.conj().T @ q @ h for h, q in zip(hs, cov.q)]
    total = np.eye(m, dtype=complex) + sum(received)
    eigs = []
    for h, own in zip(hs, received):
        g = h @ hermitian.inv_sqrt_pd(total - own)
        eigs.append(hermitian.eig_hermitian(g @ g.conj().T))
    return eigs


def _joint_waterfill(eigs: list[hermitian.HermitianEig], p_total: float, n: int) -> CovarianceSet:
    ranks = [e.rank() for e in eigs]
    gains = np.concatenate([e.eigenvalues[:r] for e, r in zip(eigs, ranks)]) if sum(ranks) else np.zeros(0)
    powers, _ = waterfill_total_power(gains, p_total)
    mats = []
    offset = 0
    for e, r in zip(eigs, ranks):
        s = powers[offset: offset + r]
        offset += r
        u = e.eigenvectors[:, :r]
        mats.append(hermitian.symmetrize((u * s) @ u.conj().T) if r else np.zeros((n, n), dtype=complex))
    return CovarianceSet(q=tuple(mats))


def sum_power_capacity(
    ch: ChannelSet,
    p_total: float,
    tol: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    initial: CovarianceSet | None = None,
) -> tuple[CovarianceSet, float]:
    """Covariances achieving (approximately) C_MAC(P) and that capacity in bits/s."""
    if p_total < 0.0:
        raise ValueError(f"transmit power must be >= 0, got {p_total}")
    k, n = ch.k_users, ch.n_antennas
    if p_total == 0.0:
        cov = CovarianceSet.zeros(k, n)
        return cov, 0.0

    if initial is None:
        cov = CovarianceSet.zeros(k, n)
    else:
        current = sum(hermitian.trace_real(q) for q in initial.q)
        ratio = p_total / current if current > 0.0 else 0.0
        cov = CovarianceSet(q=tuple(q * ratio for q in initial.q)) if ratio else CovarianceSet.zeros(k, n)

    rate = mac_sum_rate(ch, cov)
    weight = 1.0 / k
    for it in range(1, max_iterations + 1):
        fresh = _joint_waterfill(_effective_eigs(ch, cov), p_total, n)
        if it == 1 and rate == 0.0:
            cov = fresh
        else:
            cov = CovarianceSet(q=tuple(weight * f + (1.0 - weight) * q for f, q in zip(fresh.q, cov.q)))
        new_rate = mac_sum_rate(ch, cov)
        change = abs(new_rate - rate) / max(new_rate, 1e-300)
        rate = new_rate
        if change < tol:
            logger.debug("sum-power waterfill converged at P=%.4e after %d iterations", p_total, it)
            break
    else:
        logger.debug("sum-power waterfill stopped at P=%.4e after %d iterations", p_total, max_iterations)
    return cov, rate


def ee_at_fixed_power(ch: ChannelSet, pm: PowerModel, p_total: float, **kwargs) -> float:
    """C_MAC(P) / (P/eta + M p_dyn + p_sta) in bits/Joule."""
    _, rate = sum_power_capacity(ch, p_total, **kwargs)
    return rate / total_power(pm, p_total, ch.m_antennas)


def capacity_curve(
    ch: ChannelSet,
    p_grid: Sequence[float],
    tol: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> list[float]:
    """C_MAC(P) for each P in an ascending grid, warm-starting each point from the last."""
    rates = []
    previous: CovarianceSet | None = None
    for p in p_grid:
        cov, rate = sum_power_capacity(ch, float(p), tol=tol, max_iterations=max_iterations, initial=previous)
        previous = cov if p > 0.0 else None
        rates.append(rate)
    return rates
