"""Brute-force reference solvers for small instances.

These deliberately avoid the waterfilling code they are used to check:
the scalar oracle is a bounded 1-D search, the grid oracle evaluates the
MAC log-det directly over a power grid, and the curve uses the
spectral-efficient sum-power waterfill rather than the EE iteration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from eebc import capacity
from eebc.objective import CovarianceSet
from eebc.system_model import ChannelSet, PowerModel, total_power

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 10**7
MAX_GRID_USERS = 3
MAX_GRID_STEPS = 200
_GRID_CHUNK = 200_000
_MAX_DOUBLINGS = 400


@dataclass(frozen=True)
class CurvePoint:
    p: float
    capacity: float
    ee: float


def scalar_ee_oracle(
    h2: float,
    noise: float,
    w: float,
    pm: PowerModel,
    m: int = 1,
) -> tuple[float, float]:
    """Maximize w*log2(1 + p*h2/noise) / (p/eta + m*p_dyn + p_sta) over p >= 0.

    Returns (p_opt, ee_opt).
    """
    if not h2 > 0.0:
        raise ValueError(f"channel gain must be > 0, got {h2}")
    snr_per_watt = h2 / noise
    circuit = pm.circuit_power(m)

    def ee(p: float) -> float:
        return w * math.log2(1.0 + p * snr_per_watt) / (p / pm.eta + circuit)

    p_hi = 1.0 / snr_per_watt
    for _ in range(_MAX_DOUBLINGS):
        if ee(2.0 * p_hi) <= ee(p_hi):
            break
        p_hi *= 2.0
    upper = 2.0 * p_hi
    res = optimize.minimize_scalar(
        lambda p: -ee(p),
        bounds=(0.0, upper),
        method="bounded",
        options={"xatol": 1e-12 * upper, "maxiter": 1000},
    )
    p_opt = float(res.x)
    return p_opt, ee(p_opt)


def _grid_rates(gram: np.ndarray, powers: np.ndarray, noise: float, w: float) -> np.ndarray:
    """Sum rate for each row of *powers* (G x K) given per-user Gram matrices (K x M x M)."""
    m = gram.shape[-1]
    received = np.einsum("gk,kab->gab", powers, gram) / noise
    _, logdet = np.linalg.slogdet(np.eye(m)[None, :, :] + received)
    return w * logdet / math.log(2.0)


def grid_ee_oracle(
    ch: ChannelSet,
    pm: PowerModel,
    p_max: float,
    steps: int,
) -> tuple[CovarianceSet, float]:
    """Exhaustive EE maximization over p_i in linspace(0, p_max, steps) for N = 1."""
    k = ch.k_users
    if ch.n_antennas != 1:
        raise ValueError(f"grid oracle needs N = 1, got N = {ch.n_antennas}")
    if k > MAX_GRID_USERS:
        raise ValueError(f"grid oracle supports at most {MAX_GRID_USERS} users, got {k}")
    if steps < 2 or steps > MAX_GRID_STEPS:
        raise ValueError(f"steps must lie in [2, {MAX_GRID_STEPS}], got {steps}")
    if steps**k > MAX_GRID_POINTS:
        raise ValueError(f"grid of {steps}^{k} points exceeds {MAX_GRID_POINTS}")

    axis = np.linspace(0.0, p_max, steps)
    gram = np.stack([h.conj().T @ h for h in ch.channels])
    circuit = pm.circuit_power(ch.m_antennas)

    best_ee = -1.0
    best_p = np.zeros(k)
    shape = (steps,) * k
    total = steps**k
    for start in range(0, total, _GRID_CHUNK):
        flat = np.arange(start, min(start + _GRID_CHUNK, total))
        chunk = axis[np.stack(np.unravel_index(flat, shape), axis=1)]
        rates = _grid_rates(gram, chunk, ch.noise_power, ch.bandwidth)
        ees = rates / (chunk.sum(axis=1) / pm.eta + circuit)
        idx = int(np.argmax(ees))
        if ees[idx] > best_ee:
            best_ee = float(ees[idx])
            best_p = chunk[idx].copy()

    cov = CovarianceSet(q=tuple(np.array([[p]], dtype=complex) for p in best_p))
    logger.debug("grid oracle: best powers %s, EE %.6e", best_p, best_ee)
    return cov, max(best_ee, 0.0)


def capacity_vs_power_curve(
    ch: ChannelSet,
    pm: PowerModel,
    p_grid: Sequence[float],
) -> list[CurvePoint]:
    """(P, C_MAC(P), EE(P)) along an ascending transmit-power grid."""
    grid = [float(p) for p in p_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("power grid must be ascending")
    rates = capacity.capacity_curve(ch, grid)
    return [
        CurvePoint(p=p, capacity=c, ee=c / total_power(pm, p, ch.m_antennas))
        for p, c in zip(grid, rates)
    ]


def is_unimodal(values: Sequence[float], rel_slack: float = 1e-6) -> bool:
    """True if *values* rise (weakly) to one peak and then fall (weakly)."""
    vals = np.asarray(values, dtype=float)
    if vals.size < 3:
        return True
    slack = rel_slack * float(np.max(np.abs(vals)))
    peak = int(np.argmax(vals))
    rising = np.all(np.diff(vals[: peak + 1]) >= -slack)
    falling = np.all(np.diff(vals[peak:]) <= slack)
    return bool(rising and falling)
