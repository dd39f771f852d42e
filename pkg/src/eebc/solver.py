"""Energy-efficient iterative waterfilling over the dual MAC.

Cycles through the users, replacing Q_i by its energy-efficient waterfill
with everybody else frozen, until the EE stops moving over a full sweep.
Each replacement is the unique maximizer of g in that block, so the EE
sequence never decreases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from eebc import objective, waterfill
from eebc.objective import CovarianceSet
from eebc.system_model import ChannelSet, PowerModel

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 100
DEFAULT_REL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class SolverConfig:
    """Outer-loop settings.

    ``initial_covariances`` of None starts every user at Q_i = 0. With
    ``stop_on_convergence`` off the loop always runs ``max_iterations`` sweeps.
    """

    max_iterations: int = DEFAULT_MAX_ITERATIONS
    rel_tolerance: float = DEFAULT_REL_TOLERANCE
    initial_covariances: CovarianceSet | None = None
    stop_on_convergence: bool = True
    waterfill_tolerance: float = waterfill.DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.rel_tolerance > 0.0:
            raise ValueError(f"rel_tolerance must be > 0, got {self.rel_tolerance}")


@dataclass(frozen=True)
class SolverTrace:
    """Result of one solve.

    ``ee_per_iteration`` holds the EE after each full sweep; ``ee_per_update``
    starts with the EE of the initial point and adds one entry per user update.
    ``subproblems`` keeps each user's last waterfill (None for skipped users).
    """

    ee_per_iteration: list[float]
    final_covariances: CovarianceSet
    final_power: float
    converged: bool
    iterations_used: int
    ee_per_update: list[float] = field(default_factory=list)
    subproblems: tuple[waterfill.WaterfillSolution | None, ...] = ()

    @property
    def final_ee(self) -> float:
        return self.ee_per_iteration[-1] if self.ee_per_iteration else 0.0


def _relative_change(new: float, old: float) -> float:
    scale = max(abs(new), abs(old))
    if scale == 0.0:
        return 0.0
    return abs(new - old) / scale


def _initial_covariances(ch: ChannelSet, cfg: SolverConfig) -> CovarianceSet:
    if cfg.initial_covariances is None:
        return CovarianceSet.zeros(ch.k_users, ch.n_antennas)
    init = cfg.initial_covariances
    if init.k_users != ch.k_users:
        raise ValueError(f"initial covariances cover {init.k_users} users, expected {ch.k_users}")
    if not init.is_psd():
        raise ValueError("initial covariances must be PSD")
    return init


def solve(ch: ChannelSet, pm: PowerModel, cfg: SolverConfig | None = None) -> SolverTrace:
    """Run the block-coordinate ascent and return the full trace."""
    cfg = cfg or SolverConfig()
    cov = _initial_covariances(ch, cfg)
    n = ch.n_antennas
    active = [bool(np.any(h != 0)) for h in ch.channels]
    for i, is_active in enumerate(active):
        if not is_active:
            cov = cov.replaced(i, np.zeros((n, n), dtype=complex))

    ee = objective.ee_objective(ch, pm, cov)
    per_update = [ee]
    per_sweep: list[float] = []
    solutions: list[waterfill.WaterfillSolution | None] = [None] * ch.k_users
    converged = False
    sweep = 0

    for sweep in range(1, cfg.max_iterations + 1):
        sweep_start = ee
        for i in range(ch.k_users):
            if not active[i]:
                per_update.append(ee)
                continue
            try:
                dec = objective.decompose_for_user(ch, pm, cov, i)
                _, sol = waterfill.solve_subproblem(dec, ch.bandwidth, pm.eta, cfg.waterfill_tolerance)
            except (ValueError, RuntimeError) as exc:
                raise RuntimeError(f"sweep {sweep}, user {i}: {exc}") from exc
            cov = cov.replaced(i, sol.q_star)
            solutions[i] = sol
            new_ee = objective.ee_objective(ch, pm, cov)
            if new_ee < ee * (1.0 - 1e-9):
                logger.debug("sweep %d user %d: EE dipped %.12e -> %.12e", sweep, i, ee, new_ee)
            ee = new_ee
            per_update.append(ee)

        per_sweep.append(ee)
        change = _relative_change(ee, sweep_start)
        logger.debug("sweep %d: EE=%.10e bits/J, rel change %.3e", sweep, ee, change)
        converged = change < cfg.rel_tolerance
        if converged and cfg.stop_on_convergence:
            break

    if not converged:
        logger.warning("EE did not converge within %d sweeps", cfg.max_iterations)

    final_power = objective.transmit_power(cov)
    logger.info("solve finished: EE=%.6e bits/J, P=%.6e W, sweeps=%d", ee, final_power, sweep)
    return SolverTrace(
        ee_per_iteration=per_sweep,
        final_covariances=cov,
        final_power=final_power,
        converged=converged,
        iterations_used=sweep,
        ee_per_update=per_update,
        subproblems=tuple(solutions),
    )


def optimal_transmit_power(trace: SolverTrace) -> float:
    """Optimal BS transmit power P = sum_i Tr(Q_i)."""
    return objective.transmit_power(trace.final_covariances)
