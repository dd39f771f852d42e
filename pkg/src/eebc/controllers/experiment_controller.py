"""Experiment workflows behind the CLI.

Builds scenarios through ScenarioService, runs the solver, and returns
rows for output.py. Drops of a sweep are independent and may run on a
thread pool; results are collected in seed order, so rows never depend
on which worker finished first.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Any, Sequence

import numpy as np

from eebc import duality, objective, oracle, output, solver

if TYPE_CHECKING:
    from eebc.services.scenario_service import ScenarioService

logger = logging.getLogger(__name__)


class ExperimentState(str, Enum):
    IDLE = "idle"
    RUNNING = "running"
    DONE = "done"


@dataclass
class DropProgress:
    """Progress of the sweep point currently being averaged."""

    label: str = ""
    done: int = 0
    total: int = 0


class ExperimentController:
    """Runs one experiment at a time against a scenario template."""

    def __init__(self, scenario: ScenarioService, workers: int | None = None) -> None:
        self._scenario = scenario
        self._workers = workers or scenario.workers
        self._state = ExperimentState.IDLE
        self._progress = DropProgress()
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # State
    # ------------------------------------------------------------------

    @property
    def state(self) -> ExperimentState:
        return self._state

    @property
    def progress(self) -> DropProgress:
        with self._lock:
            return DropProgress(self._progress.label, self._progress.done, self._progress.total)

    def _begin(self) -> None:
        with self._lock:
            if self._state == ExperimentState.RUNNING:
                raise RuntimeError("an experiment is already running")
            self._state = ExperimentState.RUNNING

    def _finish(self) -> None:
        with self._lock:
            self._state = ExperimentState.DONE

    # ------------------------------------------------------------------
    # Drops
    # ------------------------------------------------------------------

    def _drop_ee(self, template: ScenarioService, seed: int) -> float:
        scen = template.build(seed=seed)
        trace = solver.solve(scen.channel_set, scen.power_model, template.solver_config)
        with self._lock:
            self._progress.done += 1
            done, total, label = self._progress.done, self._progress.total, self._progress.label
        logger.debug("%s: drop %d/%d done (seed %d)", label or "sweep point", done, total, seed)
        return trace.final_ee

    def mean_ee(self, template: ScenarioService, drops: int, label: str = "") -> tuple[float, float]:
        """Mean and population std of the optimal EE over seeded drops."""
        if drops < 1:
            raise ValueError(f"drops must be >= 1, got {drops}")
        seeds = [template.seed + j for j in range(drops)]
        with self._lock:
            self._progress = DropProgress(label=label, done=0, total=drops)
        if self._workers > 1 and drops > 1:
            with ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="eebc-drop") as pool:
                values = list(pool.map(lambda s: self._drop_ee(template, s), seeds))
        else:
            values = [self._drop_ee(template, s) for s in seeds]
        arr = np.asarray(values, dtype=float)
        mean, std = float(np.mean(arr)), float(np.std(arr))
        logger.info("%s: mean EE %.6e bits/J over %d drops", label or "sweep point", mean, drops)
        return mean, std

    # ------------------------------------------------------------------
    # Workflows
    # ------------------------------------------------------------------

    def converge(self, sweeps: int) -> list[tuple[int, float]]:
        """EE after each of exactly *sweeps* full sweeps."""
        self._begin()
        try:
            scen = self._scenario.build()
            cfg = self._scenario.solver_config_for(max_iterations=sweeps, stop_on_convergence=False)
            trace = solver.solve(scen.channel_set, scen.power_model, cfg)
            return [(i + 1, ee) for i, ee in enumerate(trace.ee_per_iteration)]
        finally:
            self._finish()

    def sweep_antennas(
        self,
        m_list: Sequence[int],
        k_list: Sequence[int],
        drops: int,
    ) -> list[tuple[int, int, float, float]]:
        """Rows (m, k, mean_ee, std_ee), m outer, k inner."""
        self._begin()
        try:
            rows = []
            for m in m_list:
                for k in k_list:
                    template = self._scenario.with_overrides(m=int(m), k=int(k))
                    mean, std = self.mean_ee(template, drops, label=f"M={m}, K={k}")
                    rows.append((int(m), int(k), mean, std))
            return rows
        finally:
            self._finish()

    def sweep_distance(
        self,
        d_list: Sequence[float],
        m_list: Sequence[int],
        drops: int,
    ) -> list[tuple[float, int, float, float]]:
        """Rows (d_km, m, mean_ee, std_ee), d outer, m inner."""
        self._begin()
        try:
            rows = []
            for d in d_list:
                if d <= 0.0:
                    raise ValueError(f"distance must be > 0 km, got {d}")
                for m in m_list:
                    template = self._scenario.with_overrides(m=int(m), distances_km=float(d))
                    mean, std = self.mean_ee(template, drops, label=f"d={d} km, M={m}")
                    rows.append((float(d), int(m), mean, std))
            return rows
        finally:
            self._finish()

    def curve(self, p_list: Sequence[float]) -> list[tuple[float, float, float]]:
        """Rows (p_w, capacity, ee) of the capacity/EE versus transmit power curve."""
        self._begin()
        try:
            scen = self._scenario.build()
            points = oracle.capacity_vs_power_curve(scen.channel_set, scen.power_model, sorted(p_list))
            return [(pt.p, pt.capacity, pt.ee) for pt in points]
        finally:
            self._finish()

    def solve(self, emit_bc_covariances: bool = False) -> dict[str, Any]:
        """Solve the scenario and return the result document."""
        self._begin()
        try:
            scen = self._scenario.build()
            ch, pm = scen.channel_set, scen.power_model
            trace = solver.solve(ch, pm, self._scenario.solver_config)
            cov = trace.final_covariances
            bc = duality.mac_to_bc(ch, cov) if emit_bc_covariances else None
            return output.build_result_document(
                scenario=self._scenario.as_dict(),
                ee=objective.ee_objective(ch, pm, cov),
                transmit_power=solver.optimal_transmit_power(trace),
                per_user_power=objective.per_user_powers(cov),
                iterations=trace.iterations_used,
                converged=trace.converged,
                covariances=cov.q,
                sum_rate=objective.mac_sum_rate(ch, cov),
                bc_covariances=bc.bc_covariances if bc is not None else None,
                dpc_sum_rate=bc.dpc_sum_rate if bc is not None else None,
            )
        finally:
            self._finish()
