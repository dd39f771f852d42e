"""Typed access to one scenario, wrapping config.py."""

from __future__ import annotations

import logging
from dataclasses import replace
from pathlib import Path
from typing import Any

from eebc import config as _config
from eebc.solver import SolverConfig
from eebc.system_model import PowerModel, Scenario, build_scenario

logger = logging.getLogger(__name__)


class ScenarioService:
    """Scenario values loaded once, with typed accessors and builders.

    ``overrides`` (e.g. from CLI flags) are applied on top of the file and
    re-validated, so an override can never produce an invalid scenario.
    """

    def __init__(self, path: str | Path | None = None, values: dict[str, Any] | None = None) -> None:
        self._path = Path(path) if path is not None else None
        self._values: dict[str, Any] = values if values is not None else _config.load_scenario(path)

    # ------------------------------------------------------------------
    # Core API
    # ------------------------------------------------------------------

    def get(self, key: str, default: Any = None) -> Any:
        return self._values.get(key, default)

    def with_overrides(self, **overrides: Any) -> ScenarioService:
        """Copy with the given fields replaced (None values are ignored)."""
        values = dict(self._values)
        values.update({k: v for k, v in overrides.items() if v is not None})
        if "k" in overrides and overrides["k"] is not None and "distances_km" not in overrides:
            # Keep a common distance when only K changes.
            values["distances_km"] = self._values["distances_km"][0]
        return ScenarioService(path=self._path, values=_config.validate(values))

    def as_dict(self) -> dict[str, Any]:
        return dict(self._values)

    # ------------------------------------------------------------------
    # Typed convenience accessors
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self._values["m"])

    @property
    def n(self) -> int:
        return int(self._values["n"])

    @property
    def k(self) -> int:
        return int(self._values["k"])

    @property
    def distances_km(self) -> list[float]:
        return list(self._values["distances_km"])

    @property
    def noise_dbm(self) -> float:
        return float(self._values["noise_dbm"])

    @property
    def bandwidth_hz(self) -> float:
        return float(self._values["bandwidth_hz"])

    @property
    def seed(self) -> int:
        return int(self._values["seed"])

    @property
    def workers(self) -> int:
        return int(self._values["workers"])

    @property
    def power_model(self) -> PowerModel:
        return PowerModel(
            eta=float(self._values["eta"]),
            p_dyn=float(self._values["p_dyn_w"]),
            p_sta=float(self._values["p_sta_w"]),
        )

    @property
    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            max_iterations=int(self._values["max_iterations"]),
            rel_tolerance=float(self._values["rel_tolerance"]),
            waterfill_tolerance=float(self._values["waterfill_tolerance"]),
        )

    def solver_config_for(self, **changes: Any) -> SolverConfig:
        return replace(self.solver_config, **changes)

    # ------------------------------------------------------------------
    # Scenario construction
    # ------------------------------------------------------------------

    def build(self, seed: int | None = None) -> Scenario:
        """Draw the channels for this scenario (optionally under another seed)."""
        return build_scenario(
            seed=self.seed if seed is None else seed,
            m=self.m,
            n=self.n,
            k=self.k,
            distances=self.distances_km,
            noise_dbm=self.noise_dbm,
            bandwidth=self.bandwidth_hz,
            power_model=self.power_model,
        )
