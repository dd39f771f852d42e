"""Load, save, and validate JSON scenario files.

A scenario file is a JSON object keyed by the field names in DEFAULTS.
Each entry is either a bare value or ``{"value": ..., "description": ...}``;
keys starting with ``_`` are ignored. Missing keys take their defaults,
which reproduce the convergence experiment (M=4, N=4, K=10, d=1 km).
"""

from __future__ import annotations

import json
import logging
import numbers
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

CONFIG_DIR = Path.home() / ".config" / "eebc"
DEFAULT_SCENARIO_PATH = CONFIG_DIR / "scenario.json"

DEFAULTS: dict[str, dict[str, Any]] = {
    "m": {
        "value": 4,
        "description": "Number of base-station transmit antennas M.",
    },
    "n": {
        "value": 4,
        "description": "Number of receive antennas per user N.",
    },
    "k": {
        "value": 10,
        "description": "Number of users K.",
    },
    "distances_km": {
        "value": 1.0,
        "description": "BS-user distance in km. One number applies to every user; a list gives one distance per user.",
    },
    "noise_dbm": {
        "value": -110.0,
        "description": "Noise power per receive antenna over the whole band, in dBm.",
    },
    "bandwidth_hz": {
        "value": 5e6,
        "description": "System bandwidth W in Hz.",
    },
    "eta": {
        "value": 0.38,
        "description": "Power amplifier efficiency, 0 < eta <= 1.",
    },
    "p_dyn_w": {
        "value": 83.0,
        "description": "Dynamic power per RF chain in Watts.",
    },
    "p_sta_w": {
        "value": 45.5,
        "description": "Static power of the base station in Watts.",
    },
    "seed": {
        "value": 0,
        "description": "Base seed for channel draws. Drop j of a sweep uses seed + j.",
    },
    "max_iterations": {
        "value": 100,
        "description": "Maximum number of full user sweeps.",
    },
    "rel_tolerance": {
        "value": 1e-8,
        "description": "Stop when the EE changes by less than this fraction over one sweep.",
    },
    "waterfill_tolerance": {
        "value": 1e-10,
        "description": "Relative tolerance of the per-user water-level search.",
    },
    "workers": {
        "value": 1,
        "description": "Threads used to solve independent drops of a sweep.",
    },
}

_INT_FIELDS = ("m", "n", "k", "seed", "max_iterations", "workers")
_FLOAT_FIELDS = ("noise_dbm", "bandwidth_hz", "eta", "p_dyn_w", "p_sta_w", "rel_tolerance", "waterfill_tolerance")


def defaults() -> dict[str, Any]:
    return {key: meta["value"] for key, meta in DEFAULTS.items()}


def _is_int(value: Any) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def validate(values: dict[str, Any]) -> dict[str, Any]:
    """Check types and ranges; return a normalized copy.

    ``distances_km`` comes back as a list of K floats. Raises ValueError
    naming the offending field.
    """
    out = dict(values)
    for key in _INT_FIELDS:
        if not _is_int(out.get(key)):
            raise ValueError(f"{key} must be an integer, got {out.get(key)!r}")
        out[key] = int(out[key])
    for key in _FLOAT_FIELDS:
        if not _is_number(out.get(key)):
            raise ValueError(f"{key} must be a number, got {out.get(key)!r}")
        out[key] = float(out[key])

    for key in ("m", "n", "k", "max_iterations", "workers"):
        if out[key] < 1:
            raise ValueError(f"{key} must be >= 1, got {out[key]}")
    if out["seed"] < 0:
        raise ValueError(f"seed must be >= 0, got {out['seed']}")
    if out["bandwidth_hz"] <= 0.0:
        raise ValueError(f"bandwidth_hz must be > 0, got {out['bandwidth_hz']}")
    if not 0.0 < out["eta"] <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {out['eta']}")
    for key in ("p_dyn_w", "p_sta_w"):
        if out[key] < 0.0:
            raise ValueError(f"{key} must be >= 0, got {out[key]}")
    if out["m"] * out["p_dyn_w"] + out["p_sta_w"] <= 0.0:
        raise ValueError("m * p_dyn_w + p_sta_w must be > 0; set p_dyn_w or p_sta_w above zero")
    for key in ("rel_tolerance", "waterfill_tolerance"):
        if out[key] <= 0.0:
            raise ValueError(f"{key} must be > 0, got {out[key]}")

    out["distances_km"] = _distances(out.get("distances_km"), out["k"])
    return out


def _distances(raw: Any, k: int) -> list[float]:
    if _is_number(raw):
        dist = [float(raw)] * k
    elif isinstance(raw, list) and all(_is_number(d) for d in raw):
        dist = [float(d) for d in raw]
    else:
        raise ValueError(f"distances_km must be a number or a list of numbers, got {raw!r}")
    if len(dist) != k:
        raise ValueError(f"distances_km lists {len(dist)} users but k = {k}")
    if any(d <= 0.0 for d in dist):
        raise ValueError("distances_km must all be > 0")
    return dist


def _unwrap(raw: dict[str, Any]) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for key, entry in raw.items():
        if key.startswith("_"):
            continue
        if isinstance(entry, dict) and "value" in entry:
            values[key] = entry["value"]
        else:
            values[key] = entry
    return values


def parse_scenario(text: str, source: str = "<scenario>") -> dict[str, Any]:
    """Parse scenario JSON text merged over DEFAULTS and validate it."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"{source}: top level must be a JSON object")

    given = _unwrap(raw)
    unknown = sorted(set(given) - set(DEFAULTS))
    if unknown:
        logger.warning("%s: ignoring unknown keys %s", source, ", ".join(unknown))
    values = defaults()
    values.update({k: v for k, v in given.items() if k in DEFAULTS})
    try:
        return validate(values)
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from exc


def load_scenario(path: str | Path | None = None) -> dict[str, Any]:
    """Load a scenario file; with no path, the user default or the built-in defaults."""
    if path is None:
        if not DEFAULT_SCENARIO_PATH.exists():
            return validate(defaults())
        path = DEFAULT_SCENARIO_PATH
    path = Path(path).expanduser()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"could not read scenario {path}: {exc.strerror or exc}") from exc
    values = parse_scenario(text, source=path.name)
    logger.info("Scenario loaded from %s", path)
    return values


def save_scenario(values: dict[str, Any], path: str | Path) -> Path:
    """Write values with their descriptions, in DEFAULTS order."""
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    data: dict[str, Any] = {
        "_description": "eebc scenario. Edit values below; descriptions are for reference."
    }
    for key, meta in DEFAULTS.items():
        data[key] = {
            "value": values.get(key, meta["value"]),
            "description": meta["description"],
        }
    path.write_text(json.dumps(data, indent=4, ensure_ascii=False) + "\n", encoding="utf-8")
    logger.info("Scenario saved to %s", path)
    return path


def write_default_scenario(path: str | Path | None = None, overwrite: bool = False) -> Path | None:
    """Create a default scenario file. Returns None if it already exists and *overwrite* is off."""
    target = Path(path).expanduser() if path is not None else DEFAULT_SCENARIO_PATH
    if target.exists() and not overwrite:
        return None
    return save_scenario(defaults(), target)
