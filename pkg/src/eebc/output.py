"""Result files: CSV tables for the experiments and a JSON solve document.

Floats are written with 17 significant digits so identical runs produce
identical bytes and every value round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

CONVERGE_COLUMNS = ("iteration", "ee_bits_per_joule")
ANTENNA_SWEEP_COLUMNS = ("m", "k", "mean_ee", "std_ee")
DISTANCE_SWEEP_COLUMNS = ("d_km", "m", "mean_ee", "std_ee")
CURVE_COLUMNS = ("p_w", "capacity_bits_per_s", "ee_bits_per_joule")

RESULT_FORMAT_VERSION = 1


def format_value(value: Any) -> str:
    """Integers verbatim, floats at 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def build_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} fields, expected {len(columns)}")
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def save_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(build_csv(columns, rows), encoding="utf-8")
    logger.info("CSV saved: %s", path)
    return path


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def encode_matrix(a: np.ndarray) -> list[list[list[float]]]:
    """Complex matrix as rows of [re, im] pairs."""
    arr = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def decode_matrix(data: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError(f"matrix must be rows of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def build_result_document(
    scenario: dict[str, Any],
    ee: float,
    transmit_power: float,
    per_user_power: Sequence[float],
    iterations: int,
    converged: bool,
    covariances: Sequence[np.ndarray],
    sum_rate: float,
    bc_covariances: Sequence[np.ndarray] | None = None,
    dpc_sum_rate: float | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format_version": RESULT_FORMAT_VERSION,
        "scenario": scenario,
        "ee_bits_per_joule": float(ee),
        "transmit_power_w": float(transmit_power),
        "per_user_power_w": [float(p) for p in per_user_power],
        "sum_rate_bits_per_s": float(sum_rate),
        "iterations": int(iterations),
        "converged": bool(converged),
        "uplink_covariances": [encode_matrix(q) for q in covariances],
    }
    if bc_covariances is not None:
        doc["bc_covariances"] = [encode_matrix(s) for s in bc_covariances]
        doc["dpc_sum_rate_bits_per_s"] = float(dpc_sum_rate) if dpc_sum_rate is not None else None
    return doc


def save_result_document(doc: dict[str, Any], path: str | Path) -> Path:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    logger.info("Result saved: %s", path)
    return path


def load_result_document(path: str | Path) -> dict[str, Any]:
    path = Path(path).expanduser()
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path.name}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if doc.get("format_version") != RESULT_FORMAT_VERSION:
        raise ValueError(f"{path.name}: unsupported format_version {doc.get('format_version')!r}")
    return doc
