"""eebc command line: reproduce the EE experiments and solve single scenarios.

Subcommands:
  init            write a default scenario file
  converge        EE per sweep for one scenario           -> CSV iteration,ee_bits_per_joule
  sweep-antennas  mean EE over drops for each (M, K)      -> CSV m,k,mean_ee,std_ee
  sweep-distance  mean EE over drops for each (d, M)      -> CSV d_km,m,mean_ee,std_ee
  curve           capacity and EE versus transmit power   -> CSV p_w,capacity_bits_per_s,ee_bits_per_joule
  solve           optimal covariances, power and EE       -> JSON result document
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Callable, Sequence

from eebc import config, output
from eebc.controllers.experiment_controller import ExperimentController
from eebc.services.scenario_service import ScenarioService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _int_list(text: str) -> list[int]:
    return _parse_list(text, int)


def _float_list(text: str) -> list[float]:
    return _parse_list(text, float)


def _parse_list(text: str, kind: Callable[[str], float]) -> list:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        return [kind(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid list {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eebc",
        description="Energy-efficient precoding and power allocation for the MIMO broadcast channel.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON file (default: ~/.config/eebc/scenario.json or built-in)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--max-iters", type=int, dest="max_iters", help="maximum solver sweeps")
    common.add_argument("--tol", type=float, help="relative EE change that counts as converged")
    common.add_argument("--workers", type=int, help="threads for independent drops")

    init = sub.add_parser("init", help="write a default scenario file")
    init.add_argument("--out", help="where to write (default: ~/.config/eebc/scenario.json)")
    init.add_argument("--force", action="store_true", help="overwrite an existing file")

    conv = sub.add_parser("converge", parents=[common], help="EE after each sweep")
    conv.add_argument("--sweeps", type=int, default=50, help="number of sweeps to record (default 50)")

    ant = sub.add_parser("sweep-antennas", parents=[common], help="mean EE versus M for several K")
    ant.add_argument("--m-list", type=_int_list, required=True, dest="m_list")
    ant.add_argument("--k-list", type=_int_list, required=True, dest="k_list")
    ant.add_argument("--drops", type=int, default=100)

    dist = sub.add_parser("sweep-distance", parents=[common], help="mean EE versus distance for several M")
    dist.add_argument("--d-list", type=_float_list, required=True, dest="d_list")
    dist.add_argument("--m-list", type=_int_list, required=True, dest="m_list")
    dist.add_argument("--drops", type=int, default=100)

    curve = sub.add_parser("curve", parents=[common], help="capacity and EE versus transmit power")
    curve.add_argument("--p-list", type=_float_list, required=True, dest="p_list")

    solve = sub.add_parser("solve", parents=[common], help="solve one scenario")
    solve.add_argument(
        "--emit-bc-covariances",
        action="store_true",
        dest="emit_bc",
        help="also map the solution to downlink covariances",
    )
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _scenario(args: argparse.Namespace) -> ScenarioService:
    svc = ScenarioService(args.scenario)
    return svc.with_overrides(
        seed=args.seed,
        max_iterations=args.max_iters,
        rel_tolerance=args.tol,
        workers=args.workers,
    )


def _emit_csv(out: str | None, columns: Sequence[str], rows: list) -> None:
    if out:
        output.save_csv(out, columns, rows)
    else:
        sys.stdout.write(output.build_csv(columns, rows))


def run(args: argparse.Namespace) -> int:
    if args.command == "init":
        path = config.write_default_scenario(args.out, overwrite=args.force)
        if path is None:
            logger.warning("Scenario file exists; use --force to overwrite")
            return EXIT_FAILURE
        print(path)
        return EXIT_OK

    ctrl = ExperimentController(_scenario(args))

    if args.command == "converge":
        if args.sweeps < 1:
            raise ValueError(f"--sweeps must be >= 1, got {args.sweeps}")
        _emit_csv(args.out, output.CONVERGE_COLUMNS, ctrl.converge(args.sweeps))
    elif args.command == "sweep-antennas":
        rows = ctrl.sweep_antennas(args.m_list, args.k_list, args.drops)
        _emit_csv(args.out, output.ANTENNA_SWEEP_COLUMNS, rows)
    elif args.command == "sweep-distance":
        rows = ctrl.sweep_distance(args.d_list, args.m_list, args.drops)
        _emit_csv(args.out, output.DISTANCE_SWEEP_COLUMNS, rows)
    elif args.command == "curve":
        _emit_csv(args.out, output.CURVE_COLUMNS, ctrl.curve(args.p_list))
    elif args.command == "solve":
        doc = ctrl.solve(emit_bc_covariances=args.emit_bc)
        if args.out:
            output.save_result_document(doc, args.out)
        else:
            sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return run(args)
    except ValueError as exc:
        logger.debug("usage error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, OSError) as exc:
        logger.exception("eebc %s failed", args.command)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
