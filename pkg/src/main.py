#!/usr/bin/env python3
"""Idempotent-measure operator analysis: classify, fixed points, dynamics."""

import argparse
import logging
import os
import sys
import time

from dotenv import load_dotenv

# Add project root to path so 'src' package is importable
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli.commands import (
    cmd_classify,
    cmd_fixed_points,
    cmd_graph,
    cmd_predict,
    cmd_simulate,
    cmd_verify,
)
from src.dynamics.omega import OmegaSettings
from src.errors import IdempotentDynamicsError
from src.reports.report import render_json, render_text
from src.services.campaign_engine import RANDOM_KINDS, CampaignEngine
from src.utils.config import PROJECT_ROOT, Tolerances, load_config
from src.utils.logger import setup_logger

logger = logging.getLogger("idempotent_dynamics")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idemdyn",
        description="Linear operators on the simplex of idempotent measures",
    )
    parser.add_argument(
        "--config",
        default="config.yaml",
        help="Path to config file (default: config.yaml)",
    )
    parser.add_argument(
        "--format",
        choices=["text", "json"],
        default="text",
        help="Report format (default: text)",
    )
    parser.add_argument(
        "--timing",
        action="store_true",
        help="Include wall-clock timing in the report",
    )
    parser.add_argument("--tol", type=float, default=None, help="Trajectory/membership tolerance")
    parser.add_argument("--tol-unit", type=float, default=None, help="Tolerance for |λ| = 1 and Q = 1")
    parser.add_argument("--tol-det", type=float, default=None, help="Relative determinant tolerance")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Decide Class I / Class II / neither")
    p.add_argument("matrix")

    p = sub.add_parser("fixed-points", help="Describe the fixed-point set")
    p.add_argument("matrix")

    p = sub.add_parser("simulate", help="Iterate the operator from x0")
    p.add_argument("matrix")
    p.add_argument("x0", help="Measure tokens, e.g. '0,-1,-inf'")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--csv", default=None, help="Write the trajectory as CSV")

    p = sub.add_parser("predict", help="Predict limits from theory")
    p.add_argument("matrix")
    p.add_argument("x0", help="Measure tokens, e.g. '0,-1,-inf'")

    p = sub.add_parser("graph", help="Pseudograph, cycles and longest path")
    p.add_argument("matrix")
    p.add_argument("--dot", default=None, help="Write the graph in DOT format")

    p = sub.add_parser("verify", help="Compare predictions with simulation")
    p.add_argument("matrices", nargs="*")
    p.add_argument("--random", choices=RANDOM_KINDS, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--unit-cycles", action="store_true",
                   help="Rescale random cycles to product 1 with the configured probability")
    return parser


def resolve_config_path(path: str) -> str:
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(PROJECT_ROOT, path)


def dispatch(args, config: dict):
    tolerances = Tolerances.from_config(config).override(
        default=args.tol, unit=args.tol_unit, det_relative=args.tol_det
    )
    settings = OmegaSettings.from_config(config)
    dynamics = config.get("dynamics", {}) or {}
    spectrum = config.get("spectrum", {}) or {}
    campaign = config.get("campaign", {}) or {}

    if args.command == "classify":
        return cmd_classify(args.matrix)
    if args.command == "fixed-points":
        return cmd_fixed_points(args.matrix, tolerances)
    if args.command == "simulate":
        steps = args.steps if args.steps is not None else int(dynamics.get("default_steps", 200))
        return cmd_simulate(args.matrix, args.x0, steps, args.csv, tolerances.default, settings)
    if args.command == "predict":
        return cmd_predict(
            args.matrix, args.x0, tolerances,
            max_sweeps=int(spectrum.get("max_sweeps", 10_000)),
            max_dimension=int(spectrum.get("max_dimension", 32)),
        )
    if args.command == "graph":
        limit = int((config.get("graph", {}) or {}).get("cycle_enumeration_limit", 12))
        return cmd_graph(args.matrix, args.dot, limit)

    engine = CampaignEngine(config, tolerances, settings)
    if args.steps is not None:
        engine.steps = args.steps
    if args.workers is not None:
        engine.workers = args.workers
    cases = args.cases if args.cases is not None else int(campaign.get("cases", 100))
    seed = args.seed if args.seed is not None else int(campaign.get("seed", 7))
    return cmd_verify(engine, args.matrices, args.random, args.n, cases, seed,
                      tolerances.default, args.unit_cycles)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # Load environment
    load_dotenv(os.path.join(PROJECT_ROOT, ".env"))

    try:
        config = load_config(resolve_config_path(args.config))
    except (OSError, ValueError) as e:
        print(f"error: cannot load config: {e}", file=sys.stderr)
        return 2

    setup_logger(config)
    logger.debug("Running %s", args.command)

    started = time.perf_counter()
    try:
        report = dispatch(args, config)
    except IdempotentDynamicsError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception:
        logger.exception("Fatal error")
        return 1

    if args.timing:
        report.timing = {"seconds": round(time.perf_counter() - started, 6)}
    output = render_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(output)
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
