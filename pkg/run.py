#!/usr/bin/env python3
"""
Verification Arena - Entry point script

Runs one scenario from the root directory, e.g.

    python run.py run game --config scenarios/game.env --seed 7
"""

import argparse
import logging
import sys

from src.config import SCENARIOS, load_config
from src.errors import ArenaError, BudgetExceededError, CapacityError, ProtocolError, UsageError
from src.scenarios import run_scenario

logger = logging.getLogger("arena")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_BUDGET = 4
EXIT_PROTOCOL = 5


def exit_code(error: Exception) -> int:
    """Map an error raised while running a scenario to the process exit status."""
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET
    if isinstance(error, ProtocolError):
        return EXIT_PROTOCOL
    if isinstance(error, (UsageError, ValueError)):
        return EXIT_USAGE
    return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arena", description="Verification game arena")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one scenario and write its artifacts")
    run.add_argument("scenario", choices=SCENARIOS)
    run.add_argument("--config", "-c", type=str, help="Path to a KEY=VALUE scenario file")
    run.add_argument("--seed", type=int)
    run.add_argument("--eps", type=float)
    run.add_argument("--delta", type=float)
    run.add_argument("--out", type=str, help="Output directory (default: $ARENA_OUTPUT_DIR or ./results)")
    run.add_argument("--threads", type=int)
    return parser


def main(argv=None) -> int:
    """Command-line entry point; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    overrides = {
        "seed": args.seed,
        "eps": args.eps,
        "delta": args.delta,
        "out": args.out,
        "threads": args.threads,
    }
    try:
        cfg = load_config(args.scenario, args.config, overrides)
        report = run_scenario(cfg)
    except ArenaError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code(e)
    except Exception as e:
        logger.exception(f"Scenario {args.scenario} failed: {e}")
        return EXIT_FAILURE

    print(f"\nScenario: {report.scenario} (seed {report.seed})")
    for key, value in report.results.items():
        if not isinstance(value, (list, dict)):
            print(f"  {key}: {value}")
    print("Artifacts:")
    for path in report.artifacts:
        print(f"  - {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
