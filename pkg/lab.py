import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

# Load environment variables before the logger reads SOLITON_LOG_FILE
from dotenv import load_dotenv
load_dotenv()

# Configure logging
# The utils.logger module handles the actual configuration (console and optional file output)
import utils.logger  # noqa: F401

import lab_tasks
from services import cli_io
from utils.errors import ConfigError, NumericalError

# Get a logger instance for this module
logger = logging.getLogger(__name__)

# Get logging level from environment variables
LOG_LEVEL = os.getenv("SOLITON_LOG_LEVEL", "INFO").upper()
logging.getLogger().setLevel(getattr(logging, LOG_LEVEL, logging.INFO))

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

TASKS: Dict[str, Callable] = {
    "simulate": lab_tasks.execute_simulate,
    "soliton-check": lab_tasks.execute_soliton_check,
    "spectrum": lab_tasks.execute_spectrum,
    "photons": lab_tasks.execute_photons,
    "lax-check": lab_tasks.execute_lax_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lab",
        description="One-soliton NLS lab: propagation, analytic checks, photon statistics, Lax pair.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in TASKS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", help="JSON run configuration (defaults to the built-in C=K=2 soliton)")
        sub.add_argument("--out", help="Output directory (overrides SOLITON_OUT_DIR and outputs.out_dir)")
        sub.add_argument("--dt", type=float, help="Override stepper.dt")
        sub.add_argument("--t-end", type=float, dest="t_end", help="Override stepper.t_end")
        sub.add_argument("--zeta", help="Comma-separated zeta list, e.g. -1,0,0.7,2")
        if name == "lax-check":
            sub.add_argument("--snapshots", help="manifest.json written by simulate")
    return parser


def run(args: argparse.Namespace) -> int:
    cfg = cli_io.load_run_config(args.config) if args.config else cli_io.default_run_config()
    zetas = cli_io.parse_zeta_list(args.zeta) if args.zeta else None
    cfg = cli_io.apply_overrides(cfg, dt=args.dt, t_end=args.t_end, zetas=zetas)
    out_dir = cli_io.resolve_out_dir(args.out, cfg)

    task = TASKS[args.command]
    if args.command == "lax-check":
        snapshots: Optional[Path] = Path(args.snapshots) if args.snapshots else None
        task(cfg, out_dir, manifest=snapshots)
    else:
        task(cfg, out_dir)
    logger.info(f"{args.command} finished, results in {out_dir}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point: parses arguments, runs one task and maps errors to exit codes
    (configuration 2, numerical 3, anything else 1).
    """
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except Exception as e:
        logger.critical(f"An unhandled exception occurred during {args.command}: {e}", exc_info=True)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Stopped manually.")
        sys.exit(EXIT_UNEXPECTED)
