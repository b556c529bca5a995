"""Command-line entry point.

Subcommands mirror the workflow stages: pool-forecast, extract, train,
forecast, evaluate, and all. Flags override config-file values. Exit
codes: 0 success, 1 fatal, 2 bad usage or configuration, 3 partial
success (some series failed but artifacts were produced).
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, DivcastError
from .pipeline import EXIT_FATAL, SUBCOMMANDS, load_config

logger = logging.getLogger(__name__)

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divcast",
        description="Diversity-weighted forecast combination",
    )
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "pool-forecast": "fit the pool on full histories and export forecasts",
        "extract": "export diversity features (alongside pool forecasts)",
        "train": "phase 1: fit one weight model per frequency",
        "forecast": "phase 2: combined forecasts from stored models",
        "evaluate": "score combined forecasts against held-out actuals",
        "all": "run the full workflow end to end",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="YAML configuration file")
        p.add_argument("--data", help="training data: directory of "
                       "<frequency>_train.csv files or a single CSV")
        p.add_argument("--test-data", dest="test_data",
                       help="held-out actuals CSV (single-file mode)")
        p.add_argument("--format", choices=("m4", "long"),
                       help="input layout (default m4)")
        p.add_argument("--frequency", help="restrict to one frequency class")
        p.add_argument("--level", type=float,
                       help="interval confidence level (default 0.95)")
        p.add_argument("--rounds", type=int, help="boosting rounds")
        p.add_argument("--threads", type=int,
                       help="worker processes (default: all cores)")
        p.add_argument("--seed", type=int, help="base seed (default 0)")
        p.add_argument("--out", help="output directory (default ./out)")
        if name in ("evaluate", "all"):
            p.add_argument("--tradeoff", action="store_true", default=None,
                           help="also emit coverage/interval trade-off curves")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("data", "test_data", "format", "frequency", "level",
            "threads", "seed", "out")
    out = {k: getattr(args, k, None) for k in keys}
    if getattr(args, "tradeoff", None):
        out["tradeoff"] = True
    if args.rounds is not None:
        out["gbm"] = {"rounds": args.rounds}
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config, _overrides(args))
    except (ConfigError, OSError) as exc:
        print(f"divcast: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return SUBCOMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"divcast: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivcastError as exc:
        print(f"divcast: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
