"""Heat-Content Scenario Command Line.

Runs scenario files and scenario corpora, regenerates plot data from report
tables and validates scenario files without computing.

Exit status: 0 PASS, 2 FAIL, 1 error.
"""

import argparse
import logging
import logging.config
import os
import sys
from typing import List, Optional

import pandas as pd
import yaml

from levyheat.cache import DensityCache
from levyheat.config import get_settings
from levyheat.runner import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, emit_plotdata, run_corpus, run_scenario, validate_scenario

# Configure module logging
logger = logging.getLogger(__name__)


def configure_logging(path: str) -> None:
    """Load the dictConfig YAML; fall back to stderr logging when it is missing."""
    os.makedirs("logs", exist_ok=True)
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            logging.config.dictConfig(yaml.safe_load(fh))
    else:
        logging.basicConfig(level=get_settings().LOG_LEVEL,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levyheat", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--no-cache", action="store_true", help="do not read or write the density cache")
    parser.add_argument("--clear-cache", action="store_true", help="empty the density cache first")
    parser.add_argument("--tolerance-override", type=float, default=None,
                        help="PASS threshold replacing the scenario tolerance")
    parser.add_argument("--output", default=None, help="results directory")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("scenario")

    corpus = sub.add_parser("corpus", help="run every scenario in a directory")
    corpus.add_argument("directory")

    plot = sub.add_parser("plotdata", help="write plot series from a report CSV")
    plot.add_argument("report")
    plot.add_argument("-o", "--out", default=None)

    validate = sub.add_parser("validate", help="parse and check scenarios without computing")
    validate.add_argument("scenarios", nargs="+")
    return parser


def _open_cache(args) -> Optional[DensityCache]:
    if args.no_cache:
        return None
    cache = DensityCache(get_settings().CACHE_PATH)
    if args.clear_cache:
        cache.clear()
    return cache


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(get_settings().LOG_CONFIG)
    if args.threads is not None and args.threads < 1:
        print("levyheat: --threads must be positive", file=sys.stderr)
        return EXIT_ERROR

    if args.command == "validate":
        status = EXIT_PASS
        for path in args.scenarios:
            outcome = validate_scenario(path)
            print(f"{path}: {outcome.message}")
            status = max(status, outcome.status)
        return status

    if args.command == "plotdata":
        try:
            table = pd.read_csv(args.report)
            out = args.out or os.path.splitext(args.report)[0] + "_plotdata.csv"
            emit_plotdata(table, out)
        except (OSError, KeyError, pd.errors.ParserError) as exc:
            print(f"levyheat: {exc}", file=sys.stderr)
            return EXIT_ERROR
        print(out)
        return EXIT_PASS

    cache = _open_cache(args)
    try:
        if args.command == "run":
            outcome = run_scenario(args.scenario, args.seed, args.threads, cache,
                                   args.tolerance_override, args.output)
            if outcome.status == EXIT_ERROR:
                print(f"levyheat: {outcome.message}", file=sys.stderr)
            else:
                print(outcome.report.summary(), end="")
            return outcome.status
        summary = run_corpus(args.directory, args.threads, args.seed, cache,
                             args.tolerance_override, args.output)
        print(summary.to_string(index=False) if len(summary) else "no scenarios")
        if (summary["status"] == EXIT_ERROR).any():
            return EXIT_ERROR
        return EXIT_FAIL if (summary["status"] == EXIT_FAIL).any() else EXIT_PASS
    finally:
        if cache is not None:
            logger.info(f"[CACHE] hits={cache.hits} misses={cache.misses}")
            cache.close()


if __name__ == "__main__":
    sys.exit(main())
