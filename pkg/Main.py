import argparse
import logging
import sys
from typing import List, Optional

from config import config
from constants import ExitCodes
from handlers.registration import register_all_handlers


# Handlers installed by setup_logging, replaced on every call
_installed_handlers: List[logging.Handler] = []


def setup_logging(to_stderr: bool = False) -> None:
    """
    Configure logging with console and optional file output.

    The console handler writes to stderr while a report goes to stdout.
    """
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    root = logging.getLogger()
    while _installed_handlers:
        handler = _installed_handlers.pop()
        root.removeHandler(handler)
        handler.close()
    root.setLevel(getattr(logging, config.LOG_LEVEL.upper()))

    # Add console handler
    console_handler = logging.StreamHandler(sys.stderr if to_stderr else sys.stdout)
    console_handler.setFormatter(logging.Formatter(log_format))
    _installed_handlers.append(console_handler)

    # Add file handler if configured
    if config.LOG_FILE:
        file_handler = logging.FileHandler(config.LOG_FILE)
        file_handler.setFormatter(logging.Formatter(log_format))
        _installed_handlers.append(file_handler)

    for handler in _installed_handlers:
        root.addHandler(handler)


logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratiolab",
        description="Exact ratio sums over p(n)/P(n) and their asymptotic expansion.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    register_all_handlers(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse the command line, run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(to_stderr=args.out is None)
    logger.debug(f"Arguments: {vars(args)}")

    try:
        return args.handler.run(args)
    except KeyboardInterrupt:
        logger.info("Run interrupted by user")
        return ExitCodes.UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
