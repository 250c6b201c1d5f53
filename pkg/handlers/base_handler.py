"""
Base class for command handlers.
Provides the shared options, run-config building and report writing.
"""

import argparse
import logging
from abc import ABC, abstractmethod
from typing import Optional

from config import config
from models.run_model import FORMATS, RunConfig
from services.errors import AcceptanceError
from utils.decorators import command_handler
from utils.helpers import ReportBuilder

logger = logging.getLogger(__name__)


class BaseCommandHandler(ABC):
    """
    Abstract base class for a CLI command.

    Subclasses name the command, add their own options and turn a RunConfig
    into a report; writing the report and mapping failures to exit codes
    happens here.
    """

    # Checkpoints used when --checkpoints is not given (None: only x_max)
    default_checkpoints: Optional[str] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Sub-command name"""
        pass

    @property
    @abstractmethod
    def help(self) -> str:
        """One-line description for --help"""
        pass

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Command-specific options."""

    @abstractmethod
    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        pass

    def register(self, subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        add_common_arguments(parser)
        self.add_arguments(parser)
        parser.set_defaults(handler=self)
        return parser

    @command_handler
    def run(self, args: argparse.Namespace) -> None:
        """Build the report, write it, then fail on any recorded acceptance failure."""
        run = RunConfig.from_args(args, self.default_checkpoints)
        report = self.build_report(run, args)
        report.add_meta(command=self.name)
        report.write(run.format, run.out)

        if report.failures:
            raise AcceptanceError(
                f"{len(report.failures)} acceptance check(s) failed", failures=report.failures
            )


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Options every command accepts."""
    parser.add_argument("--x-max", required=True, help="largest x of the run (e.g. 1000000 or 1e6)")
    parser.add_argument(
        "--checkpoints",
        default=None,
        help="comma list of x values or 'decades' (10^3, 10^4, ..., x_max)",
    )
    parser.add_argument("--alpha", type=float, default=1.0, help="ratio exponent alpha > 0")
    parser.add_argument(
        "--lambda",
        dest="weight",
        default="1",
        help="lambda as 'v1,v2,...[;tail=v]' or 'indicator:k' (default 1)",
    )
    parser.add_argument("--segment-size", type=int, default=None, help="integers per sieve segment")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker processes (default RATIOLAB_THREADS={config.THREADS})",
    )
    parser.add_argument("--format", choices=FORMATS, default=None, help="report format")
    parser.add_argument("--out", default=None, help="report path (default stdout)")
