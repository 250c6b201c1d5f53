"""
Diagnostic tables for the auxiliary estimates: lemma and subsums.
"""

import argparse
import logging
import math

from handlers.base_handler import BaseCommandHandler
from models.run_model import RunConfig
from models.sum_model import RatioExponent, WeightSpec
from services.accumulator import accumulate
from services.asymptotic import lemma1_table, lemma2_table, sigma2_subsums, sigma3_subsums
from services.errors import DomainError
from services.smoothness import lemma3_table
from utils.helpers import ReportBuilder

logger = logging.getLogger(__name__)

LEMMA_KINDS = ("pi", "prime-sum", "smooth")


class LemmaHandler(BaseCommandHandler):
    """
    pi(x) against li(x), prime sums against their integrals, or Psi at the
    smoothness threshold, per checkpoint.
    """

    default_checkpoints = "decades"

    @property
    def name(self) -> str:
        return "lemma"

    @property
    def help(self) -> str:
        return "prime counting, prime sum and smooth number diagnostics"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--which", choices=LEMMA_KINDS, required=True, help="table to produce")
        parser.add_argument("--y", type=float, default=1000.0, help="lower limit of the prime sum (> 3/2)")
        parser.add_argument("--exponent", type=float, default=1.0, help="exponent of p in the prime sum")

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        if args.which == "pi":
            table = accumulate(
                run.x_max,
                run.checkpoints,
                WeightSpec.constant(1.0),
                RatioExponent(1.0),
                run.segment_size,
                run.threads,
            )
            rows = lemma1_table(table)
        elif args.which == "prime-sum":
            rows = lemma2_table(args.y, run.checkpoints, args.exponent)
        else:
            rows = lemma3_table(run.checkpoints, run.segment_size, run.threads)

        return ReportBuilder().add_rows(rows).add_meta(which=args.which)


class SubsumsHandler(BaseCommandHandler):
    """Exact two- and three-prime sub-sums, scaled, next to their predicted constants."""

    @property
    def name(self) -> str:
        return "subsums"

    @property
    def help(self) -> str:
        return "exact sub-sums of the two- and three-prime classes"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--classes", default="2,3", help="which classes to split: '2', '3' or '2,3'"
        )

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        classes = {part.strip() for part in args.classes.split(",") if part.strip()}
        if not classes or not classes <= {"2", "3"}:
            raise DomainError(f"--classes takes '2', '3' or '2,3', got {args.classes!r}")

        report = ReportBuilder()
        for x in run.checkpoints:
            L = math.log(x)
            cells = {"x": x}
            if "2" in classes:
                two = sigma2_subsums(x, run.alpha)
                cells.update(
                    {
                        "I1": two.I1,
                        "I2": two.I2,
                        "sigma2": two.total,
                        "I1_scaled": two.I1 * L**2 / x,
                        "I2_scaled": two.I2 * L**2 / x,
                        "I1_leading": float(two.predicted_leading[0]),
                        "I2_leading": float(two.predicted_leading[1]),
                        "I1_second": float(two.predicted_second[0]),
                        "I2_second": float(two.predicted_second[1]),
                    }
                )
            if "3" in classes:
                three = sigma3_subsums(x, run.alpha)
                cells.update(
                    {
                        "I3": three.I3,
                        "I4": three.I4,
                        "I5": three.I5,
                        "sigma3": three.total,
                        "I3_scaled": three.I3 * L**3 / x,
                        "I4_scaled": three.I4 * L**3 / x,
                        "I5_scaled": three.I5 * L**3 / x,
                        "I3_leading": float(three.predicted_leading[0]),
                        "I4_leading": float(three.predicted_leading[1]),
                        "I5_leading": float(three.predicted_leading[2]),
                    }
                )
            report.add_row(cells)
        return report.add_meta(alpha=run.alpha)
