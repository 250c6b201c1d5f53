"""
Commands that sweep the integers and report exact sums: sum, decompose, tails.
"""

import argparse
import logging
from typing import Optional

from constants import Columns
from handlers.base_handler import BaseCommandHandler
from models.run_model import RunConfig
from models.sum_model import SumTable, WeightSpec
from services.accumulator import accumulate, accumulate_series, pi_ratio
from services.smoothness import tail_class_table
from utils.helpers import ReportBuilder

logger = logging.getLogger(__name__)


def _sweep(run: RunConfig, weight: Optional[WeightSpec] = None) -> SumTable:
    return accumulate(
        run.x_max,
        run.checkpoints,
        weight or run.weight,
        run.ratio_exponent,
        run.segment_size,
        run.threads,
    )


class SumHandler(BaseCommandHandler):
    """S_{lambda,alpha}(x), or S_f(x) with --series, at each checkpoint."""

    @property
    def name(self) -> str:
        return "sum"

    @property
    def help(self) -> str:
        return "exact ratio sums at each checkpoint"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--series",
            default=None,
            help="sum f(p/P) for f(t) = a1 t + a2 t^2 + ..., given as 'a1,a2,...'",
        )

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        if run.series is not None:
            table = accumulate_series(
                run.x_max, run.checkpoints, run.series, run.segment_size, run.threads
            )
        else:
            table = _sweep(run)

        weight = run.weight if run.series is None else WeightSpec.constant(1.0)
        ratios = {x: ratio for x, ratio, _ in pi_ratio(table, weight)}
        report = ReportBuilder([Columns.X, Columns.S, Columns.PRIME_COUNT, Columns.S_OVER_PI])
        for row in table.rows:
            report.add_row(
                {
                    Columns.X: row.x,
                    Columns.S: row.total,
                    Columns.PRIME_COUNT: row.prime_count,
                    Columns.S_OVER_PI: ratios.get(row.x),
                }
            )
        return report.add_meta(**table.meta)


class DecomposeHandler(BaseCommandHandler):
    """Squarefree omega classes, the class tail and the nonsquarefree part."""

    @property
    def name(self) -> str:
        return "decompose"

    @property
    def help(self) -> str:
        return "split the sum by omega(n) over squarefree n"

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        table = _sweep(run)
        report = ReportBuilder(
            [Columns.X, Columns.S]
            + Columns.class_columns()
            + [Columns.SIGMA_TAIL, Columns.NONSQUAREFREE, Columns.PRIME_COUNT]
        )
        for row in table.rows:
            cells = {Columns.X: row.x, Columns.S: row.total}
            for i in range(1, len(row.classes) + 1):
                cells[Columns.sigma(i)] = row.sigma(i)
            cells[Columns.SIGMA_TAIL] = row.class_tail
            cells[Columns.NONSQUAREFREE] = row.nonsquarefree
            cells[Columns.PRIME_COUNT] = row.prime_count
            report.add_row(cells)
        return report.add_meta(**table.meta)


class TailsHandler(BaseCommandHandler):
    """Classes omega = 4, 5, >= 6 and the nonsquarefree part, with their scalings."""

    @property
    def name(self) -> str:
        return "tails"

    @property
    def help(self) -> str:
        return "small tail classes scaled by log^4 x/x and log^2 x/x"

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        if not run.weight.is_constant_one:
            logger.warning(f"tails always uses lambda == 1; ignoring --lambda {run.weight}")
        table = _sweep(run, WeightSpec.constant(1.0))
        return ReportBuilder().add_rows(tail_class_table(table)).add_meta(**table.meta)
