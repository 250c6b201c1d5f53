"""
Commands comparing exact sums with the predicted expansion: predict, verify.
"""

import argparse
import logging
from dataclasses import asdict

from constants import Columns, Defaults
from handlers.base_handler import BaseCommandHandler
from models.asymptotic_model import AsymptoticCoeffs
from models.run_model import RunConfig
from models.sum_model import synthetic_table
from services.accumulator import accumulate
from services.asymptotic import (
    decomposition_scaled,
    estimator_sequence,
    evaluate_bands,
    fit_coefficients,
    synthetic_checks,
    theorem1_coeffs,
    theorem2_coeffs_quadrature,
    theorem2_coeffs_series,
)
from services.errors import DomainError
from utils.helpers import ReportBuilder, parse_floats

logger = logging.getLogger(__name__)

# Series and quadrature coefficient paths must agree to this (relative) tolerance
SERIES_AGREEMENT = 1e-9


def _prediction_cells(coeffs: AsymptoticCoeffs, x: int) -> dict:
    if x < Defaults.PREDICT_MIN_X:
        raise DomainError(f"predictions need x >= {Defaults.PREDICT_MIN_X}, got {x}")
    return dict(zip(Columns.PREDICTIONS, coeffs.partial_predictions(x)))


class PredictHandler(BaseCommandHandler):
    """Predicted coefficients and one-, two- and three-term values at each checkpoint."""

    default_checkpoints = "decades"

    @property
    def name(self) -> str:
        return "predict"

    @property
    def help(self) -> str:
        return "predicted expansion coefficients and values"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--series", default=None, help="predict S_f for f(t) = a1 t + a2 t^2 + ..., given as 'a1,a2,...'"
        )

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        report = ReportBuilder([Columns.X, *Columns.COEFFICIENTS, *Columns.PREDICTIONS])

        if run.series is not None:
            coeffs = theorem2_coeffs_series(run.series)
            quadrature = theorem2_coeffs_quadrature(run.series)
            gap = max(
                abs(a - b) / (1.0 + abs(a))
                for a, b in zip(coeffs.as_tuple(), quadrature.as_tuple())
            )
            if gap > SERIES_AGREEMENT:
                logger.warning(f"Series and quadrature coefficients differ by {gap:.3g}")
            report.add_meta(
                series=str(run.series),
                quadrature=list(quadrature.as_tuple()),
                series_quadrature_gap=gap,
            )
        else:
            coeffs = theorem1_coeffs(run.weight, run.ratio_exponent)
            report.add_meta(**{"lambda": str(run.weight), "alpha": run.alpha})
            if not run.ratio_exponent.in_theorem_range:
                report.add_meta(warning=f"alpha={run.alpha:g} is not above 4/5")

        for x in run.checkpoints:
            cells = {Columns.X: x, **dict(zip(Columns.COEFFICIENTS, coeffs.as_tuple()))}
            cells.update(_prediction_cells(coeffs, x))
            report.add_row(cells)
        return report


class VerifyHandler(BaseCommandHandler):
    """
    Exact sums against the prediction: peel-off estimators, a least-squares fit
    and acceptance bands. Failed bands end the run with exit code 4 after the
    report is written.
    """

    default_checkpoints = "decades"

    @property
    def name(self) -> str:
        return "verify"

    @property
    def help(self) -> str:
        return "check exact sums against the expansion and acceptance bands"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--synthetic",
            default=None,
            help="verify a table built exactly from 'c1,c2,c3' instead of sweeping",
        )
        parser.add_argument(
            "--fit-order", type=int, default=Defaults.FIT_ORDER, help="number of basis terms x/log^j x"
        )

    def build_report(self, run: RunConfig, args: argparse.Namespace) -> ReportBuilder:
        order = args.fit_order
        usable = [x for x in run.checkpoints if x >= Defaults.FIT_MIN_X]
        if order < 1 or len(usable) < order:
            raise DomainError(
                f"a fit of order {order} needs at least {order} checkpoints >= {Defaults.FIT_MIN_X}, "
                f"got {len(usable)}"
            )

        alpha = run.ratio_exponent
        synthetic = args.synthetic is not None
        if synthetic:
            values = parse_floats(args.synthetic)
            if len(values) != 3:
                raise DomainError(f"--synthetic takes exactly three coefficients, got {len(values)}")
            predicted = AsymptoticCoeffs(*values)
            table = synthetic_table(run.checkpoints, predicted.as_tuple())
        else:
            predicted = theorem1_coeffs(run.weight, alpha)
            table = accumulate(
                run.x_max, run.checkpoints, run.weight, alpha, run.segment_size, run.threads
            )

        estimators = estimator_sequence(table, run.weight, alpha, coeffs=predicted)
        fit = fit_coefficients(table, run.weight, alpha, order)

        decomposition = None
        if synthetic:
            summary = synthetic_checks(estimators, predicted, fit)
        else:
            if alpha.alpha == 1.0:
                decomposition = decomposition_scaled(table, alpha)
            summary = evaluate_bands(estimators, run.weight, alpha, fit, decomposition)

        report = ReportBuilder(
            [Columns.X, Columns.S, *Columns.PREDICTIONS, *Columns.ESTIMATORS, Columns.REL_ERROR]
        )
        for index, (row, estimator) in enumerate(zip(table.rows, estimators)):
            cells = {Columns.X: row.x, Columns.S: row.total}
            cells.update(_prediction_cells(predicted, row.x))
            cells.update(
                {
                    "c1hat": estimator.c1hat,
                    "c2hat": estimator.c2hat,
                    "c3hat": estimator.c3hat,
                    Columns.REL_ERROR: row.total / cells[Columns.PREDICTIONS[-1]] - 1.0,
                }
            )
            if decomposition:
                cells["sigma2_scaled"] = decomposition[index]["sigma2_scaled"]
                cells["sigma3_scaled"] = decomposition[index]["sigma3_scaled"]
            report.add_row(cells)

        meta = {**table.meta, "lambda": str(run.weight), "alpha": alpha.alpha}
        report.add_meta(
            **meta,
            predicted=list(predicted.as_tuple()),
            fit_order=fit.order,
            fitted=list(fit.fitted),
            residual_norm=fit.residual_norm,
            passed=summary.passed,
        )
        report.add_section("checks", [asdict(check) for check in summary.checks])
        for check in summary.failures:
            report.add_failure(check.detail)
        return report
