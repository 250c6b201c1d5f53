"""
Per-run options shared by every command.
"""

import argparse
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from config import config
from models.sum_model import PowerSeries, RatioExponent, WeightSpec
from services.errors import ConfigError, DomainError
from utils.helpers import parse_checkpoints, parse_int, parse_lambda, parse_series

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """Options of one command run, built from parsed arguments."""

    x_max: int
    checkpoints: List[int]
    alpha: float = 1.0
    weight: WeightSpec = field(default_factory=WeightSpec.constant)
    series: Optional[PowerSeries] = None
    segment_size: int = config.SEGMENT_SIZE
    threads: int = config.THREADS
    format: str = config.FORMAT
    out: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace, default_checkpoints: Optional[str] = None) -> "RunConfig":
        """
        Build and validate a RunConfig.

        Raises:
            ConfigError: Listing every invalid option
        """
        errors = []

        def attempt(label: str, parse, *values):
            try:
                return parse(*values)
            except DomainError as e:
                errors.append(f"{label}: {e.message}")
                return None

        x_max = attempt("--x-max", parse_int, args.x_max)
        checkpoints = None
        if x_max is not None:
            text = args.checkpoints if args.checkpoints is not None else default_checkpoints
            checkpoints = attempt("--checkpoints", parse_checkpoints, text, x_max)
        weight = attempt("--lambda", parse_lambda, getattr(args, "weight", None) or "1")
        series_text = getattr(args, "series", None)
        series = attempt("--series", parse_series, series_text) if series_text else None

        if errors:
            raise ConfigError(f"invalid options: {'; '.join(errors)}", errors=errors)

        run = cls(
            x_max=x_max,
            checkpoints=checkpoints,
            alpha=args.alpha,
            weight=weight,
            series=series,
            segment_size=args.segment_size or config.SEGMENT_SIZE,
            threads=args.threads or config.THREADS,
            format=(args.format or config.FORMAT).lower(),
            out=args.out,
        )
        run.validate()
        return run

    def validate(self) -> None:
        """
        Check the options against the preconditions shared by all commands.

        Raises:
            ConfigError: Naming each violated precondition
        """
        errors = []

        if self.x_max is None or self.x_max < 2:
            errors.append(f"x_max must be an integer >= 2, got {self.x_max}")

        if not (isinstance(self.alpha, (int, float)) and math.isfinite(self.alpha) and self.alpha > 0):
            errors.append(f"alpha must be a finite positive real, got {self.alpha}")

        if self.segment_size < 1:
            errors.append(f"segment size must be >= 1, got {self.segment_size}")

        if self.threads < 1:
            errors.append(f"threads must be >= 1, got {self.threads}")

        if self.format not in FORMATS:
            errors.append(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")

        points = self.checkpoints or []
        if any(b <= a for a, b in zip(points, points[1:])):
            errors.append(f"checkpoints must be strictly ascending, got {points}")
        if points and self.x_max is not None and (points[0] < 2 or points[-1] > self.x_max):
            errors.append(f"checkpoints must lie in [2, {self.x_max}], got {points}")

        if errors:
            for error in errors:
                logger.error(f"Run configuration error: {error}")
            raise ConfigError(f"invalid options: {'; '.join(errors)}", errors=errors)

    @property
    def ratio_exponent(self) -> RatioExponent:
        return RatioExponent(self.alpha)
