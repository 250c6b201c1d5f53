"""
Helper utility functions for argument parsing and report output.
"""

import csv
import io
import json
import logging
import math
import re
import sys
from typing import Any, Dict, List, Optional, Sequence

from constants import Defaults, Patterns
from models.sum_model import PowerSeries, WeightSpec
from services.errors import DomainError

logger = logging.getLogger(__name__)


def parse_int(text: str) -> int:
    """
    Parse an integer, also accepting exact scientific notation such as 1e7.

    Raises:
        DomainError: If the text is not an integral number
    """
    text = str(text).strip()
    if re.fullmatch(Patterns.INTEGER, text):
        return int(text)
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"{text!r} is not an integer")
    if not math.isfinite(value) or value != int(value):
        raise DomainError(f"{text!r} is not an integer")
    return int(value)


def parse_floats(text: str) -> List[float]:
    """Comma-separated reals."""
    values = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = float(part)
        except ValueError:
            raise DomainError(f"{part!r} is not a number")
        values.append(value)
    if not values:
        raise DomainError(f"no numbers in {text!r}")
    return values


def parse_lambda(text: str) -> WeightSpec:
    """
    Parse the inline lambda syntax.

    ``1,2,3`` gives head (1, 2, 3) and tail 3; ``1,2,3;tail=0`` sets the tail
    explicitly; ``indicator:k`` is 1 at k and 0 elsewhere.

    Raises:
        DomainError: On malformed input
    """
    text = str(text).strip()
    match = re.fullmatch(Patterns.INDICATOR, text)
    if match:
        return WeightSpec.indicator(int(match.group(1)))

    head_text, _, tail_text = text.partition(";")
    head = parse_floats(head_text)
    if not tail_text:
        return WeightSpec(head=tuple(head), tail=head[-1])

    match = re.fullmatch(Patterns.TAIL, tail_text.strip())
    if not match:
        raise DomainError(f"expected ';tail=<value>' after the lambda head, got {tail_text!r}")
    return WeightSpec(head=tuple(head), tail=float(match.group(1)))


def parse_series(text: str) -> PowerSeries:
    """Coefficients a_1, ..., a_m of f(t) = a_1 t + ... + a_m t^m."""
    return PowerSeries(tuple(parse_floats(text)))


def decades(x_max: int, start: int = Defaults.DECADES_START) -> List[int]:
    """10^3, 10^4, ... up to x_max, with x_max itself as the last checkpoint."""
    points = []
    power = int(start)
    while power < x_max:
        points.append(power)
        power *= 10
    points.append(int(x_max))
    return points


def parse_checkpoints(text: Optional[str], x_max: int) -> List[int]:
    """
    Checkpoints from the command line.

    Args:
        text: Comma list of integers, the keyword "decades", or None for [x_max]
        x_max: Largest x of the run

    Returns:
        Ascending list of checkpoints
    """
    if text is None or not str(text).strip():
        return [int(x_max)]
    if str(text).strip().lower() == "decades":
        return decades(x_max)
    return [parse_int(part) for part in str(text).split(",") if part.strip()]


def format_value(value: Any, digits: int = Defaults.SIGNIFICANT_DIGITS) -> str:
    """
    Format a report cell: integers verbatim, reals with ``digits`` significant digits.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 10**digits:
            return str(int(value))
        return f"{value:.{digits}g}"
    return str(value)


def _json_value(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_value(value, digits)
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {key: _json_value(v, digits) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v, digits) for v in value]
    return value


class ReportBuilder:
    """
    Builder for run reports.

    Rows share a fixed column order; metadata and extra sections (band checks,
    fitted coefficients) go into the JSON form only. The CSV form carries the
    header and the rows.
    """

    def __init__(self, columns: Optional[Sequence[str]] = None):
        self.columns: List[str] = list(columns) if columns else []
        self.rows: List[Dict[str, Any]] = []
        self.meta: Dict[str, Any] = {}
        self.sections: Dict[str, Any] = {}
        self.failures: List[str] = []

    def add_row(self, row: Dict[str, Any]) -> "ReportBuilder":
        """Add a row; unknown keys extend the column list."""
        for key in row:
            if key not in self.columns:
                self.columns.append(key)
        self.rows.append(dict(row))
        return self

    def add_rows(self, rows: Sequence[Dict[str, Any]]) -> "ReportBuilder":
        for row in rows:
            self.add_row(row)
        return self

    def add_meta(self, **items: Any) -> "ReportBuilder":
        self.meta.update(items)
        return self

    def add_section(self, name: str, content: Any) -> "ReportBuilder":
        self.sections[name] = content
        return self

    def add_failure(self, failure: str) -> "ReportBuilder":
        self.failures.append(failure)
        return self

    def build_csv(self, digits: int = Defaults.SIGNIFICANT_DIGITS) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(row.get(column), digits) for column in self.columns])
        return buffer.getvalue()

    def build_json(self, digits: int = Defaults.SIGNIFICANT_DIGITS) -> str:
        document = {
            "meta": _json_value(self.meta, digits),
            "columns": self.columns,
            "rows": [
                {column: _json_value(row.get(column), digits) for column in self.columns}
                for row in self.rows
            ],
        }
        for name, content in self.sections.items():
            document[name] = _json_value(content, digits)
        return json.dumps(document, indent=2) + "\n"

    def build(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.build_csv()
        if fmt == "json":
            return self.build_json()
        raise DomainError(f"unknown report format {fmt!r}")

    def write(self, fmt: str = "csv", out: Optional[str] = None) -> None:
        """Write the report to ``out``, or to stdout when no path is given."""
        text = self.build(fmt)
        if out:
            with open(out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            logger.info(f"Report written to {out}")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
