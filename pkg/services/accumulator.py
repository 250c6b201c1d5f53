"""
Streaming accumulator for S_{lambda,alpha}(x) and its squarefree class split.

Segments are reduced in ascending order. Every segment contributes its
per-bucket sums (numpy bincount) to a running Neumaier sum; a checkpoint
inside a segment is emitted from a copy of the running sum plus the prefix
of that segment, so the running state never depends on where the
checkpoints fall.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from constants import Defaults, Messages
from models.signature_model import FactorSignature
from models.sum_model import CheckpointSums, PowerSeries, RatioExponent, SumTable, WeightSpec
from services.errors import DomainError
from services.factor_sieve import Segment, map_segments, segment_bounds
from utils.summation import NeumaierSum, exact_sum

logger = logging.getLogger(__name__)

CLASS_CAP = Defaults.CLASS_CAP
TAIL_BUCKET = CLASS_CAP + 1

# Layout of a reduced sum vector
TOTAL = 0
CLASSES = slice(1, CLASS_CAP + 1)
CLASS_TAIL = CLASS_CAP + 1
NONSQUAREFREE = CLASS_CAP + 2
PRIME_COUNT = CLASS_CAP + 3
VECTOR_SIZE = CLASS_CAP + 4

# omega(n) < 64 for every n that fits in int64
WEIGHT_TABLE_SIZE = 64


def ratio_term(sig: FactorSignature, alpha) -> float:
    """(p(n)/P(n))^alpha; exactly 1 for prime powers."""
    exponent = alpha.alpha if isinstance(alpha, RatioExponent) else RatioExponent(alpha).alpha
    if sig.spf == sig.lpf:
        return 1.0
    return (sig.spf / sig.lpf) ** exponent


@dataclass(frozen=True)
class TermSpec:
    """What a segment worker evaluates for each n: weight(omega) * g(p/P)."""

    weights: np.ndarray
    alpha: float = 1.0
    series: Optional[Tuple[float, ...]] = None

    @classmethod
    def from_weight(cls, weight: WeightSpec, alpha: RatioExponent) -> "TermSpec":
        return cls(weights=weight.table(WEIGHT_TABLE_SIZE), alpha=alpha.alpha)

    @classmethod
    def from_series(cls, series: PowerSeries) -> "TermSpec":
        return cls(
            weights=WeightSpec.constant(1.0).table(WEIGHT_TABLE_SIZE), series=series.coeffs
        )

    def ratio_values(self, segment: Segment) -> np.ndarray:
        ratio = segment.spf / segment.lpf
        if self.series is not None:
            return np.polynomial.polynomial.polyval(ratio, (0.0,) + self.series)
        if self.alpha == 1.0:
            return ratio
        return np.power(ratio, self.alpha)

    def weighted_values(self, ratio: np.ndarray, omega: np.ndarray) -> np.ndarray:
        first = self.weights[0]
        if np.all(self.weights == first):
            return ratio * first
        return self.weights[np.minimum(omega, WEIGHT_TABLE_SIZE - 1)] * ratio


def _bucket_sums(ratio: np.ndarray, weighted: np.ndarray, bucket: np.ndarray) -> np.ndarray:
    """Reduce one prefix of a segment into the sum-vector layout."""
    by_ratio = np.bincount(bucket, weights=ratio, minlength=TAIL_BUCKET + 1)
    by_weight = np.bincount(bucket, weights=weighted, minlength=TAIL_BUCKET + 1)

    sums = np.zeros(VECTOR_SIZE, dtype=np.float64)
    sums[TOTAL] = exact_sum(by_weight)
    sums[CLASSES] = by_ratio[1:TAIL_BUCKET]
    sums[CLASS_TAIL] = by_weight[TAIL_BUCKET]
    sums[NONSQUAREFREE] = by_weight[0]
    sums[PRIME_COUNT] = np.count_nonzero(bucket == 1)
    return sums


def _reduce_segment(segment: Segment, payload: Tuple[TermSpec, List[int]]) -> List[np.ndarray]:
    """Sum vectors of the segment prefixes ending at each cut (last cut = whole segment)."""
    terms, cuts = payload
    ratio = terms.ratio_values(segment)
    weighted = terms.weighted_values(ratio, segment.omega)
    bucket = np.where(
        segment.squarefree, np.minimum(segment.omega, TAIL_BUCKET), 0
    ).astype(np.intp)
    return [_bucket_sums(ratio[:cut], weighted[:cut], bucket[:cut]) for cut in cuts]


def _row_from_vector(x: int, vector: np.ndarray) -> CheckpointSums:
    return CheckpointSums(
        x=x,
        total=float(vector[TOTAL]),
        classes=np.array(vector[CLASSES], dtype=np.float64),
        class_tail=float(vector[CLASS_TAIL]),
        nonsquarefree=float(vector[NONSQUAREFREE]),
        prime_count=int(round(vector[PRIME_COUNT])),
    )


def validate_checkpoints(x_max: int, checkpoints: Optional[Iterable[int]]) -> List[int]:
    """Checkpoints as a strictly ascending list inside [2, x_max]; defaults to [x_max]."""
    if int(x_max) != x_max or x_max < 2:
        raise DomainError(f"x_max must be an integer >= 2, got {x_max}")
    points = [int(c) for c in checkpoints] if checkpoints is not None else []
    if not points:
        return [int(x_max)]
    if any(b <= a for a, b in zip(points, points[1:])):
        raise DomainError(f"checkpoints must be strictly ascending, got {points}")
    if points[0] < 2 or points[-1] > x_max:
        raise DomainError(f"checkpoints must lie in [2, {x_max}], got {points}")
    return points


def _sweep(
    x_max: int,
    checkpoints: Optional[Sequence[int]],
    terms: TermSpec,
    segment_size: Optional[int],
    threads: Optional[int],
    meta: dict,
) -> SumTable:
    points = validate_checkpoints(x_max, checkpoints)
    segment_size = int(segment_size or config.SEGMENT_SIZE)
    threads = int(threads or config.THREADS)
    if segment_size < Defaults.MIN_SEGMENT_SIZE:
        raise DomainError(f"segment size must be >= 1, got {segment_size}")

    logger.info(
        Messages.RUN_STARTED.format(x_max=x_max, segment_size=segment_size, threads=threads)
    )

    bounds = segment_bounds(2, int(x_max) + 1, segment_size)
    payloads = []
    emitted = []
    for a, b in bounds:
        inside = [c for c in points if a <= c < b]
        cuts = [c - a + 1 for c in inside]
        if not cuts or cuts[-1] != b - a:
            cuts.append(b - a)
        payloads.append((terms, cuts))
        emitted.append(inside)

    running = NeumaierSum(np.zeros(VECTOR_SIZE))
    rows = []
    for index, (a, b, results) in enumerate(
        map_segments(2, int(x_max) + 1, segment_size, threads, _reduce_segment, payloads)
    ):
        for c, vector in zip(emitted[index], results):
            snapshot = running.copy().add(vector)
            row = _row_from_vector(c, snapshot.value)
            rows.append(row)
            logger.info(
                Messages.CHECKPOINT_REACHED.format(
                    x=c, total=row.total, prime_count=row.prime_count
                )
            )
        running.add(results[-1])

    return SumTable(rows=rows, meta={**meta, "segment_size": str(segment_size)})


def accumulate(
    x_max: int,
    checkpoints: Optional[Sequence[int]],
    weight: WeightSpec,
    alpha: RatioExponent,
    segment_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> SumTable:
    """
    Exact S_{lambda,alpha}(x) and its class decomposition at each checkpoint.

    Args:
        x_max: Last integer of the sweep (>= 2)
        checkpoints: Strictly ascending x values in [2, x_max]
        weight: lambda
        alpha: Ratio exponent
        segment_size: Integers per sieve segment (config default when None)
        threads: Worker processes (config default when None)

    Returns:
        SumTable with one row per checkpoint

    Raises:
        DomainError: On invalid bounds or checkpoints
    """
    if not isinstance(alpha, RatioExponent):
        alpha = RatioExponent(alpha)
    if not alpha.in_theorem_range:
        logger.warning(Messages.ALPHA_OUTSIDE_THEOREM.format(alpha=alpha.alpha))
    meta = {"lambda": str(weight), "alpha": f"{alpha.alpha:g}"}
    return _sweep(
        x_max, checkpoints, TermSpec.from_weight(weight, alpha), segment_size, threads, meta
    )


def accumulate_series(
    x_max: int,
    checkpoints: Optional[Sequence[int]],
    series: PowerSeries,
    segment_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> SumTable:
    """S_f(x) = sum over 2 <= n <= x of f(p(n)/P(n)) for a truncated power series f."""
    return _sweep(
        x_max,
        checkpoints,
        TermSpec.from_series(series),
        segment_size,
        threads,
        {"series": str(series)},
    )


def classic_s(
    x_max: int,
    checkpoints: Optional[Sequence[int]] = None,
    segment_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> SumTable:
    """S(x) = sum of p(n)/P(n): lambda == 1, alpha == 1."""
    return power_s(x_max, checkpoints, 1, segment_size, threads)


def power_s(
    x_max: int,
    checkpoints: Optional[Sequence[int]],
    k: float,
    segment_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> SumTable:
    """S_k(x) = sum of (p(n)/P(n))^k."""
    return accumulate(
        x_max, checkpoints, WeightSpec.constant(1.0), RatioExponent(k), segment_size, threads
    )


def pi_ratio(table: SumTable, weight: WeightSpec) -> List[Tuple[int, float, float]]:
    """(x, S(x)/pi(x), lambda(1)) per checkpoint; the ratio tends to lambda(1) when alpha > 4/5."""
    limit = weight(1)
    return [
        (row.x, row.total / row.prime_count, limit) for row in table.rows if row.prime_count
    ]
