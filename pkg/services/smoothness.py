"""
Smooth-number counts and the small tail classes of the ratio sum.

Psi(x, y) is read off the same sieve as the ratio sums: n <= x is y-smooth iff
its largest prime factor is <= y. n = 1 counts as smooth, as usual for Psi,
although the ratio sums themselves start at n = 2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from models.sum_model import RatioExponent, SumTable, WeightSpec
from services.accumulator import accumulate
from services.errors import DomainError
from services.factor_sieve import Segment, map_segments, segment_bounds

logger = logging.getLogger(__name__)


def lemma3_threshold(x: float) -> float:
    """y = exp(log x / log log x), the smoothness bound at which Psi(x, y) is negligible."""
    if x < 16:
        raise DomainError(f"the smoothness threshold needs x >= 16, got {x}")
    L = math.log(x)
    return math.exp(L / math.log(L))


def _count_smooth(segment: Segment, queries: List[Tuple[int, float]]) -> List[int]:
    """For each (last n, y) count n in the segment up to last with lpf(n) <= y."""
    counts = []
    for last, y in queries:
        stop = min(last, segment.hi - 1) - segment.lo + 1
        counts.append(int(np.count_nonzero(segment.lpf[:stop] <= y)))
    return counts


def psi_counts(
    points: Sequence[Tuple[int, float]],
    segment_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[int]:
    """
    Psi(x_k, y_k) for every (x_k, y_k), in one sieve pass up to max x_k.

    Raises:
        DomainError: If some x_k < 1 or y_k < 2
    """
    points = [(int(x), float(y)) for x, y in points]
    for x, y in points:
        if x < 1:
            raise DomainError(f"Psi needs x >= 1, got {x}")
        if y < 2:
            raise DomainError(f"Psi needs y >= 2, got {y}")
    if not points:
        return []

    totals = [1] * len(points)  # n = 1
    x_max = max(x for x, _ in points)
    if x_max < 2:
        return totals

    segment_size = int(segment_size or config.SEGMENT_SIZE)
    threads = int(threads or config.THREADS)
    bounds = segment_bounds(2, x_max + 1, segment_size)
    payloads = []
    for a, _ in bounds:
        payloads.append([(x, y) if x >= a else (a - 1, y) for x, y in points])

    for _, _, counts in map_segments(2, x_max + 1, segment_size, threads, _count_smooth, payloads):
        for k, count in enumerate(counts):
            totals[k] += count
    return totals


def psi_count(x: int, y: float, segment_size: Optional[int] = None, threads: Optional[int] = None) -> int:
    """Number of n in [1, x] whose prime factors are all <= y."""
    if y < 2:
        raise DomainError(f"Psi needs y >= 2, got {y}")
    if y >= x:
        if x < 1:
            raise DomainError(f"Psi needs x >= 1, got {x}")
        return int(x)
    return psi_counts([(x, y)], segment_size, threads)[0]


def lemma3_table(
    xs: Sequence[int], segment_size: Optional[int] = None, threads: Optional[int] = None
) -> List[Dict[str, float]]:
    """Psi(x, threshold(x))/x for each x."""
    thresholds = [lemma3_threshold(x) for x in xs]
    counts = psi_counts(list(zip(xs, thresholds)), segment_size, threads)
    return [
        {"x": x, "y": y, "psi": count, "psi_density": count / x}
        for x, y, count in zip(xs, thresholds, counts)
    ]


@dataclass
class TailClassSums:
    x: int
    sigma4: float
    sigma5: float
    sigma_ge6: float
    nonsquarefree: float


def tail_sums_from_table(table: SumTable) -> List[TailClassSums]:
    """Squarefree classes omega = 4, 5 and >= 6 from a lambda == 1 sweep."""
    out = []
    for row in table.rows:
        out.append(
            TailClassSums(
                x=row.x,
                sigma4=row.sigma(4),
                sigma5=row.sigma(5),
                sigma_ge6=math.fsum(row.classes[5:].tolist()) + row.class_tail,
                nonsquarefree=row.nonsquarefree,
            )
        )
    return out


def tail_class_sums(
    x: int, alpha, segment_size: Optional[int] = None, threads: Optional[int] = None
) -> TailClassSums:
    """Exact Sigma^(4), Sigma^(5) and Sigma^(6) + Sigma^(7) + ... up to x."""
    alpha = alpha if isinstance(alpha, RatioExponent) else RatioExponent(alpha)
    table = accumulate(int(x), [int(x)], WeightSpec.constant(1.0), alpha, segment_size, threads)
    return tail_sums_from_table(table)[0]


def tail_class_table(table: SumTable) -> List[Dict[str, float]]:
    """Tail classes scaled by log^4 x/x and the nonsquarefree part scaled by log^2 x/x."""
    rows = []
    for tails in tail_sums_from_table(table):
        L = math.log(tails.x)
        rows.append(
            {
                "x": tails.x,
                "sigma_4": tails.sigma4,
                "sigma_5": tails.sigma5,
                "sigma_ge6": tails.sigma_ge6,
                "nonsquarefree": tails.nonsquarefree,
                "sigma4_scaled": tails.sigma4 * L**4 / tails.x,
                "sigma_ge6_scaled": tails.sigma_ge6 * L**4 / tails.x,
                "nonsquarefree_scaled": tails.nonsquarefree * L**2 / tails.x,
            }
        )
    return rows
