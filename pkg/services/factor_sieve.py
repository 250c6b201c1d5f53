"""
Segmented factor sieve.
Produces the smallest prime factor, largest prime factor, number of distinct
prime factors and squarefree flag of every integer in a segment [lo, hi).
"""

import functools
import logging
import math
import multiprocessing
from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, Tuple

import numpy as np

from constants import Messages
from models.signature_model import FactorSignature
from services.errors import DomainError

logger = logging.getLogger(__name__)

INT32_LIMIT = int(np.iinfo(np.int32).max)


def base_primes(limit: int) -> np.ndarray:
    """
    Sieve of Eratosthenes up to limit.

    Args:
        limit: Upper bound (inclusive)

    Returns:
        Ascending int64 array of the primes <= limit (empty when limit < 2)
    """
    limit = int(limit)
    if limit < 2:
        return np.array([], dtype=np.int64)

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False

    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True)
class Segment:
    """
    Signatures of every n in [lo, hi), stored as parallel arrays indexed by n - lo.

    The arrays are read-only once the segment is built.
    """

    lo: int
    hi: int
    spf: np.ndarray  # int32 below INT32_LIMIT, else int64
    lpf: np.ndarray  # dtype of spf
    omega: np.ndarray  # int8
    squarefree: np.ndarray  # bool

    def __post_init__(self):
        if self.lo < 2 or self.hi <= self.lo:
            raise DomainError(f"segment needs 2 <= lo < hi, got [{self.lo}, {self.hi})")
        for name in ("spf", "lpf", "omega", "squarefree"):
            array = getattr(self, name)
            if len(array) != self.hi - self.lo:
                raise DomainError(f"{name} has {len(array)} entries, expected {self.hi - self.lo}")
            array.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo

    def signature(self, n: int) -> FactorSignature:
        if not self.lo <= n < self.hi:
            raise DomainError(f"n={n} is outside the segment [{self.lo}, {self.hi})")
        i = n - self.lo
        return FactorSignature(
            int(self.spf[i]), int(self.lpf[i]), int(self.omega[i]), bool(self.squarefree[i])
        )

    def signatures(self) -> Iterator[Tuple[int, FactorSignature]]:
        for n in range(self.lo, self.hi):
            yield n, self.signature(n)


@functools.lru_cache(maxsize=64)
def _prime_count_upto(root: int) -> int:
    return len(base_primes(root))


def _require_base_primes(primes: np.ndarray, hi: int) -> int:
    """Check primes covers every prime <= isqrt(hi - 1); return how many are needed."""
    root = math.isqrt(hi - 1)
    needed = int(np.searchsorted(primes, root, side="right"))
    if root < 2:
        return needed
    if needed != _prime_count_upto(root):
        largest = int(primes[-1]) if len(primes) else None
        raise DomainError(
            f"base primes must cover every prime <= {root} for segment end {hi}",
            details={"largest_base_prime": largest, "required_root": root},
        )
    return needed


def sieve_segment(lo: int, hi: int, primes: np.ndarray) -> Segment:
    """
    Sieve the segment [lo, hi).

    Base primes are applied largest first. Each p marks its multiples: spf is
    overwritten (so the smallest divisor wins), lpf keeps the maximum, omega
    counts one distinct factor, and the p-smooth part is multiplied by p once
    per power of p dividing n. Multiples of p^2 lose squarefreeness. What is
    left after dividing n by its smooth part exceeds sqrt(hi - 1) and is
    therefore a single prime, the largest one.

    Args:
        lo: First integer of the segment (>= 2)
        hi: One past the last integer
        primes: Ascending primes including every prime <= sqrt(hi - 1)

    Returns:
        The immutable Segment

    Raises:
        DomainError: If the bounds are invalid or base primes are missing
    """
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi <= lo:
        raise DomainError(f"segment needs 2 <= lo < hi, got [{lo}, {hi})")

    primes = np.asarray(primes, dtype=np.int64)
    needed = _require_base_primes(primes, hi)

    size = hi - lo
    dtype = np.int32 if hi <= INT32_LIMIT else np.int64
    spf = np.zeros(size, dtype=dtype)
    lpf = np.zeros(size, dtype=dtype)
    smooth = np.ones(size, dtype=dtype)
    omega = np.zeros(size, dtype=np.int8)
    squarefree = np.ones(size, dtype=bool)

    # descending, so the last prime written to spf is the smallest
    for p in primes[:needed][::-1].tolist():
        start = (-lo) % p
        if start >= size:
            continue
        hits = slice(start, None, p)

        spf[hits] = p
        largest = lpf[hits]
        np.maximum(largest, p, out=largest)
        omega[hits] += 1
        smooth[hits] *= p

        power = p * p
        while power < hi:
            start = (-lo) % power
            if start >= size:
                break
            repeated = slice(start, None, power)
            squarefree[repeated] = False
            smooth[repeated] *= p
            power *= p

    cofactor = np.arange(lo, hi, dtype=dtype) // smooth
    rest = cofactor > 1
    lpf[rest] = cofactor[rest]
    omega[rest] += 1
    untouched = spf == 0
    spf[untouched] = cofactor[untouched]

    return Segment(lo=lo, hi=hi, spf=spf, lpf=lpf, omega=omega, squarefree=squarefree)


def segment_bounds(lo: int, hi: int, segment_size: int) -> List[Tuple[int, int]]:
    """Split [lo, hi) into consecutive half-open ranges of at most segment_size."""
    if segment_size < 1:
        raise DomainError(f"segment size must be >= 1, got {segment_size}")
    return [(a, min(a + segment_size, hi)) for a in range(lo, hi, segment_size)]


# Base primes of the current worker process, set once by the pool initializer
_WORKER_PRIMES = np.array([], dtype=np.int64)


def _init_worker(primes: np.ndarray) -> None:
    global _WORKER_PRIMES
    _WORKER_PRIMES = primes


def _run_segment_task(job: Tuple[Callable, int, int, Any]) -> Any:
    task, lo, hi, payload = job
    return task(sieve_segment(lo, hi, _WORKER_PRIMES), payload)


def map_segments(
    lo: int,
    hi: int,
    segment_size: int,
    threads: int,
    task: Callable[[Segment, Any], Any],
    payloads: List[Any],
) -> Iterator[Tuple[int, int, Any]]:
    """
    Sieve [lo, hi) segment by segment and apply task to each segment.

    Segments may be sieved concurrently in ``threads`` worker processes, but
    results are always yielded in ascending segment order, so any reduction
    over them is deterministic.

    Args:
        lo: First integer (>= 2)
        hi: One past the last integer
        segment_size: Maximum integers per segment
        threads: Number of worker processes (1 runs in-process)
        task: Module-level function (segment, payload) -> result
        payloads: One payload per segment, aligned with segment_bounds()

    Yields:
        (segment lo, segment hi, task result)
    """
    bounds = segment_bounds(lo, hi, segment_size)
    if len(payloads) != len(bounds):
        raise DomainError(f"{len(payloads)} payloads for {len(bounds)} segments")

    primes = base_primes(math.isqrt(hi - 1))
    jobs = [(task, a, b, payload) for (a, b), payload in zip(bounds, payloads)]

    if threads <= 1 or len(jobs) <= 1:
        for job in jobs:
            _, a, b, payload = job
            result = task(sieve_segment(a, b, primes), payload)
            logger.debug(Messages.SEGMENT_DONE.format(lo=a, hi=b))
            yield a, b, result
        return

    with multiprocessing.Pool(
        processes=threads, initializer=_init_worker, initargs=(primes,)
    ) as pool:
        for (_, a, b, _), result in zip(jobs, pool.imap(_run_segment_task, jobs)):
            logger.debug(Messages.SEGMENT_DONE.format(lo=a, hi=b))
            yield a, b, result
