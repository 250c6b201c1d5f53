"""
Trial-division reference for the sieve and the accumulator.
Slow on purpose: it shares no code path with the segmented sieve.
"""

import logging
from typing import List, Optional

from config import config
from constants import Messages
from models.signature_model import FactorSignature
from models.sum_model import RatioExponent, WeightSpec
from services.errors import DomainError
from utils.summation import NeumaierSum

logger = logging.getLogger(__name__)


def factor_signature_naive(n: int) -> FactorSignature:
    """
    Signature of n by trial division.

    Args:
        n: Integer >= 2

    Returns:
        FactorSignature(spf, lpf, omega, squarefree)

    Raises:
        DomainError: If n < 2
    """
    n = int(n)
    if n < 2:
        raise DomainError(f"factor_signature_naive needs n >= 2, got {n}")

    m = n
    spf = 0
    lpf = 0
    omega = 0
    squarefree = True

    d = 2
    while d * d <= m:
        if m % d == 0:
            exponent = 0
            while m % d == 0:
                m //= d
                exponent += 1
            spf = spf or d
            lpf = d
            omega += 1
            if exponent > 1:
                squarefree = False
        d += 1 if d == 2 else 2

    if m > 1:
        spf = spf or m
        lpf = m
        omega += 1

    return FactorSignature(spf, lpf, omega, squarefree)


def naive_signatures(x: int) -> List[FactorSignature]:
    """Signatures of 2..x; entry i belongs to n = i + 2."""
    _check_limit(x)
    return [factor_signature_naive(n) for n in range(2, int(x) + 1)]


def brute_sum(
    x: int,
    weight: WeightSpec,
    alpha: float,
    signatures: Optional[List[FactorSignature]] = None,
) -> float:
    """
    S_{lambda,alpha}(x) evaluated term by term over 2 <= n <= x.

    Args:
        x: Upper limit (>= 2)
        weight: lambda
        alpha: Exponent (> 0)
        signatures: Optional output of naive_signatures(X) for some X >= x,
            reused across calls with the same range

    Returns:
        Compensated sum of lambda(omega(n)) * (p(n)/P(n))^alpha

    Raises:
        DomainError: If x < 2, alpha <= 0 or x exceeds the oracle limit
    """
    exponent = RatioExponent(alpha).alpha
    x = int(x)
    _check_limit(x)
    if signatures is None:
        signatures = naive_signatures(x)
    elif len(signatures) < x - 1:
        raise DomainError(f"{len(signatures)} signatures cannot cover x={x}")

    acc = NeumaierSum()
    for sig in signatures[: x - 1]:
        acc.add(weight(sig.omega) * (sig.spf / sig.lpf) ** exponent)
    return acc.value


def _check_limit(x: int) -> None:
    if x < 2:
        raise DomainError(f"oracle needs x >= 2, got {x}")
    if x > config.ORACLE_LIMIT:
        raise DomainError(Messages.ORACLE_LIMIT.format(limit=config.ORACLE_LIMIT, x=x))
