"""
Records produced by the asymptotic predictor and the empirical fits.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from services.errors import DomainError


@dataclass(frozen=True)
class AsymptoticCoeffs:
    """Coefficients of x/log x, x/log^2 x and x/log^3 x."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.as_tuple()):
            raise DomainError(f"coefficients must be finite, got {self.as_tuple()}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def partial_predictions(self, x: float) -> Tuple[float, float, float]:
        """One-, two- and three-term predictions at x."""
        L = math.log(x)
        first = self.c1 * x / L
        second = first + self.c2 * x / L**2
        return (first, second, second + self.c3 * x / L**3)

    def predict(self, x: float) -> float:
        return self.partial_predictions(x)[2]


@dataclass
class FitResult:
    """Least-squares fit of checkpoint totals in the basis x/log^j x."""

    fitted: Tuple[float, ...]
    residual_norm: float
    scaled_residuals: Tuple[float, ...]
    checkpoints: Tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.fitted)


@dataclass
class EstimatorRow:
    """Peel-off estimators at one checkpoint."""

    x: int
    c1hat: float
    c2hat: float
    c3hat: float


@dataclass
class Sigma2Subsums:
    x: int
    alpha: float
    I1: float
    I2: float
    splits: Tuple[float, float]
    predicted_leading: Tuple[Fraction, Fraction]
    predicted_second: Tuple[Fraction, Fraction]

    @property
    def total(self) -> float:
        return self.I1 + self.I2


@dataclass
class Sigma3Subsums:
    x: int
    alpha: float
    I3: float
    I4: float
    I5: float
    splits: Tuple[float, float]
    predicted_leading: Tuple[Fraction, Fraction, Fraction]

    @property
    def total(self) -> float:
        return self.I3 + self.I4 + self.I5


@dataclass
class PrimeIntegral:
    """Quadrature side of the prime-sum lemma, with its error-term branch."""

    value: float
    branch: str  # "c>-1", "c<-1" or "c=-1"
    error_scale: float


@dataclass
class BandCheck:
    name: str
    value: float
    low: Optional[float]
    high: Optional[float]
    passed: bool
    detail: str = ""
    # advisory checks are reported but never fail a run
    enforced: bool = True


@dataclass
class VerificationSummary:
    checks: List[BandCheck] = field(default_factory=list)
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failures(self) -> List[BandCheck]:
        return [check for check in self.checks if check.enforced and not check.passed]
