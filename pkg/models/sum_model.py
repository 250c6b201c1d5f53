"""
Input and output records of the ratio-sum accumulator.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from constants import Defaults
from services.errors import DomainError


@dataclass(frozen=True)
class WeightSpec:
    """
    A bounded real arithmetic function lambda given by its first values and a
    constant tail: lambda(i) = head[i-1] for i <= len(head), tail otherwise.
    """

    head: Tuple[float, ...]
    tail: float

    def __post_init__(self):
        head = tuple(float(v) for v in self.head)
        values = head + (float(self.tail),)
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"lambda values must be finite, got {values}")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", float(self.tail))

    @classmethod
    def constant(cls, value: float = 1.0) -> "WeightSpec":
        return cls(head=(), tail=value)

    @classmethod
    def indicator(cls, k: int) -> "WeightSpec":
        """lambda(i) = 1 if i == k else 0."""
        if k < 1:
            raise DomainError(f"indicator position must be >= 1, got {k}")
        return cls(head=tuple(1.0 if i == k else 0.0 for i in range(1, k + 1)), tail=0.0)

    def __call__(self, i: int) -> float:
        if i < 1:
            raise DomainError(f"lambda is defined on i >= 1, got {i}")
        return self.head[i - 1] if i <= len(self.head) else self.tail

    def table(self, size: int) -> np.ndarray:
        """Lookup array with table[i] = lambda(i) for 1 <= i < size; table[0] = 0."""
        values = np.full(size, self.tail, dtype=np.float64)
        values[0] = 0.0
        m = min(len(self.head), size - 1)
        values[1 : m + 1] = self.head[:m]
        return values

    @property
    def is_constant_one(self) -> bool:
        return self.tail == 1.0 and all(v == 1.0 for v in self.head)

    def __str__(self) -> str:
        head = ",".join(f"{v:g}" for v in self.head)
        return f"{head};tail={self.tail:g}" if head else f"tail={self.tail:g}"


@dataclass(frozen=True)
class RatioExponent:
    """The exponent alpha > 0 applied to p(n)/P(n)."""

    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be a finite positive real, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def in_theorem_range(self) -> bool:
        """True when alpha > 4/5, compared on the shortest decimal form of alpha."""
        return self.exact > Defaults.ALPHA_THRESHOLD

    @property
    def exact(self) -> Fraction:
        return Fraction(repr(self.alpha))


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series f(t) = a_1 t + ... + a_m t^m, so f(0) = 0."""

    coeffs: Tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        if not coeffs:
            raise DomainError("a power series needs at least one coefficient")
        if not all(math.isfinite(a) for a in coeffs):
            raise DomainError(f"series coefficients must be finite, got {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, (0.0,) + self.coeffs)

    def over_t(self, t):
        """f(t)/t as the polynomial a_1 + a_2 t + ... (no singularity at 0)."""
        return np.polynomial.polynomial.polyval(t, self.coeffs)

    def __str__(self) -> str:
        return ",".join(f"{a:g}" for a in self.coeffs)


@dataclass
class CheckpointSums:
    """Exact sums at one checkpoint x."""

    x: int
    total: float
    classes: np.ndarray  # classes[i - 1] = Sigma^(i), i = 1..CLASS_CAP, unweighted
    class_tail: float  # lambda-weighted, squarefree with omega > CLASS_CAP
    nonsquarefree: float  # lambda-weighted, mu(n) == 0
    prime_count: int

    def sigma(self, i: int) -> float:
        if not 1 <= i <= len(self.classes):
            raise DomainError(f"class index must be in 1..{len(self.classes)}, got {i}")
        return float(self.classes[i - 1])


@dataclass
class SumTable:
    """Checkpointed totals of one sweep, ascending in x."""

    rows: List[CheckpointSums]
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def checkpoints(self) -> List[int]:
        return [row.x for row in self.rows]

    @property
    def totals(self) -> np.ndarray:
        return np.array([row.total for row in self.rows], dtype=np.float64)

    def sigma(self, i: int) -> np.ndarray:
        return np.array([row.sigma(i) for row in self.rows], dtype=np.float64)

    def at(self, x: int) -> CheckpointSums:
        for row in self.rows:
            if row.x == x:
                return row
        raise DomainError(f"x={x} is not a checkpoint of this table")

    def __len__(self) -> int:
        return len(self.rows)


def synthetic_table(checkpoints: Sequence[int], coeffs: Sequence[float]) -> SumTable:
    """Table whose totals are exactly sum_j coeffs[j] * x / log(x)^(j+1)."""
    rows = []
    for x in checkpoints:
        L = math.log(x)
        total = sum(c * x / L ** (j + 1) for j, c in enumerate(coeffs))
        rows.append(
            CheckpointSums(
                x=int(x),
                total=total,
                classes=np.zeros(Defaults.CLASS_CAP),
                class_tail=0.0,
                nonsquarefree=0.0,
                prime_count=0,
            )
        )
    return SumTable(rows=rows, meta={"source": "synthetic"})
