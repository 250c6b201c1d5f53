"""
Compensated summation for long accumulations.

``NeumaierSum`` keeps a running sum plus a correction term, so adding up to
10^10 values in [0, 1] keeps the full double precision of the result. Started
from a numpy array it works element-wise, which lets the accumulator carry a
whole vector of class sums in one object.
"""

import math
from typing import Iterable, Union

import numpy as np

Number = Union[float, np.ndarray]


class NeumaierSum:
    """
    Running Neumaier (improved Kahan) sum.

    Example:
        >>> acc = NeumaierSum()
        >>> for value in (1.0, 1e100, 1.0, -1e100):
        ...     acc += value
        >>> acc.value
        2.0
    """

    def __init__(self, initial: Number = 0.0):
        if isinstance(initial, np.ndarray):
            self.sum = initial.astype(np.float64)
            self.compensation = np.zeros_like(self.sum)
        else:
            self.sum = float(initial)
            self.compensation = 0.0

    def add(self, value: Number) -> "NeumaierSum":
        if isinstance(self.sum, np.ndarray):
            value = np.asarray(value, dtype=np.float64)
            total = self.sum + value
            self.compensation = self.compensation + np.where(
                np.abs(self.sum) >= np.abs(value),
                (self.sum - total) + value,
                (value - total) + self.sum,
            )
        else:
            value = float(value)
            total = self.sum + value
            if abs(self.sum) >= abs(value):
                self.compensation += (self.sum - total) + value
            else:
                self.compensation += (value - total) + self.sum
        self.sum = total
        return self

    def __iadd__(self, value: Number) -> "NeumaierSum":
        return self.add(value)

    def copy(self) -> "NeumaierSum":
        clone = NeumaierSum.__new__(NeumaierSum)
        if isinstance(self.sum, np.ndarray):
            clone.sum = self.sum.copy()
            clone.compensation = self.compensation.copy()
        else:
            clone.sum = self.sum
            clone.compensation = self.compensation
        return clone

    @property
    def value(self) -> Number:
        return self.sum + self.compensation

    def __repr__(self) -> str:
        return f"NeumaierSum({self.value})"


def compensated_sum(values: Iterable[float]) -> float:
    """Neumaier sum of a stream of floats."""
    acc = NeumaierSum()
    for value in values:
        acc.add(value)
    return acc.value


def exact_sum(values: np.ndarray) -> float:
    """Correctly rounded sum of an array (Shewchuk partials via ``math.fsum``)."""
    if len(values) == 0:
        return 0.0
    return math.fsum(np.asarray(values, dtype=np.float64).tolist())
