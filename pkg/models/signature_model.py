from typing import NamedTuple


class FactorSignature(NamedTuple):
    """
    The four prime-divisor symbols of an integer n >= 2.

    Attributes:
        spf: smallest prime factor p(n)
        lpf: largest prime factor P(n)
        omega: number of distinct prime factors
        squarefree: True iff mu(n) != 0
    """

    spf: int
    lpf: int
    omega: int
    squarefree: bool

    @property
    def is_prime_power(self) -> bool:
        return self.spf == self.lpf

    @property
    def is_prime(self) -> bool:
        return self.omega == 1 and self.squarefree
