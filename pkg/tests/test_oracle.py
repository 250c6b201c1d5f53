import pytest
import sympy

from config import config
from models.sum_model import WeightSpec
from services.errors import DomainError
from services.oracle import brute_sum, factor_signature_naive, naive_signatures


class TestFactorSignatureNaive:
    @pytest.mark.parametrize(
        "n, expected",
        [
            (2, (2, 2, 1, True)),
            (12, (2, 3, 2, False)),
            (30, (2, 5, 3, True)),
            (97, (97, 97, 1, True)),
            (2 * 3 * 3 * 101, (2, 101, 3, False)),
        ],
    )
    def test_known_values(self, n, expected):
        assert tuple(factor_signature_naive(n)) == expected

    def test_against_factorint(self):
        for n in range(2, 3000):
            factors = sympy.factorint(n)
            assert factor_signature_naive(n) == (
                min(factors),
                max(factors),
                len(factors),
                all(e == 1 for e in factors.values()),
            )

    def test_rejects_one(self):
        with pytest.raises(DomainError):
            factor_signature_naive(1)

    def test_prime_properties(self):
        assert factor_signature_naive(13).is_prime
        assert factor_signature_naive(27).is_prime_power
        assert not factor_signature_naive(27).is_prime


class TestBruteSum:
    def test_classic_sum_to_ten(self):
        assert brute_sum(10, WeightSpec.constant(1.0), 1.0) == pytest.approx(136 / 15, abs=1e-12)

    def test_squared_ratio_to_ten(self):
        expected = 8 + 4 / 9 + 4 / 25
        assert brute_sum(10, WeightSpec.constant(1.0), 2.0) == pytest.approx(expected, abs=1e-12)

    def test_two_prime_indicator_to_ten(self):
        assert brute_sum(10, WeightSpec.indicator(2), 1.0) == pytest.approx(16 / 15, abs=1e-12)

    def test_reuses_signatures(self):
        signatures = naive_signatures(100)
        weight = WeightSpec.constant(1.0)
        assert brute_sum(10, weight, 1.0, signatures) == brute_sum(10, weight, 1.0)

    def test_short_signature_list(self):
        with pytest.raises(DomainError):
            brute_sum(100, WeightSpec.constant(1.0), 1.0, naive_signatures(50))

    def test_rejects_bad_alpha(self):
        with pytest.raises(DomainError):
            brute_sum(10, WeightSpec.constant(1.0), 0.0)

    def test_limit(self):
        with pytest.raises(DomainError, match="oracle is capped"):
            brute_sum(config.ORACLE_LIMIT + 1, WeightSpec.constant(1.0), 1.0)

    @pytest.mark.parametrize("x", [0, 1])
    def test_rejects_small_x_with_signatures(self, x):
        with pytest.raises(DomainError):
            brute_sum(x, WeightSpec.constant(1.0), 1.0, naive_signatures(100))
