import math

import numpy as np
import pytest
import sympy

from services.errors import DomainError
from services.factor_sieve import base_primes, map_segments, segment_bounds, sieve_segment
from services.oracle import factor_signature_naive


def _sieve_range(lo: int, hi: int):
    return sieve_segment(lo, hi, base_primes(int(np.sqrt(hi)) + 1))


class TestBasePrimes:
    def test_small(self):
        np.testing.assert_array_equal(base_primes(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])

    def test_below_two_is_empty(self):
        assert len(base_primes(1)) == 0

    def test_count_matches_primepi(self):
        assert len(base_primes(10**5)) == sympy.primepi(10**5)


class TestSieveSegment:
    def test_first_integers(self):
        segment = sieve_segment(2, 11, base_primes(3))
        expected = {
            2: (2, 2, 1, True),
            4: (2, 2, 1, False),
            6: (2, 3, 2, True),
            8: (2, 2, 1, False),
            9: (3, 3, 1, False),
            10: (2, 5, 2, True),
        }
        for n, signature in expected.items():
            assert tuple(segment.signature(n)) == signature

    def test_matches_trial_division(self):
        segment = _sieve_range(2, 20_001)
        for n, signature in segment.signatures():
            assert signature == factor_signature_naive(n), n

    def test_offset_window_matches_factorint(self):
        lo = 10**12
        segment = sieve_segment(lo, lo + 500, base_primes(10**6 + 1))
        for n in range(lo, lo + 500, 7):
            factors = sympy.factorint(n)
            sig = segment.signature(n)
            assert sig.spf == min(factors)
            assert sig.lpf == max(factors)
            assert sig.omega == len(factors)
            assert sig.squarefree == all(e == 1 for e in factors.values())

    def test_segments_agree_with_one_pass(self):
        whole = _sieve_range(2, 5_001)
        primes = base_primes(71)
        for lo, hi in segment_bounds(2, 5_001, 337):
            part = sieve_segment(lo, hi, primes)
            np.testing.assert_array_equal(part.lpf, whole.lpf[lo - 2 : hi - 2])
            np.testing.assert_array_equal(part.spf, whole.spf[lo - 2 : hi - 2])
            np.testing.assert_array_equal(part.omega, whole.omega[lo - 2 : hi - 2])
            np.testing.assert_array_equal(part.squarefree, whole.squarefree[lo - 2 : hi - 2])

    def test_arrays_are_read_only(self):
        segment = sieve_segment(2, 50, base_primes(7))
        with pytest.raises(ValueError):
            segment.lpf[0] = 99

    def test_missing_base_primes(self):
        with pytest.raises(DomainError):
            sieve_segment(2, 1000, base_primes(7))

    def test_base_primes_with_a_gap(self):
        with pytest.raises(DomainError):
            sieve_segment(2, 150, np.array([2, 3, 11, 13]))

    def test_across_the_int32_boundary(self):
        lo = 2**31 - 40
        segment = sieve_segment(lo, lo + 80, base_primes(46_341))
        assert segment.spf.dtype == np.int64
        for n, signature in segment.signatures():
            assert signature == factor_signature_naive(n), n

    def test_small_segments_use_int32(self):
        segment = sieve_segment(2, 1000, base_primes(31))
        assert segment.spf.dtype == np.int32
        assert segment.lpf.dtype == np.int32

    def test_invalid_bounds(self):
        with pytest.raises(DomainError):
            sieve_segment(1, 10, base_primes(3))
        with pytest.raises(DomainError):
            sieve_segment(10, 10, base_primes(3))

    def test_signature_outside_segment(self):
        segment = sieve_segment(2, 20, base_primes(4))
        with pytest.raises(DomainError):
            segment.signature(20)


def _lpf_sum(segment, payload):
    return int(segment.lpf.sum())


class TestMapSegments:
    def test_bounds(self):
        assert segment_bounds(2, 12, 4) == [(2, 6), (6, 10), (10, 12)]

    def test_bounds_reject_empty_segments(self):
        with pytest.raises(DomainError):
            segment_bounds(2, 12, 0)

    def test_results_in_order_for_any_worker_count(self):
        bounds = segment_bounds(2, 30_001, 4_000)
        payloads = [None] * len(bounds)
        serial = list(map_segments(2, 30_001, 4_000, 1, _lpf_sum, payloads))
        parallel = list(map_segments(2, 30_001, 4_000, 3, _lpf_sum, payloads))
        assert serial == parallel
        assert [(a, b) for a, b, _ in serial] == bounds

    def test_payload_count_must_match(self):
        with pytest.raises(DomainError):
            list(map_segments(2, 100, 10, 1, _lpf_sum, [None]))


@pytest.mark.slow
def test_oracle_equivalence_to_one_million():
    primes = base_primes(1001)
    for lo, hi in segment_bounds(2, 10**6 + 1, 2**16):
        segment = sieve_segment(lo, hi, primes)
        for n, signature in segment.signatures():
            assert signature == factor_signature_naive(n), n


class TestMultiplicativity:
    def test_coprime_products(self):
        segment = _sieve_range(2, 60_001)
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 300:
            m, n = (int(v) for v in rng.integers(2, 245, size=2))
            if math.gcd(m, n) != 1:
                continue
            a, b, ab = segment.signature(m), segment.signature(n), segment.signature(m * n)
            assert ab.omega == a.omega + b.omega
            assert ab.squarefree == (a.squarefree and b.squarefree)
            assert ab.spf == min(a.spf, b.spf)
            assert ab.lpf == max(a.lpf, b.lpf)
            checked += 1
