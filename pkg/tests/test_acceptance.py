"""
Desk-scale runs up to 10^9. Deselected by default; run with ``pytest -m slow``.
"""

import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from models.sum_model import WeightSpec
from services.accumulator import accumulate
from services.asymptotic import (
    decomposition_scaled,
    estimator_sequence,
    evaluate_bands,
    sigma2_predictions,
    sigma2_subsums,
    sigma3_predictions,
    sigma3_subsums,
)
from services.smoothness import lemma3_table, tail_class_table

pytestmark = pytest.mark.slow

ONE = WeightSpec.constant(1.0)
TOP = [10**6, 10**7, 10**8, 10**9]
THREADS = max(1, min(4, os.cpu_count() or 1))


def _strictly_decreasing(values):
    return all(b < a for a, b in zip(values, values[1:]))


@pytest.fixture(scope="module")
def classic_table():
    return accumulate(10**9, TOP, ONE, 1.0, threads=THREADS)


@pytest.fixture(scope="module")
def squared_table():
    return accumulate(10**9, TOP, ONE, 2.0, threads=THREADS)


class TestExpansion:
    def test_classic_estimators(self, classic_table):
        rows = estimator_sequence(classic_table, ONE, 1.0)
        c1 = [row.c1hat for row in rows]
        c2 = [row.c2hat for row in rows]
        c3 = [row.c3hat for row in rows]
        assert _strictly_decreasing(c1) and 1.0 <= c1[-1] <= 1.3
        assert _strictly_decreasing(c2) and 3.0 <= c2[-1] <= 4.6
        assert _strictly_decreasing(c3) and 15.0 < c3[-1] <= 30.0

    @pytest.mark.xfail(
        reason="the x/log^4 x term still dominates at 1e9: c2hat ends near 4.30, c3hat near 26.9",
        strict=False,
    )
    def test_classic_estimators_in_tight_bands(self, classic_table):
        rows = estimator_sequence(classic_table, ONE, 1.0)
        assert rows[-1].c2hat <= 4.2
        assert rows[-1].c3hat <= 23.0

    def test_squared_estimators(self, squared_table):
        rows = estimator_sequence(squared_table, ONE, 2.0)
        assert 2.0 <= rows[-1].c2hat <= 3.2
        assert 5.5 <= rows[-1].c3hat <= 11.0

    def test_band_summary(self, classic_table):
        summary = evaluate_bands(
            estimator_sequence(classic_table, ONE, 1.0),
            ONE,
            1.0,
            decomposition=decomposition_scaled(classic_table, 1.0),
        )
        assert summary.passed, [check.detail for check in summary.failures]

    def test_two_and_three_prime_classes(self, classic_table):
        rows = decomposition_scaled(classic_table, 1.0)
        sigma2 = [row["sigma2_scaled"] for row in rows]
        assert 2.0 <= sigma2[-1] <= 2.7 and _strictly_decreasing(sigma2)
        assert 6.0 <= rows[-1]["sigma3_scaled"] <= 14.0

    @pytest.mark.xfail(
        reason="|sigma3_scaled - 9| grows from 0.08 at 1e6 to 1.05 at 1e9", strict=False
    )
    def test_three_prime_class_approaches_nine(self, classic_table):
        gaps = [abs(row["sigma3_scaled"] - 9.0) for row in decomposition_scaled(classic_table, 1.0)]
        assert _strictly_decreasing(gaps)

    def test_nonsquarefree_remainder(self, classic_table):
        scaled = [row["nonsquarefree_scaled"] for row in tail_class_table(classic_table)]
        assert _strictly_decreasing(scaled)


class TestTails:
    def test_small_classes(self):
        table = accumulate(10**8, [10**6, 10**7, 10**8], ONE, 1.0, threads=THREADS)
        rows = tail_class_table(table)
        assert rows[-1]["sigma4_scaled"] < 10
        assert rows[-1]["sigma_ge6_scaled"] < 10
        for key in ("sigma4_scaled", "sigma_ge6_scaled"):
            values = [row[key] for row in rows]
            assert all(b <= a for a, b in zip(values, values[1:])), key


class TestSubsums:
    def test_splits_at_ten_million(self):
        x = 10**7
        row = accumulate(x, None, ONE, 1.0, threads=THREADS).at(x)
        assert sigma2_subsums(x, 1.0).total == pytest.approx(row.sigma(2), rel=0.05)
        assert sigma3_subsums(x, 1.0).total == pytest.approx(row.sigma(3), rel=0.10)

    def test_constants_in_rational_arithmetic(self):
        leading, _ = sigma2_predictions(1.0)
        assert sum(leading) == 2
        assert sum(sigma3_predictions(1.0)) == Fraction(9)


class TestSmoothDensity:
    def test_decreasing_at_threshold(self):
        rows = lemma3_table([10**4, 10**5, 10**6, 10**7, 10**8], threads=THREADS)
        assert _strictly_decreasing([row["psi_density"] for row in rows])


class TestDeterminism:
    def test_segment_sizes_and_threads(self):
        totals = []
        for size in (2**16, 2**20, 2**22):
            for threads in (1, 4):
                table = accumulate(10**8, [10**7, 10**8], ONE, 1.0, size, threads)
                totals.append(table.totals)
        for other in totals[1:]:
            np.testing.assert_allclose(other, totals[0], rtol=1e-12)
        assert math.isfinite(totals[0][-1])


class TestThroughput:
    def test_one_core_rate(self):
        x = 2 * 10**7
        start = time.perf_counter()
        accumulate(x, None, ONE, 1.0, segment_size=2**20, threads=1)
        rate = (x - 1) / (time.perf_counter() - start)
        assert rate >= 1e7, f"{rate:.3g} integers/s"
