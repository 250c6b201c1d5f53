"""
Predicted three-term expansions and their empirical checks.

Covers the coefficient formulas for S_{lambda,alpha} and S_f, the logarithmic
integral, the prime-sum versus integral comparison, the exact sub-sums of the
two- and three-prime classes, least-squares fits and peel-off estimators.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from constants import Bands, Defaults, Messages
from models.asymptotic_model import (
    AsymptoticCoeffs,
    BandCheck,
    EstimatorRow,
    FitResult,
    PrimeIntegral,
    Sigma2Subsums,
    Sigma3Subsums,
    VerificationSummary,
)
from models.sum_model import PowerSeries, RatioExponent, SumTable, WeightSpec
from services.errors import DomainError, NumericalError
from services.factor_sieve import base_primes
from utils.summation import compensated_sum, exact_sum

logger = logging.getLogger(__name__)

LEMMA2_LOG_POWER = 4


# ---------- quadrature ----------


def _integrate(func: Callable, a: float, b: float, what: str, **kwargs) -> float:
    """scipy quad with a hard failure instead of an IntegrationWarning."""
    kwargs.setdefault("epsabs", Defaults.QUAD_EPSABS)
    kwargs.setdefault("epsrel", Defaults.QUAD_EPSREL)
    kwargs.setdefault("limit", Defaults.QUAD_LIMIT)
    result = integrate.quad(func, a, b, full_output=1, **kwargs)
    if len(result) > 3:
        value, abserr, info, message = result[:4]
        raise NumericalError(
            f"quadrature of {what} on [{a}, {b}] did not converge: {message}",
            details={"value": value, "abserr": abserr, "evaluations": info.get("neval")},
        )
    return result[0]


# ---------- coefficient formulas ----------


def _alpha(alpha) -> RatioExponent:
    return alpha if isinstance(alpha, RatioExponent) else RatioExponent(alpha)


def theorem1_coeffs_exact(weight: WeightSpec, alpha) -> Tuple[Fraction, Fraction, Fraction]:
    """The three coefficients in rational arithmetic."""
    a = _alpha(alpha).exact
    l1, l2, l3 = (Fraction(weight(i)) for i in (1, 2, 3))
    return (
        l1,
        2 / a * l2 + l1,
        9 / a**2 * l3 + 4 / a * l2 + 2 * l1,
    )


def theorem1_coeffs(weight: WeightSpec, alpha) -> AsymptoticCoeffs:
    """
    Coefficients of x/log x, x/log^2 x, x/log^3 x in S_{lambda,alpha}(x).

    Args:
        weight: lambda
        alpha: Ratio exponent (> 0; a warning is logged when alpha <= 4/5)

    Returns:
        AsymptoticCoeffs(lambda(1), 2/alpha lambda(2) + lambda(1),
        9/alpha^2 lambda(3) + 4/alpha lambda(2) + 2 lambda(1))
    """
    alpha = _alpha(alpha)
    if not alpha.in_theorem_range:
        logger.warning(Messages.ALPHA_OUTSIDE_THEOREM.format(alpha=alpha.alpha))
    return AsymptoticCoeffs(*(float(c) for c in theorem1_coeffs_exact(weight, alpha)))


def theorem1_predict(x: float, weight: WeightSpec, alpha) -> float:
    """Three-term prediction of S_{lambda,alpha}(x)."""
    if x < Defaults.PREDICT_MIN_X:
        raise DomainError(f"predictions need x >= {Defaults.PREDICT_MIN_X}, got {x}")
    return theorem1_coeffs(weight, alpha).predict(x)


def theorem2_coeffs_series(series: PowerSeries) -> AsymptoticCoeffs:
    """Coefficients of S_f from the series identity S_f = sum a_i S_i."""
    c1 = compensated_sum(series.coeffs)
    c2 = compensated_sum(a * (2 / i + 1) for i, a in enumerate(series.coeffs, start=1))
    c3 = compensated_sum(
        a * (9 / i**2 + 4 / i + 2) for i, a in enumerate(series.coeffs, start=1)
    )
    return AsymptoticCoeffs(c1, c2, c3)


def theorem2_integrals(f: Union[PowerSeries, Callable[[float], float]]) -> Tuple[float, float, float]:
    """
    f(1), A = int_0^1 f(t)/t dt and B = int_0^1 int_0^s f(t)/(s t) dt ds.

    B is evaluated with the order of integration swapped, as
    int_0^1 (f(t)/t) (-log t) dt. For a PowerSeries, f(t)/t is a polynomial and
    the log singularity is handled by QUADPACK's algebraic-logarithmic weight;
    a black-box f is integrated on [epsilon, 1].
    """
    if isinstance(f, PowerSeries):
        g = f.over_t
        A = _integrate(g, 0.0, 1.0, "f(t)/t")
        B = -_integrate(g, 0.0, 1.0, "f(t)/t log t", weight="alg-loga", wvar=(0.0, 0.0))
        return float(f(1.0)), A, B

    eps = Defaults.BLACKBOX_EPSILON
    A = _integrate(lambda t: f(t) / t, eps, 1.0, "f(t)/t")
    B = _integrate(lambda t: -f(t) / t * math.log(t), eps, 1.0, "f(t)/t log t")
    return float(f(1.0)), A, B


def theorem2_coeffs_quadrature(f: Union[PowerSeries, Callable[[float], float]]) -> AsymptoticCoeffs:
    """
    Coefficients of S_f(x) from the integral formulas.

    Raises:
        NumericalError: If a quadrature does not converge
    """
    f1, A, B = theorem2_integrals(f)
    return AsymptoticCoeffs(f1, 2 * A + f1, 9 * B + 4 * A + 2 * f1)


# ---------- prime counting and prime sums ----------


def li(x: float) -> float:
    """
    Offset logarithmic integral int_2^x dt/log t.

    Integrated in u = log t, where the integrand e^u/u is smooth.
    """
    if x < 2:
        raise DomainError(f"li needs x >= 2, got {x}")
    if x == 2:
        return 0.0
    return _integrate(lambda u: math.exp(u) / u, math.log(2.0), math.log(x), "dt/log t")


def prime_power_sum(
    y: float, x: float, alpha_exp: float, primes: Optional[np.ndarray] = None
) -> float:
    """
    Sum of p^alpha_exp over primes y < p <= x.

    Args:
        y: Lower limit (exclusive, > 3/2)
        x: Upper limit (inclusive)
        alpha_exp: Exponent of p
        primes: Ascending primes covering (y, x]; sieved up to x when None
    """
    _check_lemma2_range(y, x)
    if primes is None:
        primes = base_primes(math.floor(x))
    primes = np.asarray(primes, dtype=np.int64)
    selected = primes[(primes > y) & (primes <= x)].astype(np.float64)
    return compensated_sum(np.power(selected, alpha_exp).tolist())


def prime_power_integral(y: float, x: float, alpha_exp: float) -> PrimeIntegral:
    """
    int_y^x t^alpha_exp / log t dt, tagged with the error-term branch.

    The error scale is x^(c+1)/log^4 x when c > -1 and y^(c+1)/log^4 y when
    c < -1; it is reported, not enforced.
    """
    _check_lemma2_range(y, x)
    c = float(alpha_exp)
    value = _integrate(
        lambda u: math.exp((c + 1.0) * u) / u, math.log(y), math.log(x), "t^c/log t"
    )
    if c > -1:
        branch, scale = "c>-1", x ** (c + 1) / math.log(x) ** LEMMA2_LOG_POWER
    elif c < -1:
        branch, scale = "c<-1", y ** (c + 1) / math.log(y) ** LEMMA2_LOG_POWER
    else:
        branch, scale = "c=-1", 1.0 / math.log(y) ** LEMMA2_LOG_POWER
    return PrimeIntegral(value=value, branch=branch, error_scale=scale)


def _check_lemma2_range(y: float, x: float) -> None:
    if not y > Defaults.LEMMA2_MIN_Y:
        raise DomainError(f"prime sums need y > 3/2, got y={y}")
    if x < y:
        raise DomainError(f"prime sums need y <= x, got y={y}, x={x}")


def lemma1_table(table: SumTable) -> List[Dict[str, float]]:
    """pi(x) against li(x) at each checkpoint, gap scaled by x/log^4 x."""
    rows = []
    for row in table.rows:
        approx = li(row.x)
        L = math.log(row.x)
        gap = abs(row.prime_count - approx)
        rows.append(
            {
                "x": row.x,
                "pi": row.prime_count,
                "li": approx,
                "gap": gap,
                "gap_scaled": gap / (row.x / L**4),
            }
        )
    return rows


def lemma2_table(y: float, xs: Sequence[float], alpha_exp: float) -> List[Dict[str, float]]:
    """
    Prime sum against its integral for each upper limit x > y, from one prime sieve.

    Upper limits x <= y give an empty range and are skipped.

    Raises:
        DomainError: If no upper limit exceeds y
    """
    above = [x for x in xs if x > y]
    if not above:
        raise DomainError(f"prime sums need an upper limit above y={y}, got {list(xs)}")
    if len(above) < len(xs):
        logger.info(f"Skipping upper limits <= y={y}: {[x for x in xs if x <= y]}")

    primes = base_primes(math.floor(max(above)))
    rows = []
    for x in above:
        exact = prime_power_sum(y, x, alpha_exp, primes)
        integral = prime_power_integral(y, x, alpha_exp)
        gap = exact - integral.value
        rows.append(
            {
                "x": x,
                "y": y,
                "exponent": alpha_exp,
                "prime_sum": exact,
                "integral": integral.value,
                "rel_gap": gap / integral.value,
                "gap_scaled": abs(gap) / integral.error_scale,
                "branch": integral.branch,
            }
        )
    return rows


# ---------- sub-sums of the two- and three-prime classes ----------


def _icbrt(x: int) -> int:
    c = round(x ** (1.0 / 3.0))
    while c**3 > x:
        c -= 1
    while (c + 1) ** 3 <= x:
        c += 1
    return c


def _split_upper(base: float, x: int, alpha: float) -> float:
    return base * math.log(x) ** (Defaults.SPLIT_LOG_POWER / alpha)


def _prefix(values: np.ndarray) -> np.ndarray:
    """prefix[k] = sum of the first k values."""
    return np.concatenate(([0.0], np.cumsum(values)))


def sigma2_predictions(alpha) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
    """Leading (x/log^2 x) and second (x/log^3 x) coefficients of I1 and I2."""
    a = _alpha(alpha).exact
    leading = (2 / (a + 1), 2 / (a * (a + 1)))
    second = ((4 * a + 8) / (a + 1) ** 2, 4 / (a * (a + 1) ** 2))
    return leading, second


def sigma3_predictions(alpha) -> Tuple[Fraction, Fraction, Fraction]:
    """Leading (x/log^3 x) coefficients of I3, I4 and I5."""
    a = _alpha(alpha).exact
    return (
        9 / ((a + 1) * (a + 2)),
        18 / (a * (a + 1) * (a + 2)),
        9 / (a**2 * (a + 1)),
    )


def sigma2_subsums(x: int, alpha, primes: Optional[np.ndarray] = None) -> Sigma2Subsums:
    """
    Exact I1 and I2: the two-prime class split at sqrt(x) and sqrt(x) log^(4/alpha) x.

    I1 sums p2^-alpha * sum_{p1 < p2} p1^alpha over p2 <= sqrt(x); I2 sums
    p2^-alpha * sum_{p1 <= x/p2} p1^alpha over sqrt(x) < p2 <= sqrt(x) log^(4/alpha) x.
    """
    x = int(x)
    if x < Defaults.SIGMA2_MIN_X:
        raise DomainError(f"two-prime sub-sums need x >= {Defaults.SIGMA2_MIN_X}, got {x}")
    alpha = _alpha(alpha)
    a = alpha.alpha

    root = math.isqrt(x)
    upper = _split_upper(math.sqrt(x), x, a)
    last = min(math.floor(upper), x // 2)
    if primes is None:
        primes = base_primes(max(last, root))

    powers = primes.astype(np.float64) ** a
    prefix = _prefix(powers)

    m = int(np.searchsorted(primes, root, side="right"))
    I1 = exact_sum(prefix[:m] / powers[:m])

    hi = int(np.searchsorted(primes, last, side="right"))
    outer = primes[m:hi]
    inner = prefix[np.searchsorted(primes, x // outer, side="right")]
    I2 = exact_sum(inner / powers[m:hi])

    leading, second = sigma2_predictions(alpha)
    return Sigma2Subsums(
        x=x,
        alpha=a,
        I1=I1,
        I2=I2,
        splits=(math.sqrt(x), upper),
        predicted_leading=leading,
        predicted_second=second,
    )


def sigma3_subsums(x: int, alpha, primes: Optional[np.ndarray] = None) -> Sigma3Subsums:
    """
    Exact I3, I4 and I5: the three-prime class (p1 < p2 < p3, p1 p2 p3 <= x)
    split at x^(1/3) and x^(1/3) log^(4/alpha) x.
    """
    x = int(x)
    if x < Defaults.SIGMA3_MIN_X:
        raise DomainError(f"three-prime sub-sums need x >= {Defaults.SIGMA3_MIN_X}, got {x}")
    alpha = _alpha(alpha)
    a = alpha.alpha

    cube = _icbrt(x)
    upper = _split_upper(x ** (1.0 / 3.0), x, a)
    last = min(math.floor(upper), x // 6)
    if primes is None:
        primes = base_primes(max(last, cube))

    powers = primes.astype(np.float64) ** a
    prefix = _prefix(powers)
    # pairs[k] = sum over p2 among the first k primes of sum_{p1 < p2} p1^alpha
    pairs = _prefix(prefix[:-1])

    m = int(np.searchsorted(primes, cube, side="right"))
    I3 = exact_sum(pairs[:m] / powers[:m])

    hi = int(np.searchsorted(primes, last, side="right"))
    outer = primes[m:hi]
    below = np.searchsorted(primes, np.array([math.isqrt(int(q)) for q in x // outer]), side="right")
    I4 = exact_sum(pairs[below] / powers[m:hi])

    per_p3 = []
    for k, p3 in enumerate(outer.tolist()):
        start = int(below[k])
        stop = min(m + k, int(np.searchsorted(primes, x // (2 * p3), side="right")))
        if stop <= start:
            continue
        p2 = primes[start:stop]
        inner = prefix[np.searchsorted(primes, x // (p2 * p3), side="right")]
        per_p3.append(exact_sum(inner) / powers[m + k])
    I5 = exact_sum(np.array(per_p3))

    return Sigma3Subsums(
        x=x,
        alpha=a,
        I3=I3,
        I4=I4,
        I5=I5,
        splits=(x ** (1.0 / 3.0), upper),
        predicted_leading=sigma3_predictions(alpha),
    )


# ---------- fits and estimators ----------


def fit_coefficients(table: SumTable, weight: WeightSpec, alpha, k: int = Defaults.FIT_ORDER) -> FitResult:
    """
    Least-squares fit of the totals in the basis x/log^j x, j = 1..k.

    Each row is scaled by log x / x, so the fit minimises residuals of
    S log x / x = sum_j c_j log^(1-j) x.

    Raises:
        DomainError: If fewer than k checkpoints have x >= 10^3
        NumericalError: If the design matrix is rank deficient
    """
    rows = [row for row in table.rows if row.x >= Defaults.FIT_MIN_X]
    if k < 1:
        raise DomainError(f"fit order must be >= 1, got {k}")
    if len(rows) < k:
        raise DomainError(
            f"a fit of order {k} needs at least {k} checkpoints >= {Defaults.FIT_MIN_X}, got {len(rows)}"
        )

    xs = np.array([row.x for row in rows], dtype=np.float64)
    L = np.log(xs)
    scaled = np.array([row.total for row in rows]) * L / xs
    design = np.column_stack([L ** (1 - j) for j in range(1, k + 1)])

    if np.linalg.matrix_rank(design) < k:
        raise NumericalError(
            f"design matrix of order {k} is rank deficient",
            details={"checkpoints": [row.x for row in rows]},
        )

    fitted, _, _, _ = np.linalg.lstsq(design, scaled, rcond=None)
    residuals = scaled - design @ fitted
    logger.debug(f"Fit of order {k} for lambda={weight}, alpha={_alpha(alpha).alpha}: {fitted}")
    return FitResult(
        fitted=tuple(float(c) for c in fitted),
        residual_norm=float(np.linalg.norm(residuals)),
        scaled_residuals=tuple(float(r) for r in residuals),
        checkpoints=tuple(row.x for row in rows),
    )


def estimator_sequence(
    table: SumTable, weight: WeightSpec, alpha, coeffs: Optional[AsymptoticCoeffs] = None
) -> List[EstimatorRow]:
    """
    Peel-off estimators per checkpoint, using the predicted lower-order coefficients:
    c1hat = S L/x, c2hat = (S - c1 x/L) L^2/x, c3hat = (S - c1 x/L - c2 x/L^2) L^3/x.

    ``coeffs`` replaces the predicted coefficients (synthetic tables).
    """
    if coeffs is None:
        coeffs = theorem1_coeffs(weight, alpha)
    out = []
    for row in table.rows:
        if row.x < Defaults.ESTIMATOR_MIN_X:
            raise DomainError(f"estimators need checkpoints >= {Defaults.ESTIMATOR_MIN_X}, got {row.x}")
        x = float(row.x)
        L = math.log(x)
        c1hat = row.total * L / x
        c2hat = (c1hat - coeffs.c1) * L
        c3hat = (c2hat - coeffs.c2) * L
        out.append(EstimatorRow(x=row.x, c1hat=c1hat, c2hat=c2hat, c3hat=c3hat))
    return out


def decomposition_scaled(table: SumTable, alpha) -> List[Dict[str, float]]:
    """Sigma^(2) log^2 x/x and Sigma^(3) log^3 x/x next to their limits 2/alpha and 9/alpha^2."""
    a = _alpha(alpha).alpha
    rows = []
    for row in table.rows:
        L = math.log(row.x)
        rows.append(
            {
                "x": row.x,
                "sigma2_scaled": row.sigma(2) * L**2 / row.x,
                "sigma2_limit": 2 / a,
                "sigma3_scaled": row.sigma(3) * L**3 / row.x,
                "sigma3_limit": 9 / a**2,
            }
        )
    return rows


# ---------- acceptance bands ----------


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _band(name: str, value: float, low: float, high: float, enforced: bool = True) -> BandCheck:
    passed = low <= value <= high
    detail = "" if passed else Messages.BAND_FAILED.format(name=name, value=value, low=low, high=high)
    return BandCheck(
        name=name, value=value, low=low, high=high, passed=passed, detail=detail, enforced=enforced
    )


def _trend(name: str, values: Sequence[float], enforced: bool = True) -> BandCheck:
    passed = _strictly_decreasing(values)
    detail = "" if passed else Messages.BAND_NOT_DECREASING.format(name=name)
    return BandCheck(
        name=f"{name}_decreasing",
        value=float(values[-1]),
        low=None,
        high=None,
        passed=passed,
        detail=detail,
        enforced=enforced,
    )


def estimator_bands(weight: WeightSpec, alpha) -> Dict[str, Tuple[float, float, bool]]:
    """Bands for c1hat..c3hat at the last checkpoint."""
    a = _alpha(alpha).alpha
    if weight.is_constant_one and a in Bands.LAMBDA_ONE:
        return Bands.LAMBDA_ONE[a]
    coeffs = theorem1_coeffs(weight, alpha).as_tuple()
    bands = {}
    for name, c in zip(("c1hat", "c2hat", "c3hat"), coeffs):
        rel, absolute = Bands.GENERIC[name]
        width = rel * abs(c) + absolute
        bands[name] = (c - width, c + width, False)
    return bands


def fit_bands(weight: WeightSpec, alpha, order: int) -> Tuple[Tuple[float, float], ...]:
    """Bands for the first three fitted coefficients of a fit with ``order`` basis terms."""
    a = _alpha(alpha).alpha
    if weight.is_constant_one and order == Defaults.FIT_ORDER and a in Bands.FIT_LAMBDA_ONE:
        return Bands.FIT_LAMBDA_ONE[a]
    coeffs = theorem1_coeffs(weight, alpha).as_tuple()
    out = []
    for name, c in zip(("c1hat", "c2hat", "c3hat"), coeffs):
        rel, absolute = Bands.GENERIC[name]
        width = rel * abs(c) + absolute
        out.append((c - width, c + width))
    return tuple(out)


def evaluate_bands(
    estimators: List[EstimatorRow],
    weight: WeightSpec,
    alpha,
    fit: Optional[FitResult] = None,
    decomposition: Optional[List[Dict[str, float]]] = None,
) -> VerificationSummary:
    """Check the estimators (and optionally the fit and class trends) against their bands."""
    summary = VerificationSummary(meta={"lambda": str(weight), "alpha": f"{_alpha(alpha).alpha:g}"})
    if not estimators:
        raise DomainError("no checkpoints to verify")

    for name, (low, high, must_decrease) in estimator_bands(weight, alpha).items():
        values = [getattr(row, name) for row in estimators]
        summary.checks.append(_band(name, values[-1], low, high))
        if must_decrease and len(values) > 1:
            summary.checks.append(_trend(name, values))

    if fit is not None:
        for j, (low, high) in enumerate(fit_bands(weight, alpha, fit.order)):
            if j < fit.order:
                summary.checks.append(
                    _band(f"fit_c{j + 1}", fit.fitted[j], low, high, enforced=False)
                )

    if decomposition and _alpha(alpha).alpha == 1.0:
        sigma2 = [row["sigma2_scaled"] for row in decomposition]
        gaps = [abs(row["sigma3_scaled"] - row["sigma3_limit"]) for row in decomposition]
        summary.checks.append(_band("sigma2_scaled", sigma2[-1], 2.0, 2.7))
        summary.checks.append(_band("sigma3_scaled", decomposition[-1]["sigma3_scaled"], 6.0, 14.0))
        if len(decomposition) > 1:
            summary.checks.append(_trend("sigma2_scaled", sigma2))
            summary.checks.append(_trend("sigma3_gap", gaps, enforced=False))

    for check in summary.checks:
        if not check.passed:
            level = logging.WARNING if check.enforced else logging.INFO
            logger.log(level, f"Band check failed: {check.detail}")
    return summary


def synthetic_checks(
    estimators: List[EstimatorRow],
    coeffs: AsymptoticCoeffs,
    fit: Optional[FitResult] = None,
    tolerance: float = Defaults.SYNTHETIC_TOLERANCE,
) -> VerificationSummary:
    """
    Checks for a synthetic table built from ``coeffs``: every c3hat and the
    first three fitted coefficients must reproduce the inputs.
    """
    summary = VerificationSummary(meta={"source": "synthetic"})
    if not estimators:
        raise DomainError("no checkpoints to verify")

    def width(c: float) -> float:
        return tolerance * (1.0 + abs(c))

    for row in estimators:
        summary.checks.append(
            _band(f"c3hat@{row.x}", row.c3hat, coeffs.c3 - width(coeffs.c3), coeffs.c3 + width(coeffs.c3))
        )
    if fit is not None:
        for j, c in enumerate(coeffs.as_tuple()[: fit.order]):
            summary.checks.append(_band(f"fit_c{j + 1}", fit.fitted[j], c - width(c), c + width(c)))
        for j in range(3, fit.order):
            summary.checks.append(_band(f"fit_c{j + 1}", fit.fitted[j], -width(0.0), width(0.0)))

    for check in summary.failures:
        logger.warning(f"Synthetic check failed: {check.detail}")
    return summary
