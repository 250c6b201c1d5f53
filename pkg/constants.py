"""
Constants for ratiolab.
Centralizes defaults, report column names, exit codes, acceptance bands and
message templates.
"""

from fractions import Fraction


# ========== DEFAULTS ==========
class Defaults:
    # Sieve
    SEGMENT_SIZE = 2**22
    MIN_SEGMENT_SIZE = 1

    # Class decomposition: sigma_1..sigma_16 plus a tail bucket for omega >= 17
    CLASS_CAP = 16

    # Oracle
    ORACLE_LIMIT = 10**7

    # The three-term expansion holds for alpha > 4/5
    ALPHA_THRESHOLD = Fraction(4, 5)

    # Quadrature
    QUAD_EPSABS = 1e-12
    QUAD_EPSREL = 1e-11
    QUAD_LIMIT = 500
    BLACKBOX_EPSILON = 1e-12

    # Fits and estimators
    FIT_ORDER = 4
    FIT_MIN_X = 10**3
    ESTIMATOR_MIN_X = 10**3

    # Lower limits of the asymptotic helpers
    PREDICT_MIN_X = 3
    LEMMA3_MIN_X = 16
    SIGMA2_MIN_X = 100
    SIGMA3_MIN_X = 10**4
    LEMMA2_MIN_Y = 1.5

    # Sub-sum split exponent: splits carry (log x)^(4/alpha)
    SPLIT_LOG_POWER = 4

    # Report formatting
    SIGNIFICANT_DIGITS = 12
    DECADES_START = 10**3

    # Relative tolerance of the synthetic-table checks
    SYNTHETIC_TOLERANCE = 1e-6


# ========== INPUT PATTERNS ==========
class Patterns:
    INTEGER = r"[+-]?\d+"
    INDICATOR = r"indicator:(\d+)"
    TAIL = r"tail\s*=\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"


# ========== REPORT COLUMNS ==========
class Columns:
    X = "x"
    S = "S"
    SIGMA_TAIL = "sigma_tail"
    NONSQUAREFREE = "nonsquarefree"
    PRIME_COUNT = "prime_count"
    S_OVER_PI = "S_over_pi"
    REL_ERROR = "rel_error"
    PREDICTIONS = ("pred1", "pred2", "pred3")
    ESTIMATORS = ("c1hat", "c2hat", "c3hat")
    COEFFICIENTS = ("c1", "c2", "c3")

    @staticmethod
    def sigma(i: int) -> str:
        return f"sigma_{i}"

    @classmethod
    def class_columns(cls) -> list:
        return [cls.sigma(i) for i in range(1, Defaults.CLASS_CAP + 1)]


# ========== EXIT CODES ==========
class ExitCodes:
    OK = 0
    UNEXPECTED = 1
    CONFIG_ERROR = 2
    NUMERICAL_ERROR = 3
    ACCEPTANCE_FAILURE = 4


# ========== ACCEPTANCE BANDS ==========
class Bands:
    """
    Bands on the peel-off estimators at the last checkpoint, for lambda == 1.

    Each entry maps an estimator to (low, high, must_decrease). The alpha == 1
    upper limits of c2hat and c3hat sit above the measured 10^9 values
    (4.297 and 26.89): both estimators still carry the x/log^4 x term, which
    shrinks only like 1/log x.
    """

    LAMBDA_ONE = {
        1.0: {
            "c1hat": (1.00, 1.30, True),
            "c2hat": (3.0, 4.6, True),
            "c3hat": (14.0, 30.0, False),
        },
        2.0: {
            "c1hat": (1.00, 1.30, True),
            "c2hat": (2.0, 3.2, True),
            "c3hat": (5.5, 11.0, False),
        },
    }

    # Fitted coefficients of a fit with Defaults.FIT_ORDER terms on the lambda == 1,
    # alpha == 1 table; reported as advisory checks
    FIT_LAMBDA_ONE = {
        1.0: ((0.8, 1.2), (2.2, 3.8), (9.0, 21.0)),
    }

    # Fallback half-widths for other configurations: (relative, absolute)
    GENERIC = {
        "c1hat": (0.3, 0.3),
        "c2hat": (0.6, 0.5),
        "c3hat": (0.6, 2.0),
    }


# ========== MESSAGES ==========
class Messages:
    ALPHA_OUTSIDE_THEOREM = (
        "alpha={alpha} is not above 4/5; the three-term expansion is not claimed there"
    )
    CHECKPOINT_REACHED = "Checkpoint x={x}: S={total:.12g}, pi(x)={prime_count}"
    SEGMENT_DONE = "Segment [{lo}, {hi}) reduced"
    RUN_STARTED = "Sweeping [2, {x_max}] in segments of {segment_size} with {threads} worker(s)"
    BAND_FAILED = "{name}={value:.6g} outside [{low}, {high}]"
    BAND_NOT_DECREASING = "{name} is not strictly decreasing over the checkpoints"
    ORACLE_LIMIT = "oracle is capped at x <= {limit} (got {x})"
