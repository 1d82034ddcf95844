"""Analytic predictions for prime-tuple counts and gap bounds.

The density heuristic puts a k-tuple start at x with probability
C_k / log^k(x), so the expected count up to n is C_k * int_2^n log^-k,
the variance is the integral of (P - P^2), and the record prime gap
below x is bounded by 2 e^-gamma log^2(x) (a constant-factor sharpening
of the classical log^2(x) conjecture).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePredictionError, DomainError, InternalConsistencyError
from .patterns import (
    DEFAULT_TRUNCATION_PRIME,
    SingularSeriesValue,
    TuplePattern,
    singular_series,
)
from .sieve import _simple_sieve

# Single source of truth for every derived constant below.
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class Constants:
    """Derived constants: xi = 2 e^-gamma and its reciprocal-paired 0.5 e^gamma."""

    euler_gamma: float = EULER_GAMMA
    xi: float = 2.0 * math.exp(-EULER_GAMMA)
    half_e_gamma: float = 0.5 * math.exp(EULER_GAMMA)


CONSTANTS = Constants()

_REL_TARGET = 1e-9
_ABS_FLOOR = 1e-15
_MAX_DEPTH = 60


def _rough_log_power(a: float, b: float, k: int) -> float:
    """Crude piecewise-Simpson estimate on a geometric grid (scale only)."""
    nodes = np.geomspace(a, b, 257)
    lo, hi = nodes[:-1], nodes[1:]
    mid = 0.5 * (lo + hi)
    f = lambda t: np.log(t) ** (-float(k))
    return float(np.sum((hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi))))


def _adapt(f, a, b, fa, fm, fb, whole, eps, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    return _adapt(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + _adapt(
        f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1
    )


def integrate_log_power_between(a: float, b: float, k: int) -> float:
    """int_a^b dt / log^k(t) by adaptive Simpson, relative error <= 1e-9.

    Bisects intervals until the local Simpson correction drops under the
    budget (absolute floor 1e-15); a one-pass geometric-grid estimate
    sets the absolute budget from the relative target.
    """
    if k < 1:
        raise DomainError(f"log power k must be >= 1, got {k}")
    if a < 2.0:
        raise DomainError(f"lower limit must be >= 2, got {a}")
    if b <= a:
        if b == a:
            return 0.0
        raise DomainError(f"need b >= a, got [{a}, {b}]")
    kf = float(k)
    f = lambda t: math.log(t) ** -kf
    eps = max(_ABS_FLOOR, _REL_TARGET * abs(_rough_log_power(a, b, k)))
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _adapt(f, a, b, fa, fm, fb, whole, eps, _MAX_DEPTH)


def integrate_log_power(n: float, k: int) -> float:
    """int_2^n dt / log^k(t) (the k-th logarithmic-power integral)."""
    if n <= 2.0:
        raise DomainError(f"upper limit must exceed 2, got {n}")
    return integrate_log_power_between(2.0, float(n), k)


@dataclass(frozen=True)
class Prediction:
    """Predicted tuple-count statistics up to n for one pattern.

    predicted_count fills mean only; predicted_sigma fills all three
    moments.  constant_used records the truncated Euler product behind
    the numbers.
    """

    n: int
    pattern: TuplePattern
    mean: float
    constant_used: SingularSeriesValue
    variance: float | None = None
    sigma: float | None = None


def predicted_count(
    pattern: TuplePattern,
    n: int,
    truncation_prime: int = DEFAULT_TRUNCATION_PRIME,
) -> Prediction:
    """Expected number of pattern instances with first element <= n."""
    if n <= 2:
        raise DomainError(f"prediction needs n > 2, got {n}")
    cons = singular_series(pattern, truncation_prime)
    if not cons.admissible:
        return Prediction(n, pattern, 0.0, cons)
    mean = cons.constant * integrate_log_power(n, pattern.k)
    return Prediction(n, pattern, mean, cons)


def predicted_sigma(
    pattern: TuplePattern,
    n: int,
    truncation_prime: int = DEFAULT_TRUNCATION_PRIME,
) -> Prediction:
    """Prediction with variance C_k I_k(n) - C_k^2 I_2k(n) and its root."""
    if n <= 2:
        raise DomainError(f"prediction needs n > 2, got {n}")
    cons = singular_series(pattern, truncation_prime)
    if not cons.admissible:
        return Prediction(n, pattern, 0.0, cons, variance=0.0, sigma=0.0)
    k = pattern.k
    ik = integrate_log_power(n, k)
    i2k = integrate_log_power(n, 2 * k)
    mean = cons.constant * ik
    variance = mean - cons.constant**2 * i2k
    if variance < 0.0:
        raise InternalConsistencyError(
            f"negative variance {variance} for {pattern} at n = {n}"
        )
    return Prediction(n, pattern, mean, cons, variance=variance,
                      sigma=math.sqrt(variance))


def z_score(actual: int, prediction: Prediction) -> float:
    """(actual - mean) / sigma for a prediction with positive sigma."""
    if prediction.sigma is None or prediction.sigma <= 0.0:
        raise DegeneratePredictionError(
            f"prediction for {prediction.pattern} has sigma "
            f"{prediction.sigma}; cannot standardize"
        )
    return (actual - prediction.mean) / prediction.sigma


def mertens_product(y: int) -> float:
    """prod_{p <= y} (1 - 1/p); the empty product (y < 2) is 1."""
    if y < 1:
        raise DomainError(f"mertens_product needs y >= 1, got {y}")
    primes = _simple_sieve(y).astype(np.float64)
    return float(np.prod(1.0 - 1.0 / primes))


def dependence_coefficient(x: int) -> float:
    """C(x) = 1 / (log x * prod_{p <= sqrt(x)} (1 - 1/p)).

    Measures how far the naive independent-divisibility density is from
    1/log x; tends (slowly) to 0.5 e^gamma ~ 0.8905 as x grows.
    """
    if x < 9:
        raise DomainError(f"dependence_coefficient needs x >= 9, got {x}")
    return 1.0 / (math.log(x) * mertens_product(math.isqrt(x)))


def gap_bound_cramer(x: float) -> float:
    """log^2(x): the classical record-gap growth scale."""
    if x <= 1:
        raise DomainError(f"gap bound needs x > 1, got {x}")
    return math.log(x) ** 2


def gap_bound_volfson(x: float) -> float:
    """2 e^-gamma log^2(x): the dependence-corrected record-gap bound."""
    if x <= 1:
        raise DomainError(f"gap bound needs x > 1, got {x}")
    return CONSTANTS.xi * math.log(x) ** 2
