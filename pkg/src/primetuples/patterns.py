"""Tuple-pattern algebra: admissibility, residue counts, and the
singular-series constant behind k-tuple density predictions.

A pattern is a strictly increasing offset set starting at 0, e.g.
(0, 2) for twins or (0, 2, 6) for a prime triplet shape.  Its constant

    C_k = prod_p (1 - omega(p)/p) / (1 - 1/p)^k

corrects the naive 1/log^k density, where omega(p) counts the distinct
residues of the offsets modulo p.  Patterns covering every residue
class modulo some prime are inadmissible and get C_k = 0 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .sieve import _simple_sieve

# Factors for p beyond the truncation point are 1 + O(k^2/p^2), so the
# default cutoff bounds the relative tail under k^2 * 1e-6.
DEFAULT_TRUNCATION_PRIME = 10**6

# Direct float products underflow gradually once many factors sit below
# one; switch to log-space accumulation for wide patterns.
_LOG_SPACE_MIN_K = 8


def _is_prime_small(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class TuplePattern:
    """A k-tuple shape given by its offsets (first offset always 0)."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(o) for o in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if len(offs) < 1:
            raise DomainError("pattern needs at least one offset")
        if offs[0] != 0:
            raise DomainError(f"first offset must be 0, got {offs[0]}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise DomainError(f"offsets must be strictly increasing: {offs}")

    @classmethod
    def parse(cls, text: str) -> "TuplePattern":
        """Parse the comma-separated form, e.g. "0,2,6".

        Rejects unsorted, negative, or non-integer input.
        """
        parts = [p.strip() for p in text.split(",")]
        try:
            offs = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise DomainError(f"bad pattern {text!r}: {exc}") from None
        if any(o < 0 for o in offs):
            raise DomainError(f"bad pattern {text!r}: negative offset")
        return cls(offs)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def max_offset(self) -> int:
        return self.offsets[-1]

    def __str__(self) -> str:
        return ",".join(str(o) for o in self.offsets)


TWIN = TuplePattern((0, 2))


@dataclass(frozen=True)
class SingularSeriesValue:
    """Truncated Euler product C_k with its truncation point and tail bound.

    admissible is False exactly when the constant is 0.
    """

    constant: float
    truncation_prime: int
    tail_bound: float
    admissible: bool


def omega(pattern: TuplePattern, p: int) -> int:
    """Number of distinct residues of the pattern's offsets modulo p.

    Equivalently: how many residue classes x mod p put some x + offset
    at a multiple of p.  Always between 1 and min(k, p).
    """
    if not _is_prime_small(p):
        raise DomainError(f"omega needs a prime modulus, got {p}")
    return len({o % p for o in pattern.offsets})


def is_admissible(pattern: TuplePattern) -> bool:
    """True iff no prime has every residue class covered by the offsets.

    Only primes p <= k need checking: beyond that omega <= k < p.
    """
    p = 2
    while p <= pattern.k:
        if omega(pattern, p) == p:
            return False
        p += 1
        while not _is_prime_small(p):
            p += 1
    return True


def singular_series(
    pattern: TuplePattern,
    truncation_prime: int = DEFAULT_TRUNCATION_PRIME,
) -> SingularSeriesValue:
    """Truncated singular-series constant for the pattern.

    Computes prod_{p <= P} (1 - omega(p)/p) / (1 - 1/p)^k over primes up
    to the truncation point P.  The neglected factors are each
    1 + O(k^2/p^2), so the relative tail is bounded by
    exp(k^2 / P) - 1.  Inadmissible patterns return constant 0 with a
    zero tail.
    """
    if truncation_prime < 2:
        raise DomainError(
            f"truncation_prime must be >= 2, got {truncation_prime}"
        )
    if not is_admissible(pattern):
        return SingularSeriesValue(0.0, truncation_prime, 0.0, False)

    k = pattern.k
    primes = _simple_sieve(truncation_prime)
    # omega(p) = k automatically once p exceeds every offset difference
    small = primes[primes <= pattern.max_offset]
    omegas = np.full(len(primes), k, dtype=np.float64)
    for i, p in enumerate(small):
        omegas[i] = omega(pattern, int(p))

    pf = primes.astype(np.float64)
    if k >= _LOG_SPACE_MIN_K:
        logs = np.log1p(-omegas / pf) - k * np.log1p(-1.0 / pf)
        constant = float(math.exp(np.sum(logs)))
    else:
        factors = (1.0 - omegas / pf) / np.power(1.0 - 1.0 / pf, k)
        constant = float(np.prod(factors))
    tail = math.expm1(k * k / truncation_prime)
    return SingularSeriesValue(constant, truncation_prime, tail, True)


def primorial_ratio(bound: int) -> float:
    """prod_{p <= bound} p / (p - 1), i.e. Q / phi(Q) for the primorial Q.

    Works on the ratio directly; the primorial itself is never built.
    """
    if bound < 2:
        raise DomainError(f"primorial_ratio needs bound >= 2, got {bound}")
    primes = _simple_sieve(bound).astype(np.float64)
    return float(np.prod(primes / (primes - 1.0)))
