"""Segmented sieve of Eratosthenes over arbitrary 64-bit ranges.

Only odd numbers are stored (2 is special-cased), so a bitmap over
[lo, hi) costs (hi - lo) / 2 bytes.  Sieving proceeds segment by
segment; memory stays O(segment) + O(pi(sqrt(hi))) no matter how wide
the range is, and the resulting bitmap is bit-identical for any
segment size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CacheFormatError,
    DomainError,
    InsufficientPrimesError,
    InvalidRangeError,
)

# 2^20 odd entries (a 2 MiB span) per segment: fits comfortably in cache.
DEFAULT_SEGMENT_ODDS = 1 << 20

_CACHE_MAGIC = b"PBM1"


def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class GapRecord:
    """A pair of consecutive primes and the distance between them."""

    lower: int
    upper: int
    gap: int


class PrimeBitmap:
    """Primality of the integers in [lo, hi), odd entries plus a flag for 2.

    Immutable after construction and safe to share across threads.
    Querying outside [lo, hi) raises instead of returning False.
    """

    __slots__ = ("lo", "hi", "has_two", "_bits", "_lo_odd")

    def __init__(self, lo: int, hi: int, odd_bits: np.ndarray):
        self.lo = lo
        self.hi = hi
        self.has_two = lo <= 2 < hi
        self._lo_odd = lo if lo % 2 == 1 else lo + 1
        self._bits = odd_bits
        self._bits.setflags(write=False)

    @property
    def odd_bits(self) -> np.ndarray:
        """Read-only indicator array; index j stands for lo_odd + 2j."""
        return self._bits

    @property
    def lo_odd(self) -> int:
        return self._lo_odd

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise InvalidRangeError(
                f"{n} outside bitmap range [{self.lo}, {self.hi})"
            )
        if n % 2 == 0:
            return n == 2
        return bool(self._bits[(n - self._lo_odd) // 2])

    def primes(self) -> np.ndarray:
        """All primes in [lo, hi), ascending."""
        odd = self._lo_odd + 2 * np.flatnonzero(self._bits).astype(np.int64)
        if self.has_two:
            return np.concatenate(([2], odd))
        return odd

    def count(self) -> int:
        return int(self.has_two) + int(np.count_nonzero(self._bits))

    def dense(self) -> np.ndarray:
        """Boolean primality over [lo, hi), one entry per integer."""
        out = np.zeros(self.hi - self.lo, dtype=bool)
        out[self._lo_odd - self.lo :: 2] = self._bits
        if self.has_two:
            out[2 - self.lo] = True
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeBitmap):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and np.array_equal(self._bits, other._bits)
        )

    def __hash__(self) -> int:  # immutable, but identity hashing suffices
        return hash((self.lo, self.hi, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"PrimeBitmap(lo={self.lo}, hi={self.hi}, count={self.count()})"


def _validate_range(lo: int, hi: int) -> None:
    if lo < 2 or hi <= lo:
        raise InvalidRangeError(f"need 2 <= lo < hi, got [{lo}, {hi})")
    if hi > 1 << 63:
        raise InvalidRangeError(f"hi = {hi} exceeds 2^63")


def _mark_segment(bits: np.ndarray, seg_lo_odd: int, seg_hi: int,
                  odd_base: np.ndarray) -> None:
    """Clear composites among odds in [seg_lo_odd, seg_hi); bits is their view."""
    for p in odd_base:
        p = int(p)
        start = p * p
        if start >= seg_hi:
            break
        if start < seg_lo_odd:
            start = ((seg_lo_odd + p - 1) // p) * p
            if start % 2 == 0:
                start += p
        if start >= seg_hi:
            continue
        bits[(start - seg_lo_odd) // 2 :: p] = False


def sieve_range(lo: int, hi: int,
                segment_odds: int = DEFAULT_SEGMENT_ODDS) -> PrimeBitmap:
    """Sieve the interval [lo, hi) and return its primality bitmap.

    Parameters
    ----------
    lo, hi : int
        Interval bounds, 2 <= lo < hi <= 2^63.
    segment_odds : int
        Odd entries sieved per internal segment.  Any positive value
        yields a bit-identical result.

    Returns
    -------
    PrimeBitmap
    """
    _validate_range(lo, hi)
    if segment_odds < 1:
        raise DomainError("segment_odds must be >= 1")
    base = _simple_sieve(math.isqrt(hi - 1))
    odd_base = base[base > 2]

    lo_odd = lo if lo % 2 == 1 else lo + 1
    n_odds = max(0, (hi - lo_odd + 1) // 2)
    bits = np.ones(n_odds, dtype=bool)

    span = 2 * segment_odds
    seg_lo = lo_odd
    while seg_lo < hi:
        seg_hi = min(seg_lo + span, hi)
        j0 = (seg_lo - lo_odd) // 2
        j1 = j0 + (seg_hi - seg_lo + 1) // 2
        _mark_segment(bits[j0:j1], seg_lo, seg_hi, odd_base)
        seg_lo = seg_hi if seg_hi % 2 == 1 else seg_hi + 1
    return PrimeBitmap(lo, hi, bits)


def _iter_prime_chunks(lo: int, hi: int, chunk_span: int = 1 << 22):
    """Yield ascending prime arrays covering [lo, hi), bounded memory."""
    base = _simple_sieve(math.isqrt(hi - 1))
    odd_base = base[base > 2]
    pos = lo
    while pos < hi:
        end = min(pos + chunk_span, hi)
        lo_odd = pos if pos % 2 == 1 else pos + 1
        n_odds = max(0, (end - lo_odd + 1) // 2)
        bits = np.ones(n_odds, dtype=bool)
        _mark_segment(bits, lo_odd, end, odd_base)
        primes = lo_odd + 2 * np.flatnonzero(bits).astype(np.int64)
        if pos <= 2 < end:
            primes = np.concatenate(([2], primes))
        yield primes
        pos = end


def prime_count(n: int) -> int:
    """pi(n): the number of primes <= n."""
    if n < 1:
        raise DomainError(f"prime_count needs n >= 1, got {n}")
    if n < 2:
        return 0
    return sum(len(chunk) for chunk in _iter_prime_chunks(2, n + 1))


def max_prime_gap(x: int) -> GapRecord:
    """Record gap among consecutive prime pairs with both primes <= x.

    Ties are broken by the smallest lower prime (first occurrence in
    an ascending scan).  Raises InsufficientPrimesError for x < 3.
    """
    if x < 3:
        raise InsufficientPrimesError(
            f"max_prime_gap needs at least two primes <= x, got x = {x}"
        )
    best = GapRecord(0, 0, 0)
    prev = None
    for chunk in _iter_prime_chunks(2, x + 1):
        if len(chunk) == 0:
            continue
        if prev is not None:
            chunk = np.concatenate(([prev], chunk))
        gaps = np.diff(chunk)
        if len(gaps) and int(gaps.max()) > best.gap:
            i = int(np.argmax(gaps))
            best = GapRecord(int(chunk[i]), int(chunk[i + 1]), int(gaps[i]))
        prev = int(chunk[-1])
    return best


def gap_records_up_to(x: int) -> list[GapRecord]:
    """Strictly increasing gap records over consecutive primes <= x."""
    if x < 3:
        raise InsufficientPrimesError(
            f"gap_records_up_to needs at least two primes <= x, got x = {x}"
        )
    records: list[GapRecord] = []
    record_gap = 0
    prev = None
    for chunk in _iter_prime_chunks(2, x + 1):
        if len(chunk) == 0:
            continue
        if prev is not None:
            chunk = np.concatenate(([prev], chunk))
        gaps = np.diff(chunk)
        # records are rare, so a python loop over improvements is fine
        while True:
            over = np.flatnonzero(gaps > record_gap)
            if len(over) == 0:
                break
            i = int(over[0])
            record_gap = int(gaps[i])
            records.append(
                GapRecord(int(chunk[i]), int(chunk[i + 1]), record_gap)
            )
        prev = int(chunk[-1])
    return records


def save_bitmap(bitmap: PrimeBitmap, path) -> None:
    """Write a bitmap in the PBM1 cache format.

    Layout: magic "PBM1"; lo and hi as 8-byte little-endian unsigned;
    the odd-number bitset padded to whole bytes, bit j of byte i
    standing for lo_odd + 2*(8i + j), least-significant bit first.
    """
    packed = np.packbits(bitmap.odd_bits, bitorder="little")
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(bitmap.lo.to_bytes(8, "little"))
        fh.write(bitmap.hi.to_bytes(8, "little"))
        fh.write(packed.tobytes())


def load_bitmap(path) -> PrimeBitmap:
    """Read a PBM1 cache file back into a PrimeBitmap."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CACHE_MAGIC:
            raise CacheFormatError(f"bad magic {magic!r}, expected {_CACHE_MAGIC!r}")
        lo = int.from_bytes(fh.read(8), "little")
        hi = int.from_bytes(fh.read(8), "little")
        payload = fh.read()
    _validate_range(lo, hi)
    lo_odd = lo if lo % 2 == 1 else lo + 1
    n_odds = max(0, (hi - lo_odd + 1) // 2)
    if len(payload) != (n_odds + 7) // 8:
        raise CacheFormatError(
            f"payload holds {len(payload)} bytes, expected {(n_odds + 7) // 8}"
        )
    bits = np.unpackbits(
        np.frombuffer(payload, dtype=np.uint8), bitorder="little"
    )[:n_odds].astype(bool)
    return PrimeBitmap(lo, hi, bits)
