"""Desk-scale prime checks: segmented sieve, exact theta/psi, and interval witnesses.

Primality of 64-bit integers uses Miller-Rabin with the first twelve prime
bases, which is deterministic below 3.3e24.  Above 2^64 the same test with
extra seeded random bases is only a strong-probable-prime test, and witnesses
found there are flagged ``probable``.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .errors import BudgetExhausted, CapExceeded, DomainError

CAP_ENV = "KTHPOWERS_SIEVE_CAP"
DEFAULT_CAP = 10 ** 8
SEGMENT = 1 << 22
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
U64 = 1 << 64
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                 73, 79, 83, 89, 97)


def sieve_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = sieve_cap() if cap is None else cap
    if n > cap:
        raise CapExceeded(f"{n} exceeds the sieve cap {cap} (set {CAP_ENV} to raise it)")


def small_primes(n: int) -> np.ndarray:
    """All primes ``<= n`` by a plain sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass
class SieveWindow:
    """Primality flags for the integers ``lo <= n < hi``."""

    lo: int
    hi: int
    flags: np.ndarray = field(repr=False)

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.flags).astype(np.int64) + self.lo

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise DomainError(f"{n} outside window [{self.lo}, {self.hi})")
        return bool(self.flags[n - self.lo])


def sieve_window(lo: int, hi: int, base: Optional[np.ndarray] = None,
                 cap: Optional[int] = None) -> SieveWindow:
    if lo < 0 or hi < lo:
        raise DomainError("sieve_window needs 0 <= lo <= hi")
    _check_cap(hi - lo, cap)
    if base is None:
        base = small_primes(math.isqrt(max(hi - 1, 0)))
    flags = np.ones(hi - lo, dtype=bool)
    for n in range(lo, min(hi, 2)):
        flags[n - lo] = False
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, (lo + p - 1) // p * p)
        flags[start - lo::p] = False
    return SieveWindow(lo, hi, flags)


def iter_windows(n: int, cap: Optional[int] = None, segment: int = SEGMENT) -> Iterator[SieveWindow]:
    """Segmented sieve over ``[0, n]``."""
    _check_cap(n, cap)
    base = small_primes(math.isqrt(n))
    for lo in range(0, n + 1, segment):
        yield sieve_window(lo, min(n + 1, lo + segment), base, cap=segment)


def theta_exact(x: int, cap: Optional[int] = None) -> float:
    """``sum_{p <= x} log p`` with compensated summation."""
    if x < 2:
        return 0.0
    parts = [math.fsum(np.log(w.primes().astype(float))) for w in iter_windows(int(x), cap)]
    return math.fsum(parts)


def _running_sum(n: int, weights: dict[int, float]) -> np.ndarray:
    """Neumaier-compensated prefix sums ``out[x] = sum_{m <= x} weights[m]``."""
    out = np.zeros(n + 1)
    total = comp = 0.0
    last = 0
    for m in sorted(weights):
        out[last:m] = total + comp
        v = weights[m]
        t = total + v
        comp += (total - t) + v if abs(total) >= abs(v) else (v - t) + total
        total, last = t, m
    out[last:] = total + comp
    return out


def theta_values(n: int, cap: Optional[int] = None) -> np.ndarray:
    """``theta(x)`` for every ``0 <= x <= n`` from a single sieve."""
    _check_cap(n, cap)
    return _running_sum(n, {int(p): math.log(int(p)) for p in small_primes(n)})


def psi_values(n: int, cap: Optional[int] = None) -> np.ndarray:
    """``psi(x)`` for every ``0 <= x <= n`` from a single sieve."""
    _check_cap(n, cap)
    weights = {}
    for p in small_primes(n):
        p = int(p)
        lp, q = math.log(p), p
        while q <= n:
            weights[q] = lp
            q *= p
    return _running_sum(n, weights)


def prime_power_excess(x: int) -> float:
    """``psi(x) - theta(x)``: ``log p`` for each prime power ``p^r <= x`` with ``r >= 2``."""
    terms = []
    for p in small_primes(math.isqrt(int(x))):
        p = int(p)
        count, q = 0, p * p
        while q <= x:
            count += 1
            q *= p
        terms.append(count * math.log(p))
    return math.fsum(terms)


def psi_exact(x: int, cap: Optional[int] = None) -> float:
    """``sum_{p^r <= x} log p``."""
    if x < 2:
        return 0.0
    return math.fsum([theta_exact(x, cap), prime_power_excess(x)])


# ---------------------------------------------------------------------------
# primality


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    y = pow(a, d, n)
    if y == 1 or y == n - 1:
        return True
    for _ in range(s - 1):
        y = y * y % n
        if y == n - 1:
            return True
    return False


def is_prime(n: int, rounds: int = 20, seed: int = 0) -> bool:
    """Deterministic below 2^64; a strong-probable-prime test above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, a) for a in MR_BASES):
        return False
    if n < U64:
        return True
    rng = random.Random(seed ^ n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(rounds))


@dataclass(frozen=True)
class Witness:
    value: int
    probable: bool


def prime_in_interval(lo: int, hi: int, rounds: int = 20, budget: int = 1_000_000,
                      seed: int = 0) -> Optional[Witness]:
    """First prime in the open interval ``(lo, hi)`` scanning upward from ``lo + 1``.

    Returns ``None`` only when every candidate was scanned and proven
    composite.  Raises ``BudgetExhausted`` if the budget runs out first.
    """
    if not lo < hi:
        raise DomainError("prime_in_interval needs lo < hi")
    n = max(lo + 1, 2)
    for _ in range(budget):
        if n >= hi:
            return None
        if is_prime(n, rounds, seed):
            return Witness(n, probable=n >= U64)
        n += 1 if n == 2 else (2 if n % 2 else 1)
    if n >= hi:
        return None
    raise BudgetExhausted(f"scan budget {budget} exhausted at {n}; inconclusive")


@dataclass(frozen=True)
class CubesReport:
    n_max: int
    checked: int
    failures: tuple[int, ...]
    largest_offset: int

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked == self.n_max


def cubes_check(n_max: int) -> CubesReport:
    """A prime in ``(n^3, (n+1)^3)`` for every ``1 <= n <= n_max``."""
    if not 1 <= n_max <= 10 ** 5:
        raise DomainError("cubes_check needs 1 <= n_max <= 1e5")
    failures, largest = [], 0
    for n in range(1, n_max + 1):
        lo, hi = n ** 3, (n + 1) ** 3
        w = prime_in_interval(lo, hi)
        if w is None:
            failures.append(n)
        else:
            largest = max(largest, w.value - lo)
    return CubesReport(n_max, n_max, tuple(failures), largest)
