"""Prime tables, smallest-prime-factor tables and exact power comparisons.

Everything downstream (support enumeration, progression counts, sieve
weights) is built on the tables here.  Boundary tests of the form
``N**theta < p`` are never done in floating point: ``theta = u/v`` is
compared as ``p**v`` against ``N**u`` with Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_SEGMENT = 1 << 20
MAX_SIEVE_LIMIT = 1 << 32


@dataclass(frozen=True)
class PrimeTable:
    """Primality flags on ``[0, limit]`` and the ascending list of primes."""

    limit: int
    primality: np.ndarray  # bool, length limit + 1
    primes: np.ndarray  # int64, ascending

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise CapacityError(f"{n} outside prime table [0, {self.limit}]")
        return bool(self.primality[n])

    def pi(self, x: int) -> int:
        """Number of primes <= x (x may not exceed the table limit)."""
        if x > self.limit:
            raise CapacityError(f"pi({x}) needs a table past {self.limit}")
        if x < 2:
            return 0
        return int(np.searchsorted(self.primes, x, side="right"))

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: self.pi(x)]


@dataclass(frozen=True)
class SpfTable:
    """``spf[n]`` is the smallest prime factor of n; ``spf[1] == 1``."""

    limit: int
    spf: np.ndarray  # int64, length limit + 1


@dataclass(frozen=True)
class Factorization:
    pairs: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def omega(self) -> int:
        return len(self.pairs)

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.pairs)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


def _check_capacity(limit: int, max_limit: int) -> None:
    if limit < 0:
        raise DomainError(f"limit must be >= 0, got {limit}")
    if limit > max_limit:
        raise CapacityError(f"limit {limit} exceeds sieve budget {max_limit}")


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def iter_prime_segments(
    lo: int, hi: int, segment: int = DEFAULT_SEGMENT
) -> Iterator[np.ndarray]:
    """Yield arrays of the primes in ``[lo, hi]``, one block per segment.

    Only the base primes up to ``isqrt(hi)`` and one segment buffer are
    held in memory at a time.
    """
    lo = max(lo, 2)
    if hi < lo:
        return
    root = math.isqrt(hi)
    base = np.flatnonzero(_simple_sieve(root))
    start = lo
    while start <= hi:
        stop = min(start + segment - 1, hi)
        flags = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        yield np.flatnonzero(flags).astype(np.int64) + start
        start = stop + 1


def sieve_primes(
    limit: int,
    segment: int = DEFAULT_SEGMENT,
    max_limit: int = MAX_SIEVE_LIMIT,
    segmented: bool = True,
) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` inclusive.

    With ``segmented=True`` (the default) the crossing-off works one
    ``segment``-sized window at a time; ``segmented=False`` runs the
    textbook whole-array sieve and exists for cross-checking.
    """
    _check_capacity(limit, max_limit)
    if not segmented:
        flags = _simple_sieve(limit)
    else:
        flags = np.zeros(limit + 1, dtype=bool)
        for block in iter_prime_segments(2, limit, segment):
            flags[block] = True
    primes = np.flatnonzero(flags).astype(np.int64)
    flags.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primality=flags, primes=primes)


def spf_table(limit: int, max_limit: int = MAX_SIEVE_LIMIT) -> SpfTable:
    _check_capacity(limit, max_limit)
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        spf[1] = 1
    for p in range(2, limit + 1):
        if p * p > limit:
            break
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    spf.setflags(write=False)
    return SpfTable(limit=limit, spf=spf)


def factorize(n: int, spf: SpfTable | None = None) -> Factorization:
    """Factor n, using the spf table when it covers n, trial division otherwise."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    pairs: list[tuple[int, int]] = []
    if spf is not None and n <= spf.limit:
        table = spf.spf
        while n > 1:
            p = int(table[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return Factorization(tuple(pairs))
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            pairs.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        pairs.append((n, 1))
    return Factorization(tuple(pairs))


def multiplicative_basics(n: int, spf: SpfTable | None = None) -> tuple[int, int, int]:
    """Return ``(mu(n), phi(n), omega(n))``."""
    fac = factorize(n, spf)
    mu = (-1) ** fac.omega if fac.squarefree else 0
    phi = 1
    for p, e in fac.pairs:
        phi *= (p - 1) * p ** (e - 1)
    return mu, phi, fac.omega


def power_exceeds(p: int, k: int, N: int) -> bool:
    """Exact test of ``p**k > N`` that stops multiplying once N is passed."""
    if p < 1 or k < 1 or N < 1:
        raise DomainError("power_exceeds needs p, k, N >= 1")
    if p == 1:
        return 1 > N
    acc = 1
    for _ in range(k):
        acc *= p
        if acc > N:
            return True
    return False


def exceeds_root(p: int, N: int, theta: Fraction) -> bool:
    """True iff ``p > N**theta`` for rational ``theta = u/v > 0``."""
    u, v = theta.numerator, theta.denominator
    if u <= 0:
        raise DomainError(f"exponent must be positive, got {theta}")
    return p**v > N**u


def floor_root(N: int, theta: Fraction) -> int:
    """Largest integer z with ``z <= N**theta``, i.e. ``z**v <= N**u``."""
    u, v = theta.numerator, theta.denominator
    if N < 1 or u <= 0:
        raise DomainError(f"floor_root needs N >= 1 and theta > 0 ({N}, {theta})")
    target = N**u
    z = int(math.exp(u * math.log(N) / v))
    while z > 0 and z**v > target:
        z -= 1
    while (z + 1) ** v <= target:
        z += 1
    return z


_TABLES: dict[str, object] = {}


def shared_primes(limit: int) -> PrimeTable:
    """Process-wide prime table covering at least ``limit`` (grown on demand)."""
    table = _TABLES.get("primes")
    if table is None or table.limit < limit:
        size = max(limit, 1 << 16)
        if table is not None:
            size = max(size, 2 * table.limit)
        table = sieve_primes(size)
        _TABLES["primes"] = table
    return table


def shared_spf(limit: int) -> SpfTable:
    table = _TABLES.get("spf")
    if table is None or table.limit < limit:
        size = max(limit, 1 << 16)
        if table is not None:
            size = max(size, 2 * table.limit)
        table = spf_table(size)
        _TABLES["spf"] = table
    return table


def as_fraction(value) -> Fraction:
    """Coerce to a small-denominator rational (floats via limit_denominator)."""
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)
