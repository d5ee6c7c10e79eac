"""Goldbach singular series with a rigorous truncation bound."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .primes import factorize, iter_prime_segments

DEFAULT_TRUNCATION = 10**8

_cache: dict[int, tuple[float, float]] = {}
_lock = threading.Lock()


@dataclass(frozen=True)
class SingularSeriesValue:
    N: int
    value: float
    truncation: int
    tail_bound: float  # relative: true value lies in [value * (1 - tail_bound), value]


def twin_tail_bound(truncation: int) -> float:
    """Bound on the relative effect of the factors with p > truncation.

    For p > T each factor is 1 - x with x = 1/(p-1)^2 <= 1/T^2 <= 1/2, and
    -log(1 - x) <= 2x there; summing 2/n^2 over n >= T (p - 1 >= T)
    gives at most 2/T + 2/T^2.  The relative change 1 - exp(-tail) is
    no larger than the tail itself.
    """
    return 2.0 / truncation + 2.0 / truncation**2


def _compute_twin(truncation: int) -> float:
    parts = []
    for block in iter_prime_segments(3, truncation):
        pm1 = (block - 1).astype(np.float64)
        parts.append(math.fsum(np.log1p(-1.0 / (pm1 * pm1)).tolist()))
    return math.exp(math.fsum(parts))


def twin_prime_constant(truncation: int = DEFAULT_TRUNCATION) -> tuple[float, float]:
    """Truncated product over 2 < p <= truncation of (1 - 1/(p-1)^2), with tail bound.

    Results are cached per truncation; concurrent callers compute each
    truncation once.
    """
    if truncation < 3:
        raise DomainError(f"truncation must be >= 3, got {truncation}")
    with _lock:
        hit = _cache.get(truncation)
        if hit is None:
            hit = (_compute_twin(truncation), twin_tail_bound(truncation))
            _cache[truncation] = hit
    return hit


def odd_part_factor(N: int) -> float:
    out = 1.0
    for p in factorize(N).primes:
        if p > 2:
            out *= (p - 1) / (p - 2)
    return out


def singular_series(N: int, truncation: int = DEFAULT_TRUNCATION) -> SingularSeriesValue:
    if N < 4 or N % 2:
        raise DomainError(f"singular series is defined here for even N >= 4, got {N}")
    c2, tail = twin_prime_constant(truncation)
    return SingularSeriesValue(N=N, value=odd_part_factor(N) * c2, truncation=truncation, tail_bound=tail)
