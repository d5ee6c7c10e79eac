"""Analytic helpers: li(x), Mertens sums, divisor weight sums, lcm pair counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import expi

from .errors import CapacityError, DomainError, InvariantError
from .primes import PrimeTable, as_fraction, factorize, floor_root


@dataclass(frozen=True)
class MertensReport:
    x: int
    sum: float
    b1_estimate: float


def li(x: float) -> float:
    """Logarithmic integral, principal value of the integral of 1/log t over (0, x)."""
    if not x > 1:
        raise DomainError(f"li is only provided for x > 1, got {x}")
    return float(expi(math.log(x)))


def reciprocal_sum(primes: np.ndarray) -> float:
    # fsum is exactly rounded, so the sum is order independent
    return math.fsum((1.0 / primes.astype(np.float64)).tolist())


def mertens_sum(x: int, table: PrimeTable) -> MertensReport:
    if x < 2:
        raise DomainError(f"mertens_sum needs x >= 2, got {x}")
    if table.limit < x:
        raise CapacityError(f"prime table limit {table.limit} < x = {x}")
    s = reciprocal_sum(table.primes_upto(x))
    return MertensReport(x=x, sum=s, b1_estimate=s - math.log(math.log(x)))


def segment_primes(x: int, alpha, beta, table: PrimeTable) -> np.ndarray:
    """Primes p with ``x**alpha < p <= x**beta``, boundaries decided exactly."""
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if not 0 < alpha < beta:
        raise DomainError(f"need 0 < alpha < beta, got {alpha}, {beta}")
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")
    hi = floor_root(x, beta)
    lo = floor_root(x, alpha)
    if table.limit < hi:
        raise CapacityError(f"prime table limit {table.limit} < {hi}")
    return table.primes[table.pi(lo) : table.pi(hi)]


def segment_reciprocal_sum(x: int, alpha, beta, table: PrimeTable) -> float:
    return reciprocal_sum(segment_primes(x, alpha, beta, table))


def _squarefree_divisors(primes: tuple[int, ...]):
    # (d, omega(d), phi(d)) for each squarefree divisor built from primes
    out = [(1, 0, 1)]
    for p in primes:
        out += [(d * p, w + 1, f * (p - 1)) for d, w, f in out]
    return out


def divisor_weight_sum_direct(n: int, A: float) -> float:
    """Sum over d | n of mu(d)^2 A^omega(d) / phi(d), by explicit enumeration."""
    fac = factorize(n)
    terms = [A**w / f for _, w, f in _squarefree_divisors(fac.primes)]
    return math.fsum(terms)


def divisor_weight_product(n: int, A: float) -> float:
    out = 1.0
    for p in factorize(n).primes:
        out *= 1.0 + A / (p - 1)
    return out


def divisor_weight_sum(n: int, A: float, rtol: float = 1e-12) -> float:
    """Divisor weight sum, computed both ways; raises if the two disagree."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    direct = divisor_weight_sum_direct(n, A)
    product = divisor_weight_product(n, A)
    if not math.isclose(direct, product, rel_tol=rtol):
        raise InvariantError("divisor_weight_sum", f"n={n}: {direct} != {product}")
    return product


def lcm_pair_count(d: int) -> int:
    """Ordered pairs (d1, d2) with lcm(d1, d2) = d, for squarefree d: 3**omega(d).

    Each prime of d goes to d1 only, d2 only, or both.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    fac = factorize(d)
    if not fac.squarefree:
        raise DomainError(f"{d} is not squarefree")
    return 3**fac.omega


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)
