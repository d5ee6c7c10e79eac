"""Selberg upper-bound weights for the sieve of N - a*p by primes up to z.

The density is g(d) = 1/phi(d) on squarefree d | Q, so h(p) = 1/(p - 2)
and the optimal weights are

    lambda_d = mu(d) * prod_{p | d} (p - 1)/(p - 2) * G_d(z/d) / G(z)

with G(z) = sum_{d <= z, d | Q} h(d) and G_d restricted to (m, d) = 1.
The quadratic form sum lambda_{d1} lambda_{d2} / phi([d1, d2]) then
equals 1/G(z), which every construction checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, InvariantError
from .primes import as_fraction, factorize, floor_root, shared_primes
from .singular import singular_series

DEFAULT_EPSILON = Fraction(1, 100)
LAMBDA_SLACK = 1e-12
DIRECT_LIMIT = 1000


def sieve_exponent(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise DomainError(f"epsilon must lie in (0, 1/2), got {eps}")
    return Fraction(1, 4) - eps / 2


def sieve_level(N: int, epsilon=DEFAULT_EPSILON) -> int:
    """z = floor(N**(1/4 - epsilon/2)), by exact integer root extraction."""
    return floor_root(N, sieve_exponent(epsilon))


@dataclass(frozen=True)
class SieveSupport:
    N: int
    epsilon: Fraction
    z: int
    sieve_primes: tuple[int, ...]  # primes <= z not dividing N, i.e. the primes of Q
    members: tuple[int, ...]  # squarefree d <= z with every prime factor in sieve_primes
    factors: dict[int, tuple[int, ...]] = field(repr=False, compare=False)

    def __contains__(self, d: int) -> bool:
        if d < 1:
            return False
        return d in self.factors or (d <= self.z and self.divides_Q(d))

    def divides_Q(self, d: int) -> bool:
        """d | Q, without the d <= z restriction."""
        fac = factorize(d)
        qs = set(self.sieve_primes)
        return fac.squarefree and all(p in qs for p in fac.primes)


def build_support(N: int, epsilon=DEFAULT_EPSILON, z: int | None = None) -> SieveSupport:
    eps = as_fraction(epsilon)
    if z is None:
        z = sieve_level(N, eps)
    if z < 2:
        raise DomainError(f"sieve level z = {z} < 2 for N = {N}")
    qs = tuple(int(p) for p in shared_primes(z).primes_upto(z) if N % int(p))
    if 2 in qs:
        raise DomainError("2 may not divide Q (h(2) is singular); N must be even")
    factors: dict[int, tuple[int, ...]] = {1: ()}
    stack = [(1, 0, ())]
    while stack:
        d, start, fs = stack.pop()
        for i in range(start, len(qs)):
            m = d * qs[i]
            if m > z:
                break
            factors[m] = fs + (qs[i],)
            stack.append((m, i + 1, fs + (qs[i],)))
    members = tuple(sorted(factors))
    return SieveSupport(N=N, epsilon=eps, z=z, sieve_primes=qs, members=members, factors=factors)


@dataclass(frozen=True)
class SelbergWeights:
    support: SieveSupport
    lam: dict[int, float]
    g_value: float

    def __getitem__(self, d: int) -> float:
        return self.lam.get(d, 0.0)

    @property
    def lambda_max(self) -> float:
        return max(abs(v) for v in self.lam.values())


def _h(fs: tuple[int, ...]) -> float:
    out = 1.0
    for p in fs:
        out /= p - 2
    return out


def check_weights(w: SelbergWeights) -> None:
    """Raise InvariantError unless the three weight properties hold."""
    sup = w.support
    if w.lam.get(1) != 1.0:
        raise InvariantError("lambda_1 == 1", f"lambda_1 = {w.lam.get(1)}")
    for d, v in w.lam.items():
        if d > sup.z or d not in sup.factors:
            raise InvariantError("support", f"lambda_{d} set outside d <= z, d | Q")
        if abs(v) > 1.0 + LAMBDA_SLACK:
            raise InvariantError("|lambda_d| <= 1", f"lambda_{d} = {v!r}")
        mu = -1 if len(sup.factors[d]) % 2 else 1
        if v != 0.0 and (v > 0) != (mu > 0):
            raise InvariantError("sign(lambda_d) == mu(d)", f"d = {d}, lambda = {v}")


def compute_weights(N: int, epsilon=DEFAULT_EPSILON, z: int | None = None) -> SelbergWeights:
    """Selberg weights for level z (default from N and epsilon).

    ``z`` overrides the sieve level; it exists for hand-checkable test cases.
    """
    sup = build_support(N, epsilon, z)
    hs = {d: _h(fs) for d, fs in sup.factors.items()}
    members = sup.members
    G = math.fsum(hs[d] for d in members)
    lam: dict[int, float] = {}
    for d in members:
        fs = sup.factors[d]
        limit = sup.z // d
        if d == 1:
            Gd = G
        else:
            Gd = math.fsum(
                hs[m]
                for m in members
                if m <= limit and not any(p in fs for p in sup.factors[m])
            )
        scale = 1.0
        for p in fs:
            scale *= (p - 1) / (p - 2)
        sign = -1.0 if len(fs) % 2 else 1.0
        lam[d] = sign * scale * Gd / G
    w = SelbergWeights(support=sup, lam=lam, g_value=G)
    check_weights(w)
    return w


def _phi(fs: tuple[int, ...]) -> int:
    out = 1
    for p in fs:
        out *= p - 1
    return out


def quadratic_form_direct(w: SelbergWeights) -> float:
    """Double sum over (d1, d2) of lambda lambda / phi([d1, d2])."""
    sup = w.support
    ds = np.array(sup.members, dtype=np.int64)
    phi = np.zeros(sup.z + 1, dtype=np.float64)
    for d, fs in sup.factors.items():
        phi[d] = _phi(fs)
    lam = np.array([w.lam[d] for d in sup.members])
    g = np.gcd.outer(ds, ds)
    # squarefree: phi(lcm) = phi(d1) phi(d2) / phi(gcd)
    terms = np.outer(lam / phi[ds], lam / phi[ds]) * phi[g]
    return math.fsum(terms.ravel().tolist())


def quadratic_form_diagonal(w: SelbergWeights) -> float:
    """Same sum through 1/phi([d1,d2]) = sum_{e | (d1,d2)} psi(e) / (phi(d1) phi(d2)),
    psi(e) = prod (p - 2), which turns it into sum_e psi(e) y_e^2."""
    sup = w.support
    y: dict[int, float] = {}
    for d, fs in sup.factors.items():
        t = w.lam[d] / _phi(fs)
        divisors = [1]
        for p in fs:
            divisors += [e * p for e in divisors]
        for e in divisors:
            y[e] = y.get(e, 0.0) + t
    return math.fsum(y[e] ** 2 / _h(sup.factors[e]) for e in y)


def quadratic_form(w: SelbergWeights, rtol: float = 1e-9) -> float:
    if len(w.support.members) <= DIRECT_LIMIT:
        value = quadratic_form_direct(w)
    else:
        value = quadratic_form_diagonal(w)
    if not math.isclose(value, 1.0 / w.g_value, rel_tol=rtol):
        raise InvariantError("quadratic form == 1/G(z)", f"{value!r} vs {1.0 / w.g_value!r}")
    return value


@dataclass(frozen=True)
class QuadraticFormTrend:
    N: int
    epsilon: Fraction
    z: int
    quadratic_form: float
    singular_series: float
    ratio: float  # quadratic_form * log N / S(N)
    limit: float  # 8 / (1 - 2 epsilon)
    log_z_ratio: float  # quadratic_form / (2 S(N) / log z)


def lemma3_trend(N: int, epsilon=DEFAULT_EPSILON) -> QuadraticFormTrend:
    w = compute_weights(N, epsilon)
    qf = quadratic_form(w)
    s = singular_series(N).value
    eps = w.support.epsilon
    return QuadraticFormTrend(
        N=N,
        epsilon=eps,
        z=w.support.z,
        quadratic_form=qf,
        singular_series=s,
        ratio=qf * math.log(N) / s,
        limit=8.0 / (1.0 - 2.0 * float(eps)),
        log_z_ratio=qf * math.log(w.support.z) / (2.0 * s),
    )
