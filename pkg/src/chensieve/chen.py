"""Chen's counts for one even N: the f-support, W(N), the three-factor
pattern count, the switched sum Omega, and the M = M1 + R bookkeeping.

Conventions:

* p runs over primes p < N - 1, so m = N - p >= 2.
* W's "at most one prime factor in (N^(1/10), N^(1/3)]" counts distinct
  primes by default (``multiplicity=True`` counts with multiplicity).
* Survivors of W with at least three prime factors are split into the
  squarefree pattern ``p1 p2 p3`` and the "square case" (some prime
  repeated), so that W = le2 + p3 + square_case holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve

from .arithmetic import li
from .errors import DomainError, InvariantError
from .primes import (
    PrimeTable,
    floor_root,
    power_exceeds,
    shared_primes,
    shared_spf,
)
from .selberg import DEFAULT_EPSILON, compute_weights, quadratic_form

TENTH = Fraction(1, 10)
THIRD = Fraction(1, 3)
NO_PRIME = np.iinfo(np.int64).max


@dataclass(frozen=True)
class ASupportEntry:
    p1: int
    p2: int
    a: int


def thresholds(N: int) -> tuple[int, int]:
    """(floor(N^(1/10)), floor(N^(1/3))): q^10 > N iff q > t10, q^3 <= N iff q <= t3."""
    return floor_root(N, TENTH), floor_root(N, THIRD)


def is_support_pair(N: int, p1: int, p2: int) -> bool:
    return (
        power_exceeds(p1, 10, N)
        and not power_exceeds(p1, 3, N)
        and power_exceeds(p2, 3, N)
        and p1 * p2 * p2 <= N
    )


def enumerate_f_support(N: int, table: PrimeTable | None = None) -> list[ASupportEntry]:
    """All a = p1 p2 with N^(1/10) < p1 <= N^(1/3) < p2 <= (N/p1)^(1/2), ascending."""
    if N < 4:
        raise DomainError(f"N must be >= 4, got {N}")
    t10, t3 = thresholds(N)
    table = table or shared_primes(math.isqrt(N // 2) + 1)
    out = []
    for p1 in table.primes[table.pi(t10) : table.pi(t3)]:
        p1 = int(p1)
        top = math.isqrt(N // p1)
        for p2 in table.primes[table.pi(t3) : table.pi(top)]:
            p2 = int(p2)
            if not is_support_pair(N, p1, p2):
                raise InvariantError("support inequalities", f"N={N}, p1={p1}, p2={p2}")
            a = p1 * p2
            if a**3 > N * N:
                raise InvariantError("a <= N^(2/3)", f"N={N}, a={a}")
            out.append(ASupportEntry(p1=p1, p2=p2, a=a))
    return out


@dataclass(frozen=True)
class FactorArrays:
    """Per-integer factor statistics on [0, limit], derived from the spf table.

    ``first``/``second`` are the smallest and second smallest distinct
    primes (NO_PRIME when absent); ``first_exp`` is the exponent of
    ``first``; ``big_omega``/``omega`` count with/without multiplicity.
    """

    limit: int
    first: np.ndarray
    first_exp: np.ndarray
    second: np.ndarray
    big_omega: np.ndarray
    omega: np.ndarray
    squarefree: np.ndarray


_factor_cache: dict[str, FactorArrays] = {}


def factor_arrays(limit: int) -> FactorArrays:
    hit = _factor_cache.get("fa")
    if hit is not None and hit.limit >= limit:
        return hit
    # grow with the shared spf table (which doubles) so increasing scans
    # rebuild only O(log) times
    table = shared_spf(limit)
    limit = table.limit
    spf = table.spf
    n = limit + 1
    cur = np.arange(n, dtype=np.int64)
    cur[0] = 1
    first = np.full(n, NO_PRIME, dtype=np.int64)
    second = np.full(n, NO_PRIME, dtype=np.int64)
    first_exp = np.zeros(n, dtype=np.int64)
    big = np.zeros(n, dtype=np.int64)
    small = np.zeros(n, dtype=np.int64)
    sqf = np.ones(n, dtype=bool)
    last = np.zeros(n, dtype=np.int64)
    idx = np.flatnonzero(cur > 1)
    while idx.size:
        p = spf[cur[idx]]
        new = p != last[idx]
        small[idx] += new
        big[idx] += 1
        sqf[idx[~new]] = False
        is_first = new & (small[idx] == 1)
        is_second = new & (small[idx] == 2)
        first[idx[is_first]] = p[is_first]
        second[idx[is_second]] = p[is_second]
        first_exp[idx[small[idx] == 1]] += 1
        last[idx] = p
        cur[idx] //= p
        idx = idx[cur[idx] > 1]
    fa = FactorArrays(limit, first, first_exp, second, big, small, sqf)
    _factor_cache["fa"] = fa
    return fa


@dataclass(frozen=True)
class Classes:
    """Boolean masks over the primes p < N - 1 for one N."""

    N: int
    p: np.ndarray
    m: np.ndarray
    w: np.ndarray
    le2: np.ndarray
    p3: np.ndarray
    square: np.ndarray
    window_power: np.ndarray  # survivors whose window prime is repeated


def classify(N: int, multiplicity: bool = False) -> Classes:
    if N < 6 or N % 2:
        raise DomainError(f"N must be even and >= 6, got {N}")
    table = shared_primes(N)
    fa = factor_arrays(N)
    t10, t3 = thresholds(N)
    p = table.primes[: table.pi(N - 2)]
    m = N - p
    first, second, e1 = fa.first[m], fa.second[m], fa.first_exp[m]
    in_window = first <= t3
    no_small = first > t10
    if multiplicity:
        w = no_small & (~in_window | ((e1 == 1) & (second > t3)))
    else:
        w = no_small & (second > t3)
    big = fa.big_omega[m]
    le2 = w & (big <= 2)
    p3 = (big == 3) & (fa.omega[m] == 3) & no_small & in_window & (second > t3)
    square = w & (big >= 3) & ~fa.squarefree[m]
    window_power = w & in_window & (e1 >= 2)
    return Classes(N, p, m, w, le2, p3, square, window_power)


def count_W(N: int, multiplicity: bool = False) -> int:
    return int(classify(N, multiplicity).w.sum())


def count_p3(N: int) -> int:
    """Primes p with N - p = p1 p2 p3, N^(1/10) < p1 <= N^(1/3) < p2 < p3."""
    return int(classify(N).p3.sum())


def omega_sum(N: int) -> int:
    """Switched sum: pairs (a, p3) with a in the f-support, a p3 <= N, N - a p3 prime."""
    if N < 6:
        raise DomainError(f"N must be >= 6, got {N}")
    table = shared_primes(N)
    total = 0
    for e in enumerate_f_support(N, table):
        m = N - e.a * table.primes[: table.pi(N // e.a)]
        total += int(table.primality[m].sum())
    return total


def omega_scan(n_max: int) -> np.ndarray:
    """Omega(N) for every N in [0, n_max] in one pass (index = N, odd N included).

    For each admissible a the count of p3 with N - a p3 prime is the
    convolution of the prime indicator with the indicator of {a p3}; a
    only contributes on the N-interval where it lies in the f-support.
    """
    table = shared_primes(n_max)
    isp = table.primality[: n_max + 1].astype(np.float64)
    out = np.zeros(n_max + 1, dtype=np.int64)
    primes = table.primes
    for p1 in primes[: table.pi(floor_root(n_max, THIRD))]:
        p1 = int(p1)
        for p2 in primes[table.pi(p1) : table.pi(math.isqrt(n_max // p1))]:
            p2 = int(p2)
            lo = max(p1**3, p1 * p2 * p2)
            hi = min(p1**10, p2**3) - 1
            hi = min(hi, n_max)
            if lo > hi:
                continue
            a = p1 * p2
            mult = np.zeros(hi // a + 1, dtype=np.float64)
            mult[primes[: table.pi(hi // a)]] = 1.0
            spread = np.zeros(hi + 1, dtype=np.float64)
            spread[::a][: mult.size] = mult
            conv = fftconvolve(isp[: hi + 1], spread)[: hi + 1]
            out[lo : hi + 1] += np.rint(conv[lo : hi + 1]).astype(np.int64)
    return out


@dataclass(frozen=True)
class ChenCountReport:
    N: int
    W: int
    p3_count: int
    omega: int
    le2_count: int
    square_case_count: int
    margin: float
    window_power_count: int = 0
    W_multiplicity: int = 0


def chen_margin(N: int, epsilon=DEFAULT_EPSILON, omega: int | None = None) -> ChenCountReport:
    """Full count report for N; ``omega`` may be supplied by a scan."""
    c = classify(N)
    W, le2, p3, sq = int(c.w.sum()), int(c.le2.sum()), int(c.p3.sum()), int(c.square.sum())
    if W != le2 + p3 + sq:
        raise InvariantError("W == le2 + p3 + square_case", f"N={N}: {W} != {le2}+{p3}+{sq}")
    if np.any(c.p3 & ~c.w):
        raise InvariantError("p3 pattern survives W", f"N={N}")
    om = omega_sum(N) if omega is None else omega
    if p3 > om:
        raise InvariantError("count_p3 <= Omega", f"N={N}: {p3} > {om}")
    return ChenCountReport(
        N=N,
        W=W,
        p3_count=p3,
        omega=om,
        le2_count=le2,
        square_case_count=sq,
        margin=W - om / 2,
        window_power_count=int(c.window_power.sum()),
        W_multiplicity=count_W(N, multiplicity=True),
    )


@dataclass(frozen=True)
class OmegaDecomposition:
    N: int
    epsilon: Fraction
    z: int
    M: float
    M1: float
    R: float
    R_bound_rhs: float
    omega: int
    coprime_count: int  # (a, p) with N - a p coprime to Q
    boundary_count: int  # (a, p) with N - a p prime and sharing a factor with Q
    support_size: int
    lcm_classes: dict[int, float] = field(repr=False, default_factory=dict)


def squarefree_upto(primes: tuple[int, ...], bound: int) -> list[tuple[int, int]]:
    """(d, omega(d)) for squarefree d <= bound built from ``primes`` (ascending)."""
    out = [(1, 0)]
    stack = [(1, 0, 0)]
    while stack:
        d, start, w = stack.pop()
        for i in range(start, len(primes)):
            nd = d * primes[i]
            if nd > bound:
                break
            out.append((nd, w + 1))
            stack.append((nd, i + 1, w + 1))
    return sorted(out)


def _phi_sqfree(d: int, primes: tuple[int, ...]) -> int:
    out = 1
    for p in primes:
        if d % p == 0:
            out *= p - 1
    return out


def decompose_M(N: int, epsilon=DEFAULT_EPSILON, rtol: float = 1e-6) -> OmegaDecomposition:
    """Evaluate M directly and as M1 + R, and the bound on |R|.

    M sums (sum_{d | N - ap, d | Q} lambda_d)^2 over support a and primes
    a p <= N.  R groups lambda pairs by d = [d1, d2] and weights
    sum_a Delta(N; a, d, N).  Raises InvariantError if M != M1 + R or
    |R| exceeds the bound.
    """
    w = compute_weights(N, epsilon)
    sup = w.support
    eps = sup.epsilon
    qf = quadratic_form(w)
    table = shared_primes(N)
    entries = enumerate_f_support(N, table)
    members = sup.members
    lam = np.array([w.lam[d] for d in members])

    pair_weight: dict[int, float] = {}
    for i, d1 in enumerate(members):
        for j, d2 in enumerate(members):
            d = d1 * d2 // math.gcd(d1, d2)
            pair_weight[d] = pair_weight.get(d, 0.0) + lam[i] * lam[j]

    bound_level = floor_root(N, Fraction(1, 2) - eps)
    rhs_ds = squarefree_upto(sup.sieve_primes, bound_level)
    all_ds = sorted({d for d, _ in rhs_ds} | set(pair_weight))
    counts = {d: 0 for d in all_ds}
    li_sum_terms = []
    m_terms = []
    omega = coprime = boundary = 0
    Q = math.prod(sup.sieve_primes)
    for e in entries:
        ps = table.primes[: table.pi(N // e.a)]
        m = N - e.a * ps
        s = np.zeros(m.size)
        for k, d in enumerate(members):
            s += lam[k] * (m % d == 0)
        m_terms.extend((s * s).tolist())
        for d in all_ds:
            counts[d] += int(np.count_nonzero(m % d == 0))
        li_sum_terms.append(li(N / e.a))
        prime_m = table.primality[m]
        g = np.gcd(m, Q)
        omega += int(prime_m.sum())
        coprime += int(np.count_nonzero(g == 1))
        boundary += int(np.count_nonzero(prime_m & (g > 1)))
    li_total = math.fsum(li_sum_terms)
    M = math.fsum(m_terms)
    M1 = qf * li_total

    def weighted_delta(d: int) -> float:
        return counts[d] - li_total / _phi_sqfree(d, sup.sieve_primes)

    R = math.fsum(c * weighted_delta(d) for d, c in pair_weight.items())
    rhs = math.fsum(3**wd * abs(weighted_delta(d)) for d, wd in rhs_ds)
    if entries:
        if not math.isclose(M, M1 + R, rel_tol=rtol):
            raise InvariantError("M == M1 + R", f"N={N}: {M} vs {M1 + R}")
    if abs(R) > rhs * (1 + 1e-12) + 1e-9:
        raise InvariantError("|R| <= RHS", f"N={N}: |{R}| > {rhs}")
    if not omega <= coprime + boundary or coprime > M + 1e-9:
        raise InvariantError("Omega <= M + boundary", f"N={N}")
    return OmegaDecomposition(
        N=N,
        epsilon=eps,
        z=sup.z,
        M=M,
        M1=M1,
        R=R,
        R_bound_rhs=rhs,
        omega=omega,
        coprime_count=coprime,
        boundary_count=boundary,
        support_size=len(entries),
        lcm_classes=pair_weight,
    )
