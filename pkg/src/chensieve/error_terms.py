"""Primes in progressions, the error Delta(x; a, q, l), desk-scale mean-value
sums, and the remainder R1 over pairs with gcd(a, d) > 1."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arithmetic import li
from .chen import enumerate_f_support, squarefree_upto, thresholds
from .errors import CapacityError, DomainError
from .primes import as_fraction, factorize, floor_root, multiplicative_basics, shared_primes
from .selberg import DEFAULT_EPSILON, build_support, sieve_level

DESK_CAP = 10**6
GRID_POINTS = 64
FULL_D_LIMIT = 10**6


def pi_progression(x, q: int, l: int):
    """Number of primes p <= x with p = l (mod q); (l, q) = 1 is not required.

    ``x`` may be an integer or an integer array (evaluated elementwise).
    """
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    xs = np.asarray(x, dtype=np.int64)
    top = int(xs.max()) if xs.size else 0
    if top < 2:
        out = np.zeros(xs.shape, dtype=np.int64)
    else:
        ps = shared_primes(top).primes_upto(top)
        running = np.concatenate(([0], np.cumsum(ps % q == l % q)))
        out = running[np.searchsorted(ps, xs, side="right")]
    return int(out) if out.ndim == 0 else out


def pi_scaled(x: int, a: int, q: int, l: int) -> int:
    """Number of primes p with a p <= x and a p = l (mod q)."""
    if a < 1 or q < 1:
        raise DomainError(f"need a, q >= 1, got a={a}, q={q}")
    top = x // a
    if top < 2:
        return 0
    ps = shared_primes(top).primes_upto(top)
    return int(np.count_nonzero((a * ps - l) % q == 0))


def phi(q: int) -> int:
    return multiplicative_basics(q)[1]


def delta(x: int, a: int, q: int, l: int) -> float:
    """pi(x; a, q, l) - li(x/a)/phi(q)."""
    if not x > a:
        raise DomainError(f"delta needs x/a > 1, got x={x}, a={a}")
    return pi_scaled(x, a, q, l) - li(x / a) / phi(q)


def geometric_grid(x: int, points: int = GRID_POINTS) -> list[int]:
    """Integer y in [2, x], geometrically spaced, always including x."""
    if x < 2:
        raise DomainError(f"grid needs x >= 2, got {x}")
    ys = {int(round(v)) for v in np.geomspace(2, x, points)} | {x}
    return sorted(y for y in ys if 2 <= y <= x)


def modulus_cutoff(x: int, B: float) -> int:
    return int(math.floor(math.sqrt(x) / math.log(x) ** B))


@dataclass(frozen=True)
class ErrorSumReport:
    x: int
    B: float
    modulus_cutoff: int
    total: float
    per_modulus: list[tuple[int, float]]
    y_grid: str
    argmax: dict[int, tuple[int, int]] = field(default_factory=dict, repr=False)  # q -> (y, l)


def _check_cap(x: int, cap: int) -> None:
    if x > cap:
        raise CapacityError(f"x = {x} exceeds desk-scale cap {cap}")


def bv_sum(x: int, B: float, y_samples: int = GRID_POINTS, cap: int = DESK_CAP) -> ErrorSumReport:
    """sum_{q <= cutoff} max_{y in grid} max_{(l,q)=1} |pi(y; q, l) - li(y)/phi(q)|."""
    _check_cap(x, cap)
    cutoff = modulus_cutoff(x, B)
    ys = geometric_grid(x, y_samples)
    table = shared_primes(x)
    li_y = [li(y) for y in ys]
    idx = [table.pi(y) for y in ys]
    per, argmax = [], {}
    for q in range(1, cutoff + 1):
        residues = np.array([l for l in range(q) if math.gcd(l, q) == 1])
        ph = phi(q)
        counts = np.zeros(q, dtype=np.int64)
        best, where, prev = 0.0, (ys[0], int(residues[0])), 0
        for y, i, ly in zip(ys, idx, li_y):
            counts += np.bincount(table.primes[prev:i] % q, minlength=q)
            prev = i
            dev = np.abs(counts[residues] - ly / ph)
            k = int(np.argmax(dev))
            if dev[k] > best:
                best, where = float(dev[k]), (y, int(residues[k]))
        per.append((q, best))
        argmax[q] = where
    return ErrorSumReport(
        x=x,
        B=B,
        modulus_cutoff=cutoff,
        total=math.fsum(c for _, c in per),
        per_modulus=per,
        y_grid=f"geometric[2,{x}] points={y_samples} +endpoint; n={len(ys)}",
        argmax=argmax,
    )


def mvt_sum(N: int, B: float, y_samples: int = GRID_POINTS, cap: int = DESK_CAP) -> ErrorSumReport:
    """Weighted mean-value sum over squarefree q <= cutoff:

        3^omega(q) max_y max_{(l,q)=1} |sum_{(a,q)=1} f(a) Delta(y; a, q, l)|

    with a over the f-support of N.  Terms with a >= y vanish (no p has
    a p <= y, and the main term li(y/a) is only used for y/a > 1).
    """
    _check_cap(N, cap)
    cutoff = modulus_cutoff(N, B)
    ys = geometric_grid(N, y_samples)
    table = shared_primes(N)
    entries = enumerate_f_support(N, table)
    per, argmax = [], {}
    for q in range(1, cutoff + 1):
        mu, ph, w = multiplicative_basics(q)
        if mu == 0:
            continue
        residues = np.array([l for l in range(q) if math.gcd(l, q) == 1])
        best, where = 0.0, (ys[-1], int(residues[0]))
        use = [e.a for e in entries if math.gcd(e.a, q) == 1]
        for y in ys:
            acc = np.zeros(q)
            main = 0.0
            for a in use:
                if a >= y:
                    continue
                ps = table.primes[: table.pi(y // a)]
                acc += np.bincount((a * ps) % q, minlength=q)
                main += li(y / a)
            dev = np.abs(acc[residues] - main / ph)
            k = int(np.argmax(dev))
            if dev[k] > best:
                best, where = float(dev[k]), (y, int(residues[k]))
        per.append((q, 3**w * best))
        argmax[q] = where
    return ErrorSumReport(
        x=N,
        B=B,
        modulus_cutoff=cutoff,
        total=math.fsum(c for _, c in per),
        per_modulus=per,
        y_grid=f"geometric[2,{N}] points={y_samples} +endpoint; n={len(ys)}",
        argmax=argmax,
    )


@dataclass(frozen=True)
class R1Report:
    N: int
    epsilon: Fraction
    z: int
    d_count: int
    d_mode: str  # "full" or "sampled(seed=...)"
    value: float
    scale: float  # N^(9/10) log^2 N
    ratio: float
    max_pi_common: int  # largest pi(N; a, d, N) seen with gcd(a, d) > 1
    fact_i_violations: list[tuple[int, int, int]]  # (d, a, pi)
    fact_ii_violations: list[tuple[int, float, float]]  # (d, lhs, rhs)
    widened_violations: list[tuple[int, float, float]]  # same chain with p2 <= N^(9/20)
    p1_divides_N: list[int]


def _r1_ds(N: int, sup, seed: int) -> tuple[list[tuple[int, int]], str]:
    bound = math.isqrt(N)
    if N <= FULL_D_LIMIT:
        return squarefree_upto(sup.sieve_primes, bound), "full"
    primes_d = [(p, 1) for p in sup.sieve_primes if p <= bound]
    composite = [t for t in squarefree_upto(sup.sieve_primes, bound) if t[1] >= 2]
    rng = random.Random(seed)
    k = min(len(composite), 2000)
    picked = sorted(rng.sample(composite, k))
    return [(1, 0)] + primes_d + picked, f"sampled(seed={seed})"


def _exact_reciprocals(ps) -> Fraction:
    return sum((Fraction(1, int(p)) for p in ps), Fraction(0))


def _empty_r1(N: int, epsilon) -> R1Report:
    scale = N**0.9 * math.log(N) ** 2
    return R1Report(N, as_fraction(epsilon), sieve_level(N, epsilon), 1, "full", 0.0, scale, 0.0, 0, [], [], [], [])


def r1_direct(N: int, epsilon=DEFAULT_EPSILON, seed: int = 0) -> R1Report:
    """R1 = sum_{d | Q, d <= N^(1/2)} 3^omega(d) sum_{(a,d)>1} f(a) |Delta(N; a, d, N)|.

    Alongside the value, two intermediate statements are checked on every
    evaluated d and recorded when they fail:

    (i)  gcd(a, d) > 1 implies pi(N; a, d, N) <= 1;
    (ii) sum_{(a,d)>1} f(a)/a <= sum_{p1 | d, p1^10 > N} 1/p1 *
         sum_{p2^3 > N, p2^5 <= N^2} 1/p2.

    The ``widened`` check repeats (ii) with the p2 range extended to
    p2^20 <= N^9, which is where (N/p1)^(1/2) can actually reach.
    """
    if sieve_level(N, epsilon) < 2:
        # Q = 1: only d = 1, which never shares a factor with a
        return _empty_r1(N, epsilon)
    sup = build_support(N, epsilon)
    table = shared_primes(N)
    entries = enumerate_f_support(N, table)
    ds, mode = _r1_ds(N, sup, seed)
    t10, t3 = thresholds(N)
    p2_hi = floor_root(N, Fraction(2, 5))
    p2_wide = floor_root(N, Fraction(9, 20))
    # (ii) is compared in exact rationals; ties are common at small N
    p2_sum = _exact_reciprocals(table.primes[table.pi(t3) : table.pi(max(p2_hi, t3))])
    p2_sum_wide = _exact_reciprocals(table.primes[table.pi(t3) : table.pi(max(p2_wide, t3))])
    li_cache = {e.a: li(N / e.a) for e in entries}
    terms, viol_i, viol_ii, viol_w, p1_in_N = [], [], [], [], set()
    max_pi = 0
    for d, w in ds:
        if d == 1:
            continue
        ph = 1
        for p in factorize(d).primes:
            ph *= p - 1
        common = [e for e in entries if d % e.p1 == 0]
        inner = []
        for e in common:
            if N % e.p1 == 0:
                p1_in_N.add(e.p1)
            ps = table.primes[: table.pi(N // e.a)]
            cnt = int(np.count_nonzero((N - e.a * ps) % d == 0))
            max_pi = max(max_pi, cnt)
            if cnt > 1:
                viol_i.append((d, e.a, cnt))
            inner.append(abs(cnt - li_cache[e.a] / ph))
        terms.append(3**w * math.fsum(inner))
        lhs = sum((Fraction(1, e.a) for e in common), Fraction(0))
        p1_sum = _exact_reciprocals([p for p in factorize(d).primes if p > t10])
        if lhs > p1_sum * p2_sum:
            viol_ii.append((d, float(lhs), float(p1_sum * p2_sum)))
        if lhs > p1_sum * p2_sum_wide:
            viol_w.append((d, float(lhs), float(p1_sum * p2_sum_wide)))
    value = math.fsum(terms)
    scale = N ** 0.9 * math.log(N) ** 2
    return R1Report(
        N=N,
        epsilon=sup.epsilon,
        z=sup.z,
        d_count=len(ds),
        d_mode=mode,
        value=value,
        scale=scale,
        ratio=value / scale,
        max_pi_common=max_pi,
        fact_i_violations=viol_i,
        fact_ii_violations=viol_ii,
        widened_violations=viol_w,
        p1_divides_N=sorted(p1_in_N),
    )
