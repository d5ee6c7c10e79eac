import math
from fractions import Fraction
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from chensieve.arithmetic import (
    divisor_weight_product,
    divisor_weight_sum,
    divisor_weight_sum_direct,
    lcm_pair_count,
    li,
    mertens_sum,
    segment_primes,
    segment_reciprocal_sum,
)
from chensieve.errors import CapacityError, DomainError
from chensieve.primes import sieve_primes


def li_oracle(x):
    """Principal value by Cauchy-weighted quadrature around t = 1, plus the tail."""
    # 1/log t = (t - 1)/log t * 1/(t - 1); the first factor is smooth at t = 1
    def g(t):
        if t <= 0:
            return 0.0
        return 1.0 if t == 1 else (t - 1) / math.log(t)

    top = min(x, 2.0)
    pv, _ = quad(g, 0.0, top, weight="cauchy", wvar=1.0, epsabs=1e-14, epsrel=1e-14, limit=200)
    tail = 0.0
    if x > 2:
        tail, _ = quad(lambda t: 1 / math.log(t), 2.0, x, epsabs=0, epsrel=1e-13, limit=500)
    return pv + tail


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("x", [1.5, 2.0, 3.0, 10.0, 100.0, 1e4, 1e6])
def test_li_against_pv_quadrature(x):
    assert li(x) == pytest.approx(li_oracle(x), rel=1e-10)


@pytest.mark.parametrize("x", [1.1, 2.0, 10.0, 1e3, 1e8, 1e12])
def test_li_against_mpmath(x):
    assert li(x) == pytest.approx(float(mpmath.li(x)), rel=1e-12)


def test_li_examples():
    assert li(2) == pytest.approx(1.04516378, abs=1e-8)
    assert li(10) == pytest.approx(6.16560, abs=1e-5)
    ratio = li(1e6) / (1e6 / math.log(1e6))
    assert 1.0 <= ratio <= 1.10


@pytest.mark.parametrize("x", [1.0, 0.5, -3.0])
def test_li_domain(x):
    with pytest.raises(DomainError):
        li(x)


@settings(max_examples=200)
@given(st.floats(2.01, 1e9), st.floats(1e-6, 1e3))
def test_li_increment_bracket(x1, gap):
    x2 = x1 * (1 + gap)
    inc = li(x2) - li(x1)
    assert inc > 0
    lo = (x2 - x1) / math.log(x2)
    hi = (x2 - x1) / math.log(x1)
    assert lo * (1 - 1e-9) <= inc <= hi * (1 + 1e-9)


@pytest.fixture(scope="module")
def table():
    return sieve_primes(10**6)


def test_mertens_small(table):
    assert mertens_sum(2, table).sum == 0.5
    assert mertens_sum(10, table).sum == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7, abs=1e-15)
    assert mertens_sum(10, table).sum == pytest.approx(1.176190, abs=1e-6)


def test_mertens_b1_at_1e6(table):
    r = mertens_sum(10**6, table)
    assert r.b1_estimate == pytest.approx(0.2615, abs=0.002)


def test_mertens_monotone(table):
    sums = [mertens_sum(x, table).sum for x in (2, 3, 5, 7, 11, 100, 1000)]
    assert sums == sorted(sums) and len(set(sums)) == len(sums)


def test_mertens_errors(table):
    with pytest.raises(DomainError):
        mertens_sum(1, table)
    with pytest.raises(CapacityError):
        mertens_sum(10**7, table)


def test_segment_sum_brute_force(table):
    expect = math.fsum(1 / p for p in range(11, 101) if all(p % d for d in range(2, p)))
    assert segment_reciprocal_sum(100, Fraction(1, 2), 1, table) == pytest.approx(expect, rel=1e-15)


def test_segment_sum_limit(table):
    v = segment_reciprocal_sum(10**6, Fraction(1, 3), Fraction(2, 5), table)
    assert v == pytest.approx(math.log(6 / 5), abs=0.05)


def test_segment_sum_empty(table):
    # (100^(49/100), 100^(1/2)] = (9.55.., 10] holds no prime
    assert segment_reciprocal_sum(100, Fraction(49, 100), Fraction(1, 2), table) == 0.0


def test_segment_boundaries_exact(table):
    # 10^6^(1/3) = 100 exactly; 101 is the first prime above it
    ps = segment_primes(10**6, Fraction(1, 3), Fraction(1, 2), table)
    assert ps[0] == 101 and ps[-1] == 997


def test_segment_domain(table):
    with pytest.raises(DomainError):
        segment_reciprocal_sum(100, Fraction(1, 2), Fraction(1, 2), table)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 10**6),
    st.fractions(Fraction(1, 20), Fraction(1, 3), max_denominator=60),
    st.fractions(Fraction(1, 3), Fraction(2, 3), max_denominator=60),
    st.fractions(Fraction(2, 3), 1, max_denominator=60),
)
def test_segment_additivity(table, x, a, b, c):
    if not a < b < c:
        return
    left = segment_primes(x, a, b, table)
    right = segment_primes(x, b, c, table)
    whole = segment_primes(x, a, c, table)
    assert left.tolist() + right.tolist() == whole.tolist()
    s = segment_reciprocal_sum(x, a, b, table) + segment_reciprocal_sum(x, b, c, table)
    assert s == pytest.approx(segment_reciprocal_sum(x, a, c, table), rel=4e-16, abs=1e-300)


@pytest.mark.parametrize("n, A, expected", [(1, 1.0, 1.0), (1, 3.0, 1.0), (6, 3.0, 10.0)])
def test_divisor_weight_examples(n, A, expected):
    assert divisor_weight_sum(n, A) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("p", [2, 3, 97, 7919])
def test_divisor_weight_prime(p):
    assert divisor_weight_sum(p, 2.5) == pytest.approx(1 + 2.5 / (p - 1), rel=1e-15)


@given(st.integers(1, 10**7), st.floats(0.1, 5))
def test_divisor_weight_property(n, A):
    assert divisor_weight_sum_direct(n, A) == pytest.approx(divisor_weight_product(n, A), rel=1e-12)


def brute_lcm_pairs(d):
    divs = [k for k in range(1, d + 1) if d % k == 0]
    return sum(1 for a, b in product(divs, divs) if a * b // math.gcd(a, b) == d)


@pytest.mark.parametrize("d, expected", [(1, 1), (6, 9), (30, 27)])
def test_lcm_pair_examples(d, expected):
    assert lcm_pair_count(d) == expected == brute_lcm_pairs(d)


def test_lcm_pair_nonsquarefree():
    with pytest.raises(DomainError):
        lcm_pair_count(12)
