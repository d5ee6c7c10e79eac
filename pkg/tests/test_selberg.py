import math
import random
from fractions import Fraction

import pytest

from chensieve.errors import DomainError
from chensieve.primes import factorize
from chensieve.selberg import (
    build_support,
    compute_weights,
    lemma3_trend,
    quadratic_form,
    quadratic_form_diagonal,
    quadratic_form_direct,
    sieve_level,
)


def phi_sqfree(n):
    return math.prod(p - 1 for p in factorize(n).primes)


def brute_quadratic_form(w):
    ds = list(w.lam)
    return math.fsum(
        w.lam[a] * w.lam[b] / phi_sqfree(a * b // math.gcd(a, b)) for a in ds for b in ds
    )


def test_hand_case():
    w = compute_weights(2, z=3)
    assert w.support.members == (1, 3)
    assert w.g_value == 2.0
    assert w.lam == {1: 1.0, 3: -1.0}
    assert quadratic_form(w) == pytest.approx(0.5, abs=1e-15)


def test_single_element_support():
    # z = 2 and 2 | N leaves Q = 1
    w = compute_weights(10**6, z=2)
    assert w.support.members == (1,)
    assert quadratic_form(w) == 1.0


def test_lambda_one_is_one():
    for N in (18, 100, 10**4, 10**6 + 2, 2 * 3 * 5 * 7 * 11 * 13 * 17):
        assert compute_weights(N).lam[1] == 1.0


def test_sieve_level_exact():
    # z = floor(N^(49/200)) checked by integer powers
    for N in (18, 10**4, 10**8, 10**12, 2**80):
        z = sieve_level(N)
        assert z**200 <= N**49 < (z + 1) ** 200
    assert sieve_level(16) == 1
    assert sieve_level(18) == 2


def test_small_level_rejected():
    with pytest.raises(DomainError):
        compute_weights(16)


def test_odd_N_rejected():
    with pytest.raises(DomainError):
        compute_weights(10**4 + 1)


def test_support_members():
    sup = build_support(10**6)
    for d in sup.members:
        fac = factorize(d)
        assert fac.squarefree and d <= sup.z
        assert all(10**6 % p and p <= sup.z for p in fac.primes)
    expect = [d for d in range(1, sup.z + 1) if factorize(d).squarefree and math.gcd(d, 10**6) == 1]
    assert list(sup.members) == expect
    assert 1 in sup and 4 not in sup and 5 not in sup


def test_weights_at_1e6_bounded():
    w = compute_weights(10**6, Fraction(1, 100))
    assert max(abs(v) for v in w.lam.values()) <= 1.0


@pytest.mark.parametrize("N", [10**4, 10**6, 12345678, 10**8])
def test_quadratic_form_routes(N):
    w = compute_weights(N)
    inv_g = 1.0 / w.g_value
    assert quadratic_form_direct(w) == pytest.approx(inv_g, rel=1e-9)
    assert quadratic_form_diagonal(w) == pytest.approx(inv_g, rel=1e-9)
    assert brute_quadratic_form(w) == pytest.approx(inv_g, rel=1e-9)


def test_quadratic_form_all_small_levels():
    rng = random.Random(3)
    for z in range(2, 200, 7):
        N = 2 * rng.randint(1, 10**6)
        w = compute_weights(N, z=z)
        assert quadratic_form_direct(w) == pytest.approx(1.0 / w.g_value, rel=1e-9)


def test_G_monotone_in_z():
    N = 2 * 3 * 10**5
    gs = [compute_weights(N, z=z).g_value for z in range(2, 120)]
    assert all(b >= a for a, b in zip(gs, gs[1:]))


def test_removing_prime_never_increases_G():
    rng = random.Random(9)
    for _ in range(30):
        N = 2 * rng.randint(10**3, 10**6)
        z = rng.randint(5, 150)
        g = compute_weights(N, z=z).g_value
        for p in (3, 5, 7, 11, 13):
            assert compute_weights(N * p, z=z).g_value <= g


def test_trend_report():
    t4 = lemma3_trend(10**4)
    t8 = lemma3_trend(10**8)
    assert t4.ratio > 0 and t8.ratio > 0
    assert t8.ratio > t4.ratio
    assert abs(t8.ratio - t8.limit) < abs(t4.ratio - t4.limit)
    assert t4.limit == pytest.approx(8 / 0.98)
    # 8/(1 - 2 eps) is 2 log N / log z with log z = (1/4 - eps/2) log N
    assert t8.limit == pytest.approx(2 / (0.25 - 0.005))
