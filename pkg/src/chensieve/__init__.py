"""Desk-scale computations around the switched-sum proof of Chen's theorem."""

__version__ = "0.1.0"

from .arithmetic import (
    divisor_weight_sum,
    lcm_pair_count,
    li,
    mertens_sum,
    segment_reciprocal_sum,
)
from .chen import (
    chen_margin,
    count_p3,
    count_W,
    decompose_M,
    enumerate_f_support,
    omega_scan,
    omega_sum,
)
from .error_terms import bv_sum, delta, mvt_sum, pi_progression, pi_scaled, r1_direct
from .errors import AccuracyError, CapacityError, DomainError, InvariantError
from .primes import factorize, multiplicative_basics, power_exceeds, sieve_primes, spf_table
from .quadrature import chen_integral, chen_integral_2d, discrete_sum_side, inner_integral
from .selberg import compute_weights, lemma3_trend, quadratic_form
from .singular import singular_series, twin_prime_constant

__all__ = [
    "AccuracyError",
    "CapacityError",
    "DomainError",
    "InvariantError",
    "bv_sum",
    "chen_integral",
    "chen_integral_2d",
    "chen_margin",
    "compute_weights",
    "count_W",
    "count_p3",
    "decompose_M",
    "delta",
    "discrete_sum_side",
    "divisor_weight_sum",
    "enumerate_f_support",
    "factorize",
    "inner_integral",
    "lcm_pair_count",
    "lemma3_trend",
    "li",
    "mertens_sum",
    "multiplicative_basics",
    "mvt_sum",
    "omega_scan",
    "omega_sum",
    "pi_progression",
    "pi_scaled",
    "power_exceeds",
    "quadratic_form",
    "r1_direct",
    "segment_reciprocal_sum",
    "sieve_primes",
    "singular_series",
    "spf_table",
    "twin_prime_constant",
]
