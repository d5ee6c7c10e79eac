"""The double integral bounding the main term, and its discrete counterpart.

After the substitution alpha = log x / log N, beta = log y / log N the
main-term sum becomes (1/log N) times

    I = int_{1/10}^{1/3} dalpha/alpha int_{1/3}^{(1-alpha)/2} dbeta / (beta (1 - alpha - beta)).

The inner integral has the closed form log(2 - 3 alpha)/(1 - alpha), so I
is computed twice: once on the closed form and once as a genuine nested
2-D quadrature.  The published bound is I < 0.49254.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import AccuracyError, DomainError

CHEN_BOUND = 0.49254
ALPHA_LO = 0.1
ALPHA_HI = 1.0 / 3.0
MAX_DEPTH = 50
MAX_EVALS = 2_000_000


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abs_error_estimate: float
    method: str  # "closed-form-inner" or "full-2d"
    evaluations: int = 0


class _Counter:
    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    panels: int = 8,
    max_depth: int = MAX_DEPTH,
    counter: _Counter | None = None,
) -> tuple[float, float]:
    """Adaptive Simpson with Richardson correction.

    The absolute budget ``tol`` is split evenly over ``panels`` initial
    panels and halved at each bisection.  Returns ``(value, error_estimate)``.
    """
    if b == a:
        return 0.0, 0.0
    counter = counter if counter is not None else _Counter()

    def ev(x: float) -> float:
        counter.n += 1
        if counter.n > MAX_EVALS:
            raise AccuracyError("adaptive Simpson exceeded its evaluation budget")
        return f(x)

    total, err = [], []
    h = (b - a) / panels
    for i in range(panels):
        lo = a + i * h
        hi = b if i == panels - 1 else lo + h
        flo, fhi, fmid = ev(lo), ev(hi), ev(0.5 * (lo + hi))
        whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
        stack = [(lo, hi, flo, fmid, fhi, whole, tol / panels, 0)]
        while stack:
            lo_, hi_, fl, fm, fh, s, t, depth = stack.pop()
            mid = 0.5 * (lo_ + hi_)
            fl2, fr2 = ev(0.5 * (lo_ + mid)), ev(0.5 * (mid + hi_))
            left = (mid - lo_) / 6.0 * (fl + 4.0 * fl2 + fm)
            right = (hi_ - mid) / 6.0 * (fm + 4.0 * fr2 + fh)
            delta = left + right - s
            if abs(delta) <= 15.0 * t:
                total.append(left + right + delta / 15.0)
                err.append(abs(delta) / 15.0)
            elif depth >= max_depth:
                raise AccuracyError(f"no convergence on [{lo_}, {hi_}] at depth {depth}")
            else:
                stack.append((lo_, mid, fl, fl2, fm, left, t / 2.0, depth + 1))
                stack.append((mid, hi_, fm, fr2, fh, right, t / 2.0, depth + 1))
    return math.fsum(total), math.fsum(err)


def _check_alpha(alpha: float) -> None:
    if not ALPHA_LO <= alpha <= ALPHA_HI:
        raise DomainError(f"alpha must lie in [1/10, 1/3], got {alpha}")


def inner_integrand(alpha: float, beta: float) -> float:
    return 1.0 / (beta * (1.0 - alpha - beta))


def inner_integral(alpha: float) -> float:
    """Closed form of the beta integral from 1/3 to (1 - alpha)/2.

    Partial fractions, 1/(b(1-a-b)) = (1/b + 1/(1-a-b))/(1-a), give
    log(2 - 3 alpha)/(1 - alpha).
    """
    _check_alpha(alpha)
    return math.log(2.0 - 3.0 * alpha) / (1.0 - alpha)


def inner_integral_numeric(alpha: float, tol: float = 1e-12) -> float:
    _check_alpha(alpha)
    hi = (1.0 - alpha) / 2.0
    if hi <= ALPHA_HI:
        return 0.0
    value, _ = adaptive_simpson(lambda b: inner_integrand(alpha, b), ALPHA_HI, hi, tol, panels=2)
    return value


def chen_integrand(alpha: float) -> float:
    return math.log(2.0 - 3.0 * alpha) / (alpha * (1.0 - alpha))


def _check_tol(tolerance: float) -> None:
    if not 1e-12 <= tolerance <= 1e-4:
        raise DomainError(f"tolerance must lie in [1e-12, 1e-4], got {tolerance}")


def chen_integral(
    tolerance: float = 1e-10,
    lo: float = ALPHA_LO,
    hi: float = ALPHA_HI,
    panels: int = 8,
) -> IntegralResult:
    """Outer integral over alpha using the closed-form inner integral."""
    _check_tol(tolerance)
    c = _Counter()
    value, err = adaptive_simpson(chen_integrand, lo, hi, tolerance, panels=panels, counter=c)
    return IntegralResult(value=value, abs_error_estimate=err, method="closed-form-inner", evaluations=c.n)


def chen_integral_2d(
    tolerance: float = 1e-10,
    lo: float = ALPHA_LO,
    hi: float = ALPHA_HI,
    panels: int = 8,
) -> IntegralResult:
    """Nested adaptive quadrature of the original double integral.

    The inner beta integrals run at a tolerance 100x tighter than the
    outer budget so their noise stays below the outer error estimate.
    """
    _check_tol(tolerance)
    inner_tol = tolerance / 100.0
    c = _Counter()

    def outer(alpha: float) -> float:
        top = (1.0 - alpha) / 2.0
        if top <= ALPHA_HI:
            return 0.0
        v, _ = adaptive_simpson(
            lambda b: inner_integrand(alpha, b), ALPHA_HI, top, inner_tol * alpha, panels=2, counter=c
        )
        return v / alpha

    value, err = adaptive_simpson(outer, lo, hi, tolerance, panels=panels, counter=c)
    return IntegralResult(value=value, abs_error_estimate=err + inner_tol, method="full-2d", evaluations=c.n)


def discrete_sum_side(N: int) -> "DiscreteSide":
    """Sum over the f-support of 1/(a log(N/a)), and its ratio to the integral."""
    from .chen import enumerate_f_support

    entries = enumerate_f_support(N)
    logN = math.log(N)
    s = math.fsum(1.0 / (e.a * math.log(N / e.a)) for e in entries)
    return DiscreteSide(N=N, value=s, scaled=s * logN, ratio=s * logN / chen_integral().value, entries=len(entries))


@dataclass(frozen=True)
class DiscreteSide:
    N: int
    value: float
    scaled: float  # value * log N, to set against the integral
    ratio: float  # scaled / integral
    entries: int
