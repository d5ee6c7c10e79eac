"""Command-line checks and scans for the Chen sieve computations.

    chensieve verify integral --tol 1e-8
    chensieve verify selberg --n 1000000 --epsilon 1/100
    chensieve verify muomega --max-n 10000
    chensieve verify mertens --x 10000000
    chensieve count wn|omega|p3 --n 100
    chensieve scan chen --start 6 --end 1000
    chensieve decompose --n 10000 --epsilon 1/100
    chensieve bv --x 10000 --b 1
    chensieve mvt --n 10000 --b 1
    chensieve r1 --n 10000 --epsilon 1/100

Exit status: 0 when every checked invariant holds, 1 when one fails
(named on stderr), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import arithmetic, chen, error_terms, quadrature, selberg
from .errors import CapacityError, DomainError, InvariantError
from .primes import shared_primes
from .report import Report
from .singular import singular_series

MERTENS_B1 = 0.2614972128476428
LI_RTOL = "1e-10 rel"
SN_TOL = "tail_bound rel"


def parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if not 0 < eps < Fraction(1, 2) or eps.denominator > 10**6:
        raise argparse.ArgumentTypeError("epsilon must be p/q in (0, 1/2) with q <= 10^6")
    return eps


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="file path, or - for stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    return p


def _eps_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=parse_epsilon, default=Fraction(1, 100))


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="chensieve", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify").add_subparsers(dest="target", required=True)
    p = verify.add_parser("integral", parents=[common])
    p.add_argument("--tol", type=float, default=1e-8)
    p = verify.add_parser("selberg", parents=[common])
    p.add_argument("--n", type=int, required=True)
    _eps_arg(p)
    p = verify.add_parser("muomega", parents=[common])
    p.add_argument("--max-n", type=int, required=True)
    p = verify.add_parser("mertens", parents=[common])
    p.add_argument("--x", type=int, required=True)

    count = sub.add_parser("count").add_subparsers(dest="target", required=True)
    for name in ("wn", "omega", "p3"):
        p = count.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, required=True)

    scan = sub.add_parser("scan").add_subparsers(dest="target", required=True)
    p = scan.add_parser("chen", parents=[common])
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)

    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("--n", type=int, required=True)
    _eps_arg(p)
    p = sub.add_parser("bv", parents=[common])
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--b", type=float, required=True)
    p = sub.add_parser("mvt", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=float, required=True)
    p = sub.add_parser("r1", parents=[common])
    p.add_argument("--n", type=int, required=True)
    _eps_arg(p)
    return parser


def _config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("output", "threads")}
    return cfg


def cmd_integral(args) -> Report:
    rep = Report("verify integral", _config(args), ["method", "value", "abs_error_estimate", "bound", "status"])
    a = quadrature.chen_integral(args.tol)
    b = quadrature.chen_integral_2d(args.tol)
    for r in (a, b):
        status = "PASS" if r.value < quadrature.CHEN_BOUND else "FAIL"
        rep.add(method=r.method, value=r.value, abs_error_estimate=r.abs_error_estimate,
                bound=quadrature.CHEN_BOUND, status=status)
        if status == "FAIL":
            rep.fail(f"{r.method}: integral >= {quadrature.CHEN_BOUND}")
    if abs(a.value - b.value) > a.abs_error_estimate + b.abs_error_estimate + 1e-12:
        rep.fail("closed-form-inner and full-2d disagree")
    rep.tolerances = {"value": f"{args.tol:g} abs"}
    return rep


def cmd_selberg(args) -> Report:
    cols = ["N", "epsilon", "z", "support_size", "G", "quadratic_form", "inv_G",
            "lambda_max", "ratio", "limit", "S_N"]
    rep = Report("verify selberg", _config(args), cols)
    w = selberg.compute_weights(args.n, args.epsilon)
    qf = selberg.quadratic_form(w)
    direct = selberg.quadratic_form_direct(w)
    diag = selberg.quadratic_form_diagonal(w)
    if not math.isclose(direct, diag, rel_tol=1e-9):
        rep.fail("quadratic form: direct != diagonal")
    t = selberg.lemma3_trend(args.n, args.epsilon)
    rep.add(N=args.n, epsilon=w.support.epsilon, z=w.support.z, support_size=len(w.support.members),
            G=w.g_value, quadratic_form=qf, inv_G=1.0 / w.g_value, lambda_max=w.lambda_max,
            ratio=t.ratio, limit=t.limit, S_N=t.singular_series)
    rep.tolerances = {"quadratic_form": "1e-9 rel vs inv_G", "S_N": SN_TOL}
    return rep


def cmd_muomega(args) -> Report:
    rep = Report("verify muomega", _config(args), ["max_n", "A", "checked", "mismatches", "max_rel_diff"])
    for A in (1.0, 3.0):
        worst, bad = 0.0, 0
        for n in range(1, args.max_n + 1):
            d = arithmetic.divisor_weight_sum_direct(n, A)
            p = arithmetic.divisor_weight_product(n, A)
            rel = abs(d - p) / p
            worst = max(worst, rel)
            bad += rel > 1e-12
        rep.add(max_n=args.max_n, A=A, checked=args.max_n, mismatches=bad, max_rel_diff=worst)
        if bad:
            rep.fail(f"divisor weight sum != Euler product (A={A:g})")
    rep.tolerances = {"max_rel_diff": "1e-12 rel"}
    return rep


def cmd_mertens(args) -> Report:
    rep = Report("verify mertens", _config(args), ["x", "sum", "b1_estimate", "B1", "deviation", "bound"])
    r = arithmetic.mertens_sum(args.x, shared_primes(args.x))
    dev = r.b1_estimate - MERTENS_B1
    bound = 1.0 / math.log(args.x) ** 2
    rep.add(x=args.x, sum=r.sum, b1_estimate=r.b1_estimate, B1=MERTENS_B1, deviation=dev, bound=bound)
    if abs(dev) > bound:
        rep.fail("|sum - loglog x - B1| <= 1/log^2 x")
    rep.tolerances = {"sum": "compensated (fsum) exact rounding"}
    return rep


def cmd_count(args) -> Report:
    key = {"wn": "W", "omega": "Omega", "p3": "p3"}[args.target]
    rep = Report(f"count {args.target}", _config(args), ["N", key])
    fn = {"wn": chen.count_W, "omega": chen.omega_sum, "p3": chen.count_p3}[args.target]
    rep.add(N=args.n, **{key: fn(args.n)})
    rep.tolerances = {key: "exact"}
    return rep


SCAN_COLUMNS = ["N", "W", "le2", "p3", "square_case", "window_power", "W_mult", "Omega",
                "margin", "omega_over_p3", "S_N", "W_norm", "Omega_norm"]


def _scan_rows(bounds: tuple[int, int]) -> list[dict]:
    start, end = bounds
    omegas = chen.omega_scan(end)
    rows = []
    for N in range(start, end + 1, 2):
        r = chen.chen_margin(N, omega=int(omegas[N]))
        s = singular_series(N).value
        norm = s * N / math.log(N) ** 2
        rows.append(dict(
            N=N, W=r.W, le2=r.le2_count, p3=r.p3_count, square_case=r.square_case_count,
            window_power=r.window_power_count, W_mult=r.W_multiplicity, Omega=r.omega,
            margin=r.margin, omega_over_p3=(r.omega / r.p3_count) if r.p3_count else "",
            S_N=s, W_norm=r.W / norm, Omega_norm=r.omega / norm,
        ))
    return rows


def cmd_scan(args) -> Report:
    if args.start > args.end:
        raise DomainError("--start must not exceed --end")
    start = max(6, args.start + (args.start % 2))
    rep = Report("scan chen", _config(args), SCAN_COLUMNS)
    threads = max(1, args.threads)
    evens = list(range(start, args.end + 1, 2))
    if threads == 1 or len(evens) < 2000:
        rows = _scan_rows((start, args.end)) if evens else []
    else:
        step = -(-len(evens) // threads)
        chunks = [(evens[i], evens[min(i + step, len(evens)) - 1]) for i in range(0, len(evens), step)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = [row for part in pool.map(_scan_rows, chunks) for row in part]
    for row in rows:
        rep.add(**row)
        if row["le2"] < 1:
            rep.fail(f"no {{1,2}} witness at N={row['N']}")
    rep.tolerances = {"S_N": SN_TOL, "W_norm": SN_TOL, "Omega_norm": SN_TOL}
    return rep


def cmd_decompose(args) -> Report:
    cols = ["N", "epsilon", "z", "support_size", "M", "M1", "R", "R_bound_rhs", "Omega",
            "coprime_count", "boundary_count", "omega_literal_bound"]
    rep = Report("decompose", _config(args), cols)
    d = chen.decompose_M(args.n, args.epsilon)
    literal = d.M + args.n ** (2 / 3) * d.z
    if d.omega > literal:
        rep.fail("Omega <= M + N^(2/3) z")
    rep.add(N=d.N, epsilon=d.epsilon, z=d.z, support_size=d.support_size, M=d.M, M1=d.M1, R=d.R,
            R_bound_rhs=d.R_bound_rhs, Omega=d.omega, coprime_count=d.coprime_count,
            boundary_count=d.boundary_count, omega_literal_bound=literal)
    rep.tolerances = {"M": "1e-6 rel vs M1+R", "M1": LI_RTOL, "R": LI_RTOL}
    return rep


def _sum_report(name: str, args, r: error_terms.ErrorSumReport) -> Report:
    rep = Report(name, _config(args), ["x", "B", "modulus_cutoff", "q", "contribution", "y_argmax", "l_argmax"])
    for q, c in r.per_modulus:
        y, l = r.argmax[q]
        rep.add(x=r.x, B=r.B, modulus_cutoff=r.modulus_cutoff, q=q, contribution=c, y_argmax=y, l_argmax=l)
    rep.add(x=r.x, B=r.B, modulus_cutoff=r.modulus_cutoff, q="total", contribution=r.total,
            y_argmax="", l_argmax="")
    rep.tolerances = {"contribution": LI_RTOL, "y_grid": r.y_grid}
    return rep


def cmd_bv(args) -> Report:
    return _sum_report("bv", args, error_terms.bv_sum(args.x, args.b))


def cmd_mvt(args) -> Report:
    return _sum_report("mvt", args, error_terms.mvt_sum(args.n, args.b))


def cmd_r1(args) -> Report:
    cols = ["N", "epsilon", "z", "d_count", "d_mode", "R1", "scale", "ratio", "max_pi_common",
            "fact_i_violations", "fact_ii_violations", "widened_violations"]
    rep = Report("r1", _config(args), cols)
    r = error_terms.r1_direct(args.n, args.epsilon, seed=args.seed)
    rep.add(N=r.N, epsilon=r.epsilon, z=r.z, d_count=r.d_count, d_mode=r.d_mode, R1=r.value,
            scale=r.scale, ratio=r.ratio, max_pi_common=r.max_pi_common,
            fact_i_violations=len(r.fact_i_violations), fact_ii_violations=len(r.fact_ii_violations),
            widened_violations=len(r.widened_violations))
    if r.fact_i_violations:
        rep.fail("fact (i): pi(N; a, d, N) <= 1 when (a, d) > 1")
    if r.fact_ii_violations:
        d, lhs, rhs = r.fact_ii_violations[0]
        rep.fail(f"fact (ii): sum f(a)/a <= p2 <= N^(2/5) bound (first at d={d}: {lhs:.6g} > {rhs:.6g})")
    rep.tolerances = {"R1": LI_RTOL, "fact_ii": "exact rational"}
    return rep


COMMANDS = {
    ("verify", "integral"): cmd_integral,
    ("verify", "selberg"): cmd_selberg,
    ("verify", "muomega"): cmd_muomega,
    ("verify", "mertens"): cmd_mertens,
    ("count", "wn"): cmd_count,
    ("count", "omega"): cmd_count,
    ("count", "p3"): cmd_count,
    ("scan", "chen"): cmd_scan,
    ("decompose", None): cmd_decompose,
    ("bv", None): cmd_bv,
    ("mvt", None): cmd_mvt,
    ("r1", None): cmd_r1,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[(args.command, getattr(args, "target", None))]
    try:
        rep = handler(args)
    except (DomainError, CapacityError) as exc:
        parser.print_usage(sys.stderr)
        print(f"chensieve: error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"FAIL {exc.name}: {exc}", file=sys.stderr)
        return 1
    text = rep.render(args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    for name in rep.failures:
        print(f"FAIL {name}", file=sys.stderr)
    if rep.ok:
        print("PASS", file=sys.stderr)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
