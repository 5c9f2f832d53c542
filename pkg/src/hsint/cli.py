"""Command-line front end.

Exit codes are a function of the result variant only:

    0  success (report, certificate, accepted certificate, all fixtures pass)
    1  invalid input (bad prime, syntax error, derivation not logarithmic, ...)
    2  both exponents divisible by p: a power_reduce report is printed instead
    3  integrate produced a LeapWitness
    4  integrate exceeded the branch budget
    5  verify rejected the certificate
    6  a fixture or a sweep cross-check disagreed
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from . import binomial
from .errors import BudgetExceeded, HSError, NotLogarithmic, ParseError, UsePowerReduce
from .ffpoly import PrimeField, default_names, is_prime
from .fixtures import FIXTURES, outcome, run_fixture
from .hsderiv import HSDerivation
from .logint import EXHAUSTIVE, GREEDY, IntegralCertificate, LeapWitness, integrate, is_logarithmic
from .parsing import format_derivation, parse_derivation, parse_poly

EXIT_OK, EXIT_INPUT, EXIT_POWER, EXIT_WITNESS, EXIT_BUDGET, EXIT_REJECTED, EXIT_MISMATCH = range(7)

SWEEP_COLUMNS = ["p", "n", "q", "tau", "alpha", "beta", "gamma", "s", "m_rem",
                 "leaps", "pieces", "certs"]


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def _prime(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _prime_list(text: str) -> List[int]:
    if not text.strip():
        return []
    return [int(t) for t in text.replace(";", ",").split(",") if t.strip()]


# ---------------------------------------------------------------------------
# classify / leaps

def _power_report(p, n, q, extra_tau=0):
    red = binomial.power_reduce(p, n, q)
    tau = red.tau + extra_tau
    rep = {"p": p, "n": n, "q": q}
    if extra_tau:
        red = binomial.PowerReduction(tau, red.n_reduced, red.q_reduced,
                                      frozenset(binomial.power_leaps(p, red.n_reduced,
                                                                     red.q_reduced, tau)),
                                      binomial.power_pieces(p, red.n_reduced, red.q_reduced, tau),
                                      p ** tau)
    rep["power_reduce"] = red.report()
    return rep


def run_classify(args, out) -> int:
    p, n, q, tau = args.p, args.n, args.q, args.tau
    try:
        if tau:
            if n % p == 0 and q % p == 0:
                _emit(_power_report(p, n, q, tau), out)
                return EXIT_OK
            pieces = binomial.power_pieces(p, n, q, tau)
            rep = binomial.classify(p, n, q).report()
            rep["tau"] = tau
            rep["pieces"] = [pc.as_dict() for pc in pieces]
            rep["leaps"] = sorted(binomial.power_leaps(p, n, q, tau))
            _emit(rep, out)
            return EXIT_OK
        _emit(binomial.classify(p, n, q).report(), out)
        return EXIT_OK
    except UsePowerReduce as exc:
        rep = _power_report(p, n, q)
        rep["hint"] = f"{exc}; rerun with --tau to query a Frobenius power explicitly"
        _emit(rep, out)
        return EXIT_POWER


def run_leaps(args, out) -> int:
    p, n, q, tau = args.p, args.n, args.q, args.tau
    if n % p == 0 and q % p == 0:
        red = binomial.power_reduce(p, n, q)
        values = binomial.power_leaps(p, red.n_reduced, red.q_reduced, red.tau + tau)
    else:
        values = binomial.power_leaps(p, n, q, tau)
    _emit({"p": p, "n": n, "q": q, "tau": tau, "leaps": sorted(values)}, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# integrate / verify

def _names(args, nvars):
    return tuple(args.vars.split(",")) if args.vars else default_names(nvars)


def run_integrate(args, out) -> int:
    names = _names(args, 2)
    h = parse_poly(args.h, args.p, len(names), names)
    delta = parse_derivation(args.delta, args.p, len(names), names)
    try:
        result = integrate(delta, h, args.length, args.bound, args.mode, args.budget)
    except NotLogarithmic as exc:
        _emit({"error": "not logarithmic", "residue": exc.residue.to_string(names)}, out)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        _emit({"error": "budget exceeded", "branches_explored": exc.explored}, out)
        return EXIT_BUDGET
    if isinstance(result, IntegralCertificate):
        rec = result.derivation.to_record()
        rec["variables"] = list(names)
        rec["images"] = [[[i, s[i].to_string(names)] for i in range(1, result.verified_to + 1)
                          if not s[i].is_zero()] for s in result.derivation.images]
        rec["h"] = h.to_string(names)
        rec["verified_to"] = result.verified_to
        rec["delta"] = format_derivation(delta, names)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(rec, fh, indent=2)
        _emit({"result": "certificate", "certificate": rec}, out)
        return EXIT_OK
    _emit({"result": "witness", "witness": result.to_record()}, out)
    return EXIT_WITNESS


def run_verify(args, out) -> int:
    try:
        with open(args.certificate) as fh:
            rec = json.load(fh)
    except OSError as exc:
        _emit({"error": f"cannot read {args.certificate}: {exc.strerror}"}, out)
        return EXIT_INPUT
    D = HSDerivation.from_record(rec)
    text = args.h if args.h is not None else rec.get("h")
    if text is None:
        _emit({"error": "no polynomial h given"}, out)
        return EXIT_INPUT
    h = parse_poly(text, D.field, D.nvars, D.names)
    report = is_logarithmic(D, h)
    if report.ok:
        _emit({"result": "accepted", "length": D.length, "h": h.to_string(D.names)}, out)
        return EXIT_OK
    i, residue = report.first_failure
    _emit({"result": "rejected", "failed_at": i, "residue": residue.to_string(D.names)}, out)
    return EXIT_REJECTED


# ---------------------------------------------------------------------------
# sweep

def _row_pieces(p, n, q, tau):
    """(total tau, reduced n, reduced q, pieces, leaps, base module)."""
    if n % p == 0 and q % p == 0:
        red = binomial.power_reduce(p, n, q)
        T, n2, q2 = red.tau + tau, red.n_reduced, red.q_reduced
    else:
        T, n2, q2 = tau, n, q
    pieces = binomial.power_pieces(p, n2, q2, T)
    return T, n2, q2, pieces, binomial.power_leaps(p, n2, q2, T), binomial.classify(p, n2, q2)


def cross_check(p, n2, q2, T, pieces, upto) -> List[str]:
    """Search-based confirmation of every leap b <= upto; returns mismatch descriptions."""
    h = binomial.binomial_curve(p, n2, q2)
    if T:
        h = h.frobenius(T)
    problems = []
    for prev, nxt in zip(pieces, pieces[1:]):
        b = nxt.lo
        if b > upto:
            break
        for g in prev.generators:
            want = "witness:%d" % b if g in prev.dropped else None
            got = outcome(integrate(g, h, b - 1, search=EXHAUSTIVE))
            if got != f"cert:{b - 1}":
                problems.append(f"{format_derivation(g)} to {b - 1}: {got}")
            if want:
                got = outcome(integrate(g, h, b, search=EXHAUSTIVE))
                if got != want:
                    problems.append(f"{format_derivation(g)} at {b}: {got}")
        for g in nxt.generators:
            got = outcome(integrate(g, h, b, search=EXHAUSTIVE))
            if got != f"cert:{b}":
                problems.append(f"{format_derivation(g)} to {b}: {got}")
    return problems


def sweep_row(point):
    p, n, q, tau, upto = point
    inv = binomial.invariants(p, n, q)
    T, n2, q2, pieces, leaps, base = _row_pieces(p, n, q, tau)
    summary = "|".join(f"{pc.lo}-{'inf' if pc.hi == binomial.INF else int(pc.hi)}:"
                       + ",".join(format_derivation(g) for g in pc.generators) for pc in pieces)
    certs = ";".join(sorted({c.kind for c in base.certificates}))
    row = {"p": p, "n": n, "q": q, "tau": tau, "alpha": inv.alpha,
           "beta": "" if inv.beta is None else inv.beta,
           "gamma": "" if inv.gamma is None else inv.gamma,
           "s": inv.s, "m_rem": inv.m_rem, "leaps": ";".join(str(b) for b in sorted(leaps)),
           "pieces": summary, "certs": certs}
    problems = cross_check(p, n2, q2, T, pieces, upto) if upto else []
    return row, problems


def sweep_points(primes, n_max, q_max, tau_max, upto=0):
    for p in primes:
        for n in range(1, n_max + 1):
            for q in range(1, q_max + 1):
                for tau in range(tau_max + 1):
                    yield (p, n, q, tau, upto)


def run_sweep(args, out) -> int:
    for p in args.primes:
        if not is_prime(p):
            PrimeField(p)
    points = list(sweep_points(args.primes, args.n_max, args.q_max, args.tau_max,
                               args.verify_upto))
    if args.jobs > 1 and points:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(sweep_row, points))
    else:
        results = [sweep_row(pt) for pt in points]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    problems = []
    for row, probs in results:
        writer.writerow(row)
        problems += [f"p={row['p']} n={row['n']} q={row['q']} tau={row['tau']}: {m}" for m in probs]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            raise HSError(f"cannot write {args.out}: {exc.strerror}")
    else:
        out.write(buf.getvalue())
    if problems:
        sys.stderr.write("\n".join(problems) + "\n")
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# examples

def run_examples(args, out) -> int:
    names = [args.name] if args.name else list(FIXTURES)
    if args.name and args.name not in FIXTURES:
        out.write(f"unknown fixture {args.name!r}; choose from {', '.join(FIXTURES)}\n")
        return EXIT_INPUT
    failed = 0
    for name in names:
        for check in run_fixture(name):
            status = "PASS" if check.ok else "FAIL"
            line = f"{status} {name}: {check.label}"
            if not check.ok:
                failed += 1
                line += f" (expected {check.expected!r}, got {check.observed!r})"
            out.write(line + "\n")
    out.write(f"{'all fixtures pass' if not failed else f'{failed} check(s) failed'}\n")
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsint",
                                     description="Integrable derivations along plane curves over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="piecewise module of i-integrable derivations of x^n - y^q")
    c.add_argument("--p", type=_prime, required=True)
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--q", type=_positive, required=True)
    c.add_argument("--tau", type=_nonneg, default=0, help="query the curve (x^n - y^q)^(p^tau)")
    c.set_defaults(func=run_classify)

    lp = sub.add_parser("leaps", help="leap set of x^n - y^q or of its p^tau-th power")
    lp.add_argument("--p", type=_prime, required=True)
    lp.add_argument("--n", type=_positive, required=True)
    lp.add_argument("--q", type=_positive, required=True)
    lp.add_argument("--tau", type=_nonneg, default=0)
    lp.set_defaults(func=run_leaps)

    it = sub.add_parser("integrate", help="search for a logarithmic integral")
    it.add_argument("--p", type=_prime, required=True)
    it.add_argument("--h", required=True)
    it.add_argument("--delta", required=True)
    it.add_argument("--length", type=_positive, required=True)
    it.add_argument("--bound", type=_nonneg, default=None, help="constant degree bound per step")
    it.add_argument("--mode", choices=[GREEDY, EXHAUSTIVE], default=GREEDY)
    it.add_argument("--budget", type=_positive, default=None,
                    help="branch budget (default HS_BRANCH_BUDGET or 100000)")
    it.add_argument("--vars", default=None, help="comma-separated variable names, default x,y")
    it.add_argument("--out", default=None, help="also write the certificate record to this file")
    it.set_defaults(func=run_integrate)

    v = sub.add_parser("verify", help="re-check a certificate record by direct expansion")
    v.add_argument("--certificate", required=True)
    v.add_argument("--h", default=None, help="override the polynomial stored in the record")
    v.set_defaults(func=run_verify)

    s = sub.add_parser("sweep", help="CSV table over a grid of (p, n, q, tau)")
    s.add_argument("--p-list", dest="primes", type=_prime_list, required=True)
    s.add_argument("--n-max", type=_nonneg, required=True)
    s.add_argument("--q-max", type=_nonneg, required=True)
    s.add_argument("--tau-max", type=_nonneg, default=0)
    s.add_argument("--out", default=None)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--verify-upto", type=_nonneg, default=0,
                   help="cross-check every leap up to this length with the search engine")
    s.set_defaults(func=run_sweep)

    e = sub.add_parser("examples", help="run the worked-example fixtures")
    e.add_argument("--name", default=None, choices=None)
    e.set_defaults(func=run_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("p",):
        value = getattr(args, attr, None)
        if value is not None and not is_prime(value):
            _emit({"error": f"{value} is not a prime", "kind": "InvalidField"}, out)
            return EXIT_INPUT
    try:
        return args.func(args, out)
    except ParseError as exc:
        _emit({"error": str(exc), "offset": exc.offset}, out)
        return EXIT_INPUT
    except HSError as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, out)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
