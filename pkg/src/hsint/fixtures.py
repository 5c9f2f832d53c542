"""Worked examples as executable regression fixtures.

Each fixture returns a list of checks ``(label, expected, observed)``; a check
passes when expected == observed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from .binomial import classify
from .errors import Infeasible
from .logint import EXHAUSTIVE, IntegralCertificate, LeapWitness, integrate, restricted_integrate
from .parsing import parse_derivation, parse_poly


@dataclass(frozen=True)
class Check:
    label: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def outcome(result) -> str:
    """'cert:L' or 'witness:i' summary of an integrate result."""
    if isinstance(result, IntegralCertificate):
        return f"cert:{result.verified_to}"
    if isinstance(result, LeapWitness):
        return f"witness:{result.failed_at}"
    return repr(result)


def _search(h, delta, p, L, nvars=2):
    hp = parse_poly(h, p, nvars)
    d = parse_derivation(delta, p, nvars)
    return outcome(integrate(d, hp, L, search=EXHAUSTIVE))


def _search_checks(cases, p, nvars=2):
    out = []
    for h, delta, L, expected in cases:
        out.append(Check(f"{delta} along {h} to length {L}", expected,
                         _search(h, delta, p, L, nvars)))
    return out


def one_variable(primes=(2, 3, 5)) -> List[Check]:
    """One variable, h = x^p + t x^(p+1) at t = 1."""
    checks = []
    for p in primes:
        h = f"x^{p} + x^{p + 1}"
        checks += _search_checks([
            (h, "(1+x)*dx", p - 1, f"cert:{p - 1}"),
            (h, "(1+x)*dx", p, f"witness:{p}"),
            (h, "(x+x^2)*dx", 3 * p, f"cert:{3 * p}"),
        ], p, nvars=1)
    return checks


def _chain(h, delta, p, L, multipliers_at, bound):
    try:
        cert = restricted_integrate(parse_derivation(delta, p), parse_poly(h, p), L,
                                    multipliers_at, bound)
    except Infeasible as exc:
        return None, f"infeasible: {exc}"
    return cert, f"cert:{cert.verified_to}"


def char2_curve() -> List[Check]:
    p = 2
    h = "x^4 + y^6 + y^7"
    checks = _search_checks([
        (h, "dx", 3, "cert:3"),
        (h, "dx", 4, "witness:4"),
        (h, "x*dx", 7, "cert:7"),
        (h, "y^2*dx", 7, "cert:7"),
        (h, "x*dx", 8, "witness:8"),
        (h, "x^2*dx", 16, "cert:16"),
        (h, "x*y*dx", 16, "cert:16"),
        (h, "y^2*dx", 16, "cert:16"),
    ], p)
    y2 = parse_poly("y^2", p)
    x4 = parse_poly("x^4", p)

    def only_v(g):
        # u_j = 0 for j >= 2 and v_j = 0 unless 4 | j, with v_{4i} in <g>
        return lambda i: ([], [g] if i % 4 == 0 else [])

    bound = lambda i: i + 4
    for delta, first in (("y^2*dx", "y^2"), ("x*y*dx", "y^5 + y^4")):
        cert, obs = _chain(h, delta, p, 16, only_v(y2), bound)
        checks.append(Check(f"v_4i in <y^2> chain for {delta} to 16", "cert:16", obs))
        if cert is not None:
            v = [cert.derivation.images[1][4 * i] for i in range(1, 5)]
            checks.append(Check(f"v_4i of the {delta} chain lie in <y^2>", True,
                                all(f.is_zero() or all(m[1] >= 2 for m in f.terms) for f in v)))
            checks.append(Check(f"v_4 for {delta}", first, v[0].to_string()))
    cert, obs = _chain(h, "x^2*dx", p, 16, only_v(x4), bound)
    checks.append(Check("v_4i in <x^4> chain for x^2*dx to 16", "cert:16", obs))
    if cert is not None:
        v = [cert.derivation.images[1][4 * i] for i in range(1, 5)]
        checks.append(Check("v_4i of the x^2*dx chain lie in <x^4>", True,
                            all(all(m[0] >= 4 for m in f.terms) for f in v)))
    return checks


def char3_curve(L: int = 27) -> List[Check]:
    p = 3
    h = "x^3 + y^5 + x^2*y^2"
    d1 = "x^2*dx + y^3*dy"
    d2 = "2*y^2*dx + (x+y^2)*dy"
    checks = _search_checks([(h, d1, L, f"cert:{L}"), (h, d2, L, f"cert:{L}")], p)
    x2, xy, y3, y2 = (parse_poly(t, p) for t in ("x^2", "x*y", "y^3", "y^2"))
    chain_len = 12
    _, obs = _chain(h, d1, p, chain_len, lambda i: ([x2], []), lambda i: 2 * i)
    checks.append(Check(f"u_i in <x^2>, v_i = 0 chain for delta_1 to {chain_len}",
                        f"cert:{chain_len}", obs))
    _, obs = _chain(h, d2, p, chain_len, lambda i: ([xy, y3], [y2]), lambda i: 2 * i)
    checks.append(Check(f"u_i in <xy, y^3>, v_i in <y^2> chain for delta_2 to {chain_len}",
                        f"cert:{chain_len}", obs))
    return checks


def _pieces(p, n, q):
    return [(pc["lo"], pc["hi"], pc["generators"]) for pc in classify(p, n, q).report()["pieces"]]


def cusp_examples() -> List[Check]:
    checks = [
        Check("pieces of x^3 - y^4 over F_3",
              [(1, 3, ["dx"]), (3, 9, ["x*dx", "y*dx"]), (9, "inf", ["x*dx", "y^2*dx"])],
              _pieces(3, 3, 4)),
        Check("leaps of x^3 - y^4 over F_3", [3, 9], sorted(classify(3, 3, 4).leaps)),
        Check("pieces of x^3 - y^5 over F_3",
              [(1, 3, ["dx"]), (3, "inf", ["x*dx", "y^2*dx"])], _pieces(3, 3, 5)),
        Check("leaps of x^3 - y^5 over F_3", [3], sorted(classify(3, 3, 5).leaps)),
    ]
    checks += _search_checks([
        ("x^3 - y^4", "dx", 2, "cert:2"),
        ("x^3 - y^4", "dx", 3, "witness:3"),
        ("x^3 - y^4", "y*dx", 8, "cert:8"),
        ("x^3 - y^4", "y*dx", 9, "witness:9"),
        ("x^3 - y^4", "y^2*dx", 27, "cert:27"),
        ("x^3 - y^5", "y*dx", 3, "witness:3"),
        ("x^3 - y^5", "y^2*dx", 27, "cert:27"),
    ], 3)
    return checks


def product_counterexample() -> List[Check]:
    p = 2
    checks = _search_checks([("y^2", "dx", 4, "cert:4"), ("x^2 - y", "dx", 4, "cert:4")], p)
    res = integrate(parse_derivation("dx", p), parse_poly("x^2*y^2 - y^3", p), 4, search=EXHAUSTIVE)
    checks.append(Check("dx along y^2*(x^2 - y) fails by length 4", True,
                        isinstance(res, LeapWitness) and res.failed_at <= 4))
    return checks


FIXTURES: Dict[str, Callable[[], List[Check]]] = {
    "ex1": one_variable,
    "ex2-char2": char2_curve,
    "ex3-char3": char3_curve,
    "examples-2.2": cusp_examples,
    "remark-2.7": product_counterexample,
}


def run_fixture(name: str) -> List[Check]:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return FIXTURES[name]()
