"""Closed-form integrability theory for the binomial curves h = x^n - y^q over F_p.

Covers the numerical invariants, the piecewise module of i-integrable
derivations of F_p[x,y]/<h>, its leaps, the explicit infinite integral of the
y^gamma * dx generator, the annihilators of consecutive quotients, and the
Frobenius-power curves h^(p^tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import InvalidField, NoInverse, NotALeap, NotAPowerCase, NotApplicable, UsePowerReduce
from .ffpoly import Poly, PrimeField, is_prime, mod_reduce, padic_split, partial
from .hsderiv import Derivation, HSDerivation
from .parsing import format_derivation

INF = math.inf


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidField(f"{p!r} is not a prime")


def _valuation(n: int, p: int) -> int:
    return padic_split(n, p).alpha


@dataclass(frozen=True)
class CurveInvariants:
    p: int
    n: int
    q: int
    alpha: int
    s: int
    m_rem: int
    beta: Optional[int]
    gamma: Optional[int]
    t: Optional[int]

    def as_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "q": self.q, "alpha": self.alpha, "s": self.s,
                "m_rem": self.m_rem, "beta": self.beta, "gamma": self.gamma, "t": self.t}


def invariants(p: int, n: int, q: int) -> CurveInvariants:
    _check_prime(p)
    if n < 1 or q < 1:
        raise NotApplicable("exponents must be positive")
    alpha, s = padic_split(n, p)
    m_rem = q % p
    beta = t = None
    if q - m_rem > 0:
        beta, t = padic_split(q - m_rem, p)
    gamma = -(-(q - 1) // p ** alpha) if alpha >= 1 else None
    return CurveInvariants(p, n, q, alpha, s, m_rem, beta, gamma, t)


def binomial_curve(p: int, n: int, q: int) -> Poly:
    field = PrimeField(p)
    return Poly(field, 2, {(n, 0): 1, (0, q): -1})


def _monomial_field(p, x_exp, y_exp, c=1) -> Poly:
    return Poly(PrimeField(p), 2, {(x_exp, y_exp): c})


def _der(p, u: Poly = None, v: Poly = None) -> Derivation:
    zero = Poly.zero(PrimeField(p), 2)
    return (u if u is not None else zero, v if v is not None else zero)


def _swap_poly(f: Poly) -> Poly:
    return Poly(f.field, 2, {(b, a): c for (a, b), c in f.terms.items()})


def _swap_der(d: Derivation) -> Derivation:
    return (_swap_poly(d[1]), _swap_poly(d[0]))


# ---------------------------------------------------------------------------
# piecewise modules

@dataclass(frozen=True)
class Piece:
    lo: int
    hi: float
    generators: Tuple[Derivation, ...]
    dropped: Tuple[Derivation, ...] = ()   # generators that are not integrable to length hi

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": "inf" if self.hi == INF else int(self.hi),
                "generators": [format_derivation(g) for g in self.generators]}


@dataclass(frozen=True)
class Certificate:
    generator: Derivation
    kind: str          # euler | closed_form | gradient | search
    length: float      # INF for infinite integrals

    def as_dict(self) -> dict:
        return {"generator": format_derivation(self.generator), "type": self.kind,
                "length": "inf" if self.length == INF else int(self.length)}


@dataclass(frozen=True)
class PiecewiseModule:
    p: int
    n: int
    q: int
    branch: str
    invariants: CurveInvariants
    pieces: Tuple[Piece, ...]
    certificates: Tuple[Certificate, ...]
    flags: Tuple[str, ...] = ()

    @property
    def leaps(self) -> set:
        return {piece.lo for piece in self.pieces[1:]}

    def piece_at(self, i: int) -> Piece:
        for piece in self.pieces:
            if piece.lo <= i < piece.hi:
                return piece
        raise NotApplicable(f"length {i} is not covered")

    def report(self) -> dict:
        return {"p": self.p, "n": self.n, "q": self.q, "branch": self.branch,
                "invariants": self.invariants.as_dict(),
                "pieces": [pc.as_dict() for pc in self.pieces],
                "leaps": sorted(self.leaps),
                "certificates": [c.as_dict() for c in self.certificates],
                "flags": list(self.flags)}


def _swap_module(mod: PiecewiseModule, p, n, q, inv) -> PiecewiseModule:
    pieces = tuple(Piece(pc.lo, pc.hi, tuple(_swap_der(g) for g in pc.generators),
                         tuple(_swap_der(g) for g in pc.dropped)) for pc in mod.pieces)
    certs = tuple(Certificate(_swap_der(c.generator), c.kind, c.length) for c in mod.certificates)
    return PiecewiseModule(p, n, q, "d", inv, pieces, certs, mod.flags + ("variables swapped",))


def _branch_c(inv: CurveInvariants) -> PiecewiseModule:
    p, n, q = inv.p, inv.n, inv.q
    pa = p ** inv.alpha
    one = _monomial_field(p, 0, 0)
    dx = _der(p, one)
    xdx = _der(p, _monomial_field(p, 1, 0))
    ydx = _der(p, _monomial_field(p, 0, inv.gamma))
    if special_branch(inv):
        pab = p ** (inv.alpha + inv.beta)
        y1dx = _der(p, _monomial_field(p, 0, inv.gamma + 1))
        pieces = (Piece(1, pa, (dx,), (dx,)),
                  Piece(pa, pab, (xdx, ydx), (ydx,)),
                  Piece(pab, INF, (xdx, y1dx)))
        certs = (Certificate(dx, "closed_form", pa - 1),
                 Certificate(ydx, "closed_form", pab - 1),
                 Certificate(xdx, "euler", INF),
                 Certificate(y1dx, "closed_form", INF))
    else:
        pieces = (Piece(1, pa, (dx,), (dx,)), Piece(pa, INF, (xdx, ydx)))
        certs = (Certificate(dx, "closed_form", pa - 1),
                 Certificate(xdx, "euler", INF),
                 Certificate(ydx, "closed_form", INF))
    return PiecewiseModule(p, n, q, "c", inv, pieces, certs)


def special_branch(inv: CurveInvariants) -> bool:
    """s = 1, alpha <= beta and q = 1 mod p: the case with a second leap."""
    return (inv.alpha >= 1 and inv.s == 1 and inv.m_rem == 1 and inv.beta is not None
            and inv.alpha <= inv.beta)


def classify(p: int, n: int, q: int) -> PiecewiseModule:
    inv = invariants(p, n, q)
    if n % p == 0 and q % p == 0:
        raise UsePowerReduce(f"both exponents are divisible by {p}; use power_reduce")
    if n % p and q % p:
        d1 = _der(p, _monomial_field(p, 1, 0, q), _monomial_field(p, 0, 1, n))
        d2 = _der(p, _monomial_field(p, 0, q - 1, q), _monomial_field(p, n - 1, 0, n))
        flags = ("degenerate: smooth line n = q = 1",) if n == q == 1 else ()
        return PiecewiseModule(p, n, q, "a", inv, (Piece(1, INF, (d1, d2)),),
                               (Certificate(d1, "euler", INF), Certificate(d2, "gradient", INF)),
                               flags)
    if n % p == 0 and q == 1:
        dx = _der(p, _monomial_field(p, 0, 0))
        return PiecewiseModule(p, n, q, "b", inv, (Piece(1, INF, (dx,)),),
                               (Certificate(dx, "gradient", INF),))
    if n % p == 0:
        return _branch_c(inv)
    # p | q, p does not divide n: swap the roles of x and y
    base = classify(p, q, n)
    return _swap_module(base, p, n, q, inv)


def leaps(p: int, n: int, q: int) -> set:
    return classify(p, n, q).leaps


# ---------------------------------------------------------------------------
# the explicit integral of y^gamma * dx

def binom_mod(a: int, b: int, p: int) -> int:
    """binom(a, b) mod p by Lucas' theorem; 0 when b < 0 or b > a."""
    if b < 0 or b > a:
        return 0
    result = 1
    while a or b:
        ai, bi = a % p, b % p
        if bi > ai:
            return 0
        result = result * math.comb(ai, bi) % p
        a //= p
        b //= p
    return result


def multinomial_mod(parts, p: int) -> int:
    """(sum parts)! / prod(part!) mod p as a product of Lucas binomials."""
    total = sum(parts)
    result = 1
    for k in parts:
        result = result * binom_mod(total, k, p) % p
        if not result:
            return 0
        total -= k
    return result


def _partitions(i: int, max_part: int, max_count: int):
    """Multiplicity vectors j_1..j_max_part with sum k*j_k = i and sum j_k <= max_count."""
    def rec(rest, k, count):
        if rest == 0:
            yield {}
            return
        if k == 0:
            return
        for mult in range(min(rest // k, max_count - count), -1, -1):
            for tail in rec(rest - mult * k, k - 1, count + mult):
                if mult:
                    out = dict(tail)
                    out[k] = mult
                    yield out
                else:
                    yield tail
    yield from rec(i, max_part, 0)


def c_coefficients(inv: CurveInvariants, i_max: int) -> List[int]:
    """C_1..C_{i_max} in F_p, by the recursion over the index sets I_i."""
    p, q, s = inv.p, inv.q, inv.s
    if q % p == 0:
        raise NoInverse(f"q = {q} is not invertible mod {p}")
    inv_q = pow(q, -1, p)
    C = [0]
    for i in range(1, i_max + 1):
        acc = 0
        for js in _partitions(i, i - 1, q):
            j0 = q - sum(js.values())
            term = multinomial_mod([j0] + list(js.values()), p)
            for k, e in js.items():
                term = term * pow(C[k], e, p) % p
            acc = (acc + term) % p
        C.append(inv_q * (binom_mod(s, i, p) - acc) % p)
    return C[1:]


@dataclass(frozen=True)
class ClosedFormIntegral:
    invariants: CurveInvariants
    gamma_used: int
    v_terms: Tuple[Tuple[int, int, int, int], ...]   # (i, C_i, x exponent, y exponent)
    derivation: HSDerivation


def closed_form_integral(p: int, n: int, q: int, L: int) -> ClosedFormIntegral:
    """x -> x + y^g mu, y -> y + sum_i v_i mu^(i p^alpha), truncated to length L."""
    inv = invariants(p, n, q)
    if not (inv.alpha >= 1 and inv.m_rem >= 1 and q >= 2):
        raise NotApplicable("closed form needs p | n, p not dividing q, q >= 2")
    if L < 1:
        raise NotApplicable("length must be positive")
    gamma = inv.gamma + 1 if special_branch(inv) else inv.gamma
    pa = p ** inv.alpha
    s = inv.s
    i_max = L // pa
    C = c_coefficients(inv, i_max)
    field = PrimeField(p)
    zero = Poly.zero(field, 2)
    xs = [Poly.var(field, 2, 0), Poly(field, 2, {(0, gamma): 1})] + [zero] * (L - 1)
    ys = [Poly.var(field, 2, 1)] + [zero] * L
    terms = []
    for i in range(1, i_max + 1):
        tau, sigma = divmod(i - 1, s)
        sigma += 1
        xe = pa * (s - sigma)
        ye = i * gamma * pa - (tau + 1) * q + 1
        assert ye >= 0, "negative exponent in the closed-form integral"
        terms.append((i, C[i - 1], xe, ye))
        ys[i * pa] = Poly(field, 2, {(xe, ye): C[i - 1]})
    return ClosedFormIntegral(inv, gamma, tuple(terms), HSDerivation([xs, ys]))


# ---------------------------------------------------------------------------
# annihilators of consecutive quotients

@dataclass(frozen=True)
class Annihilator:
    generators: Tuple[Poly, ...]
    contains_gradient_ideal: bool
    flags: Tuple[str, ...] = ()


def annihilator_B(p: int, n: int, q: int, i: int) -> Annihilator:
    """Generators of Ann(IDer(i-1)/IDer(i)) at a leap i, as tabulated for the case split."""
    inv = invariants(p, n, q)
    if not (inv.alpha >= 1 and inv.m_rem >= 1 and q >= 2):
        if i in (leaps(p, n, q) if n % p or q % p else set()):
            raise NotApplicable("annihilators are tabulated for p | n, p not dividing q only")
        raise NotALeap(f"{i} is not a leap of x^{n} - y^{q} over F_{p}")
    field = PrimeField(p)
    x = Poly.var(field, 2, 0)
    y = Poly.var(field, 2, 1)
    pa = p ** inv.alpha
    flags = []
    if i == pa:
        gens = (x, Poly(field, 2, {(0, inv.alpha): 1}))
        if inv.alpha != inv.gamma:
            flags.append(f"exponent discrepancy: tabulated y^alpha = y^{inv.alpha}, "
                         f"the generator at this leap is y^gamma = y^{inv.gamma}")
        # y^(q-1) lies in <x, y^a> + <h> exactly when q - 1 >= a
        contains = q - 1 >= inv.alpha
    elif special_branch(inv) and i == p ** (inv.alpha + inv.beta):
        gens = (y,)
        contains = q - 1 >= 1
    else:
        raise NotALeap(f"{i} is not a leap of x^{n} - y^{q} over F_{p}")
    if not contains:
        flags.append("the gradient ideal <y^(q-1)> is not contained in the tabulated ideal")
    return Annihilator(gens, contains, tuple(flags))


# ---------------------------------------------------------------------------
# Frobenius powers

def der_log_full(h: Poly) -> bool:
    """Whether every coordinate derivation is h-logarithmic."""
    if h.is_zero():
        raise NotApplicable("h must be nonzero")
    return all(mod_reduce(partial(h, v), h).is_zero() for v in range(h.nvars))


def power_leaps(p: int, n: int, q: int, tau: int) -> set:
    """Leaps of F_p[x,y]/<h^(p^tau)> from those of h = x^n - y^q."""
    base = leaps(p, n, q)
    if tau == 0:
        return set(base)
    pt = p ** tau
    out = {l * pt for l in base}
    if not der_log_full(binomial_curve(p, n, q)):
        out.add(pt)
    return out


def power_pieces(p: int, n: int, q: int, tau: int) -> Tuple[Piece, ...]:
    """Pieces of the module of i-integrable derivations along h^(p^tau), lifted to R.

    Below p^tau every derivation qualifies; from l p^tau on, the module equals the
    h-logarithmic l-integrable ones, i.e. lifts of the base generators plus h*dx, h*dy.
    """
    base = classify(p, n, q)
    if tau == 0:
        return base.pieces
    pt = p ** tau
    field = PrimeField(p)
    h = binomial_curve(p, n, q)
    zero = Poly.zero(field, 2)
    dx = (Poly.one(field, 2), zero)
    dy = (zero, Poly.one(field, 2))
    hd = ((h, zero), (zero, h))
    first_dropped = tuple(d for d in (dx, dy)
                          if not mod_reduce(d[0] * partial(h, 0) + d[1] * partial(h, 1), h).is_zero())
    pieces = [Piece(1, pt, (dx, dy), first_dropped)]
    for pc in base.pieces:
        hi = INF if pc.hi == INF else pc.hi * pt
        pieces.append(Piece(pc.lo * pt, hi, tuple(pc.generators) + hd, pc.dropped))
    return tuple(pieces)


@dataclass(frozen=True)
class PowerReduction:
    tau: int
    n_reduced: int
    q_reduced: int
    leaps: frozenset
    pieces: Tuple[Piece, ...]
    p_tau: int

    def report(self) -> dict:
        return {"tau": self.tau, "n_reduced": self.n_reduced, "q_reduced": self.q_reduced,
                "leaps": sorted(self.leaps),
                "pieces": [pc.as_dict() for pc in self.pieces],
                "pullback": (f"IDer at length i*{self.p_tau} is the image of "
                             f"IDer(log <x^{self.n_reduced} - y^{self.q_reduced}>; i)")}


def power_reduce(p: int, n: int, q: int) -> PowerReduction:
    _check_prime(p)
    if n % p or q % p:
        raise NotAPowerCase(f"x^{n} - y^{q} is not a p-th power over F_{p}")
    tau = min(_valuation(n, p), _valuation(q, p))
    pt = p ** tau
    n2, q2 = n // pt, q // pt
    return PowerReduction(tau, n2, q2, frozenset(power_leaps(p, n2, q2, tau)),
                          power_pieces(p, n2, q2, tau), pt)
