"""Sparse multivariate polynomials over a prime field F_p.

Monomials are exponent tuples compared lexicographically, so ``max(terms)``
is the lex leading monomial with x1 > x2 > ... (x > y in two variables).
Polynomials are immutable values; all arithmetic returns new objects.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, NamedTuple, Tuple

from .errors import DegenerateInput, InvalidField, NotDivisible, RingMismatch, ZeroDivisor

Monomial = Tuple[int, ...]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidField(f"{self.p!r} is not a prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisor("0 has no inverse")
        return pow(a, -1, self.p)

    def __call__(self, a: int) -> int:
        return a % self.p


class PadicSplit(NamedTuple):
    alpha: int
    unit_part: int


def padic_split(n: int, p: int) -> PadicSplit:
    """Write n = unit_part * p**alpha with p not dividing unit_part."""
    if n == 0:
        raise DegenerateInput("p-adic valuation of 0 is undefined here")
    if n < 0:
        raise DegenerateInput("expected a positive integer")
    alpha = 0
    while n % p == 0:
        n //= p
        alpha += 1
    return PadicSplit(alpha, n)


def default_names(nvars: int) -> Tuple[str, ...]:
    if nvars == 1:
        return ("x",)
    if nvars == 2:
        return ("x", "y")
    return tuple(f"x{i + 1}" for i in range(nvars))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(i <= j for i, j in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


class Poly:
    """Element of F_p[x1, ..., xd] stored as {exponent tuple: nonzero residue}."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: PrimeField, nvars: int, terms: Dict[Monomial, int] | None = None,
                 *, _clean: bool = False):
        self.field = field
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            p = field.p
            clean = {}
            for m, c in terms.items():
                if len(m) != nvars:
                    raise RingMismatch(f"monomial {m} has wrong arity for {nvars} variables")
                c %= p
                if c:
                    clean[tuple(m)] = c
            self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {}, _clean=True)

    @classmethod
    def constant(cls, field, nvars, c):
        c %= field.p
        return cls(field, nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def one(cls, field, nvars):
        return cls.constant(field, nvars, 1)

    @classmethod
    def var(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1}, _clean=True)

    @classmethod
    def monomial(cls, field, nvars, exps, c=1):
        return cls(field, nvars, {tuple(exps): c})

    @property
    def p(self) -> int:
        return self.field.p

    def _like(self, terms):
        return Poly(self.field, self.nvars, terms, _clean=True)

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field.p != self.field.p or other.nvars != self.nvars:
            raise RingMismatch("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, int):
            return Poly.constant(self.field, self.nvars, other)
        self._check(other)
        return other

    # predicates / accessors
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self.terms), default=-1)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ZeroDivisor("zero polynomial has no leading term")
        return max(self.terms)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def coeff(self, mono) -> int:
        return self.terms.get(tuple(mono), 0)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        p = self.field.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return self._like({m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: int):
        c %= self.field.p
        if not c:
            return self._like({})
        p = self.field.p
        return self._like({m: v * c % p for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.field.p
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(i + j for i, j in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return self._like({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return pow_(self, e)

    def shift(self, mono):
        """Multiply by the monomial ``mono``."""
        return self._like({mono_mul(m, mono): c for m, c in self.terms.items()})

    def frobenius(self, times: int = 1):
        """f -> f^(p^times); exact in characteristic p since a^p = a on F_p."""
        k = self.field.p ** times
        return self._like({tuple(e * k for e in m): c for m, c in self.terms.items()})

    def evaluate(self, subs):
        """Substitute ring elements (Polys of a common ring) for the variables."""
        subs = list(subs)
        if len(subs) != self.nvars:
            raise RingMismatch("need one substitution per variable")
        target = subs[0]
        result = Poly.zero(target.field, target.nvars)
        cache = {}
        for m, c in self.terms.items():
            term = Poly.constant(target.field, target.nvars, c)
            for v, e in enumerate(m):
                if e:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = pow_(subs[v], e)
                    term = term * cache[key]
            result = result + term
        return result

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.field, self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.field.p == other.field.p and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def to_string(self, names: Iterable[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly(F_{self.field.p}, {self.to_string()!r})"


def ring(p: int, nvars: int = 2):
    """Return (field, generators) for F_p[x1..xd]."""
    field = PrimeField(p)
    return field, tuple(Poly.var(field, nvars, i) for i in range(nvars))


def partial(f: Poly, var: int) -> Poly:
    if not 0 <= var < f.nvars:
        raise RingMismatch(f"variable index {var} out of range")
    p = f.field.p
    out = {}
    for m, c in f.terms.items():
        e = m[var]
        v = c * e % p
        if v:
            mm = list(m)
            mm[var] = e - 1
            out[tuple(mm)] = v
    return Poly(f.field, f.nvars, out, _clean=True)


def gradient(f: Poly):
    return tuple(partial(f, v) for v in range(f.nvars))


def pow_(f: Poly, e: int) -> Poly:
    """Square-and-multiply power; pow_(f, 0) == 1."""
    if e < 0:
        raise DegenerateInput("negative exponent")
    result = Poly.one(f.field, f.nvars)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def _divide(f: Poly, h: Poly):
    """Single-divisor lex division: returns (quotient, remainder).

    The remainder has no monomial divisible by the lex leading monomial of h;
    it is the canonical normal form of f modulo <h>.
    """
    f._check(h)
    if h.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    p = f.field.p
    lt = max(h.terms)
    inv_lc = pow(h.terms[lt], -1, p)
    tail = [(m, c) for m, c in h.terms.items() if m != lt]
    work = dict(f.terms)
    heap = [tuple(-e for e in m) for m in work]
    heapq.heapify(heap)
    quot: Dict[Monomial, int] = {}
    rem: Dict[Monomial, int] = {}
    while heap:
        m = tuple(-e for e in heapq.heappop(heap))
        c = work.pop(m, 0)
        if not c:
            continue
        if all(i >= j for i, j in zip(m, lt)):
            q = tuple(i - j for i, j in zip(m, lt))
            factor = c * inv_lc % p
            quot[q] = (quot.get(q, 0) + factor) % p
            for hm, hc in tail:
                key = tuple(i + j for i, j in zip(q, hm))
                if key in work:
                    work[key] = (work[key] - factor * hc) % p
                else:
                    work[key] = (-factor * hc) % p
                    heapq.heappush(heap, tuple(-e for e in key))
        else:
            rem[m] = c
    quot = {m: c for m, c in quot.items() if c}
    return Poly(f.field, f.nvars, quot, _clean=True), Poly(f.field, f.nvars, rem, _clean=True)


def mod_reduce(f: Poly, h: Poly) -> Poly:
    """Canonical representative of f in F_p[x]/<h> (lex normal form)."""
    return _divide(f, h)[1]


def exact_div(f: Poly, h: Poly) -> Poly:
    """Return g with f == g*h, raising NotDivisible when h does not divide f."""
    q, r = _divide(f, h)
    if not r.is_zero():
        raise NotDivisible(f"remainder {r} is nonzero")
    return q


def divides(h: Poly, f: Poly) -> bool:
    return _divide(f, h)[1].is_zero()
