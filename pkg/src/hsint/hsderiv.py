"""Finite-length Hasse-Schmidt derivations of F_p[x1..xd].

A derivation D = (D_0 = Id, D_1, ..., D_m) is stored through the images of the
variables under the substitution homomorphism f -> sum_i D_i(f) mu^i, truncated
at mu^(m+1).  Components on arbitrary polynomials are recovered by substitution,
so the Leibniz rule holds by construction.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .errors import DegenerateInput, LengthExceeded, LengthMismatch, RingMismatch
from .ffpoly import Poly, PrimeField, default_names
from .parsing import format_derivation, parse_poly

Derivation = Tuple[Poly, ...]


class TruncSeries:
    """Element of A[[mu]] / <mu^(m+1)>; the length m is part of its identity."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Poly]):
        if not coeffs:
            raise DegenerateInput("a series needs at least the mu^0 slot")
        self.coeffs = tuple(coeffs)

    @property
    def length(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        _same_length(self, other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        _same_length(self, other)
        return TruncSeries(mul_series(self.coeffs, other.coeffs, self.length))

    def __repr__(self):
        return "TruncSeries(" + ", ".join(str(c) for c in self.coeffs) + ")"


def _same_length(a, b):
    if a.length != b.length:
        raise LengthMismatch(f"lengths {a.length} and {b.length} differ")


def mul_series(a: Sequence[Poly], b: Sequence[Poly], m: int) -> List[Poly]:
    zero = Poly.zero(a[0].field, a[0].nvars)
    out = [zero] * (m + 1)
    for i, ai in enumerate(a):
        if i > m or ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if i + j > m:
                break
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return out


def pow_series(a: Sequence[Poly], e: int, m: int) -> List[Poly]:
    one = Poly.one(a[0].field, a[0].nvars)
    zero = Poly.zero(a[0].field, a[0].nvars)
    result = [one] + [zero] * m
    base = list(a[: m + 1]) + [zero] * max(0, m + 1 - len(a))
    while e:
        if e & 1:
            result = mul_series(result, base, m)
        e >>= 1
        if e:
            base = mul_series(base, base, m)
    return result


class HSDerivation:
    """Hasse-Schmidt derivation of length m given by the images of the variables."""

    __slots__ = ("images", "names")

    def __init__(self, images: Sequence[TruncSeries | Sequence[Poly]], names=None):
        images = tuple(s if isinstance(s, TruncSeries) else TruncSeries(s) for s in images)
        if not images:
            raise DegenerateInput("need at least one variable")
        m = images[0].length
        if m < 1:
            raise DegenerateInput("length must be positive")
        first = images[0][0]
        nvars = first.nvars
        if len(images) != nvars:
            raise RingMismatch("one image series per variable is required")
        for v, s in enumerate(images):
            if s.length != m:
                raise LengthMismatch("image series have different lengths")
            if s[0] != Poly.var(first.field, nvars, v):
                raise DegenerateInput(f"mu^0 coefficient of image {v} must be the variable itself")
        self.images = images
        self.names = tuple(names) if names else default_names(nvars)

    @property
    def length(self) -> int:
        return self.images[0].length

    @property
    def nvars(self) -> int:
        return len(self.images)

    @property
    def field(self) -> PrimeField:
        return self.images[0][0].field

    def slot(self, i: int) -> Derivation:
        """The mu^i coefficients of the images, i.e. (D_i(x_1), ..., D_i(x_d))."""
        return tuple(s[i] for s in self.images)

    def first(self) -> Derivation:
        return self.slot(1)

    def __eq__(self, other):
        return isinstance(other, HSDerivation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        slots = "; ".join(format_derivation(self.slot(i), self.names)
                          for i in range(1, self.length + 1))
        return f"HSDerivation(length={self.length}, slots=[{slots}])"

    def to_record(self) -> dict:
        return {
            "p": self.field.p,
            "variables": list(self.names),
            "length": self.length,
            "images": [
                [[i, s[i].to_string(self.names)] for i in range(1, self.length + 1)
                 if not s[i].is_zero()]
                for s in self.images
            ],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "HSDerivation":
        field = PrimeField(int(rec["p"]))
        names = tuple(rec["variables"])
        nvars = len(names)
        m = int(rec["length"])
        images = []
        for v, entries in enumerate(rec["images"]):
            coeffs = [Poly.zero(field, nvars)] * (m + 1)
            coeffs[0] = Poly.var(field, nvars, v)
            for i, text in entries:
                i = int(i)
                if not 1 <= i <= m:
                    raise LengthExceeded(f"slot {i} outside 1..{m}")
                coeffs[i] = coeffs[i] + parse_poly(text, field, nvars, names)
            images.append(coeffs)
        return cls(images, names)


def identity(field: PrimeField, nvars: int, m: int) -> HSDerivation:
    zero = Poly.zero(field, nvars)
    return HSDerivation([[Poly.var(field, nvars, v)] + [zero] * m for v in range(nvars)])


def from_derivation(delta: Sequence[Poly]) -> HSDerivation:
    """The length-1 derivation with images x_v + delta(x_v) mu."""
    delta = tuple(delta)
    f0 = delta[0]
    return HSDerivation([[Poly.var(f0.field, f0.nvars, v), d] for v, d in enumerate(delta)])


def from_slots(slots: Sequence[Sequence[Poly]]) -> HSDerivation:
    """Build from slots[i-1] = (D_i(x_1), ..., D_i(x_d)) for i = 1..m."""
    f0 = slots[0][0]
    nvars = f0.nvars
    return HSDerivation([[Poly.var(f0.field, nvars, v)] + [s[v] for s in slots]
                         for v in range(nvars)])


def apply(D: HSDerivation, f: Poly) -> TruncSeries:
    """phi_D(f) truncated at mu^(m+1); slot i is D_i(f)."""
    if f.nvars != D.nvars or f.field.p != D.field.p:
        raise RingMismatch("polynomial and derivation live in different rings")
    m = D.length
    zero = Poly.zero(f.field, f.nvars)
    result = [zero] * (m + 1)
    cache = {}
    for mono, c in f.terms.items():
        term = [Poly.constant(f.field, f.nvars, c)] + [zero] * m
        for v, e in enumerate(mono):
            if e:
                if (v, e) not in cache:
                    cache[(v, e)] = pow_series(D.images[v].coeffs, e, m)
                term = mul_series(term, cache[(v, e)], m)
        result = [a + b for a, b in zip(result, term)]
    return TruncSeries(result)


def component(D: HSDerivation, f: Poly, i: int) -> Poly:
    if i < 0 or i > D.length:
        raise LengthExceeded(f"component {i} of a length-{D.length} derivation")
    if i == 0:
        return f
    return apply(truncate(D, i), f)[i]


def compose(D: HSDerivation, E: HSDerivation) -> HSDerivation:
    """Group product with components (D o E)_n = sum_{i+j=n} D_i o E_j."""
    if D.length != E.length:
        raise LengthMismatch(f"lengths {D.length} and {E.length} differ")
    m = D.length
    zero = Poly.zero(D.field, D.nvars)
    images = []
    for s in E.images:
        acc = [zero] * (m + 1)
        for j, e in enumerate(s.coeffs):
            if e.is_zero():
                continue
            img = apply(D, e)
            for k in range(m + 1 - j):
                acc[j + k] = acc[j + k] + img[k]
        images.append(acc)
    return HSDerivation(images, D.names)


def invert(D: HSDerivation) -> HSDerivation:
    """Group inverse E, solved slot by slot from compose(D, E) = identity."""
    m = D.length
    zero = Poly.zero(D.field, D.nvars)
    images = []
    for v in range(D.nvars):
        coeffs = [Poly.var(D.field, D.nvars, v)] + [zero] * m
        applied = [apply(D, coeffs[0])]
        for n in range(1, m + 1):
            acc = zero
            for j in range(n):
                acc = acc + applied[j][n - j]
            coeffs[n] = -acc
            applied.append(apply(D, coeffs[n]))
        images.append(coeffs)
    return HSDerivation(images, D.names)


def scale(a: Poly, D: HSDerivation) -> HSDerivation:
    """a . D = (a^i D_i), i.e. substitute mu -> a mu in the images."""
    powers = [Poly.one(D.field, D.nvars)]
    for _ in range(D.length):
        powers.append(powers[-1] * a)
    return HSDerivation([[c * powers[i] if i else c for i, c in enumerate(s.coeffs)]
                         for s in D.images], D.names)


def truncate(D: HSDerivation, n: int) -> HSDerivation:
    if n == 0:
        raise DegenerateInput("truncation to length 0")
    if n > D.length:
        raise LengthExceeded(f"cannot truncate length {D.length} to {n}")
    if n == D.length:
        return D
    return HSDerivation([s.coeffs[: n + 1] for s in D.images], D.names)


def extend_freely(D: HSDerivation, n: int) -> HSDerivation:
    """Length-n integral over the free polynomial ring: pad the images with zeros."""
    if n < D.length:
        raise LengthExceeded(f"extension length {n} below current length {D.length}")
    zero = Poly.zero(D.field, D.nvars)
    return HSDerivation([list(s.coeffs) + [zero] * (n - D.length) for s in D.images], D.names)


def stretch(D: HSDerivation, k: int, n: int) -> HSDerivation:
    """Length-n derivation with D_j placed at slot j*k (mu -> mu^k), other slots zero."""
    zero = Poly.zero(D.field, D.nvars)
    images = []
    for s in D.images:
        coeffs = [zero] * (n + 1)
        coeffs[0] = s[0]
        for j in range(1, D.length + 1):
            if j * k <= n:
                coeffs[j * k] = s[j]
        images.append(coeffs)
    return HSDerivation(images, D.names)
