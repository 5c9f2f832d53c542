"""Logarithmic integrability of derivations along a principal ideal <h>.

The search extends a length-1 derivation slot by slot.  At step i the mu^i
coefficient of phi(h) is ``known + sum_v z_v * dh/dx_v`` where ``z`` are the
new slot-i images, so each step is a linear system over F_p in the normal-form
coordinates of F_p[x]/<h>.

Exhaustive mode does not enumerate the slot-i solution space blindly.  Two
extensions of the same prefix that differ at slot i by a derivation which is
itself h-logarithmically floor(L/i)-integrable have the same extension
behaviour up to length L (compose with the mu -> mu^i stretch of its integral).
So only a complement of the certified part of the slot-i solution space is
kept, as symbolic F_p parameters.  Later steps turn into polynomial equations
in those parameters: linear ones are solved by elimination, nonlinear ones are
split by trying each value of one parameter in increasing order.
"""

from __future__ import annotations

import heapq
import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, Infeasible, LengthExceeded, NotApplicable, NotLogarithmic, \
    NotLogarithmicPrefix
from .ffpoly import Poly, PrimeField, gradient, mod_reduce, mono_divides
from .hsderiv import Derivation, HSDerivation, apply, extend_freely, from_derivation, truncate
from .linalg import Echelon, axpy, nullspace_from_columns
from .parsing import format_derivation

DEFAULT_BUDGET = 100_000
GREEDY = "greedy"
EXHAUSTIVE = "exhaustive"


def default_budget() -> int:
    value = os.environ.get("HS_BRANCH_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# result records

@dataclass(frozen=True)
class LogCheckReport:
    ok: bool
    first_failure: Optional[Tuple[int, Poly]] = None


@dataclass(frozen=True)
class ObstructionRecord:
    step: int
    known_part: Poly
    linear_coefficients: Tuple[Poly, ...]


@dataclass(frozen=True)
class StepSolution:
    particular: Derivation
    nullspace_basis: Tuple[Derivation, ...]


@dataclass(frozen=True)
class IntegralCertificate:
    derivation: HSDerivation
    h: Poly
    verified_to: int

    def to_record(self) -> dict:
        rec = self.derivation.to_record()
        rec["h"] = self.h.to_string(self.derivation.names)
        rec["verified_to"] = self.verified_to
        return rec


@dataclass(frozen=True)
class LeapWitness:
    """Bounded-search failure: no integral with step-coefficient degrees within the bound.

    Not a proof of non-integrability; ``exhaustive_within_bound`` records that
    every branch of the reduced search space was closed.
    """
    failed_at: int
    explored: int
    degree_bound: int
    mode: str
    exhaustive_within_bound: bool = False

    def to_record(self) -> dict:
        return {"failed_at": self.failed_at, "degree_bound": self.degree_bound,
                "branches_explored": self.explored, "mode": self.mode,
                "exhaustive_within_bound": self.exhaustive_within_bound}


# ---------------------------------------------------------------------------
# checks on concrete derivations

def is_logarithmic(D: HSDerivation, h: Poly) -> LogCheckReport:
    """D_i(h) in <h> for 1 <= i <= length, via a plain expansion of phi_D(h)."""
    series = apply(D, h)
    for i in range(1, D.length + 1):
        r = mod_reduce(series[i], h)
        if not r.is_zero():
            return LogCheckReport(False, (i, r))
    return LogCheckReport(True, None)


def derivation_of(delta) -> Derivation:
    if isinstance(delta, HSDerivation):
        if delta.length != 1:
            raise LengthExceeded("expected a length-1 derivation")
        return delta.first()
    return tuple(delta)


def apply_derivation(delta: Derivation, f: Poly) -> Poly:
    return apply(from_derivation(delta), f)[1]


def obstruction(partial: HSDerivation, h: Poly, i: int) -> ObstructionRecord:
    if partial.length < i - 1:
        raise LengthExceeded(f"prefix of length {partial.length} cannot reach step {i}")
    if partial.length > i - 1:
        partial = truncate(partial, i - 1)
    report = is_logarithmic(partial, h)
    if not report.ok:
        raise NotLogarithmicPrefix(f"prefix fails at step {report.first_failure[0]}",
                                   report.first_failure[1])
    known = apply(extend_freely(partial, i), h)[i]
    return ObstructionRecord(i, known, gradient(h))


def solve_step(obs: ObstructionRecord, h: Poly, degree_bound: int,
               multipliers=None) -> StepSolution:
    """Solve known + sum_v u_v dh/dx_v = 0 mod <h> with deg u_v <= degree_bound.

    With ``multipliers`` (one list of polynomials per variable) the unknowns are
    restricted to u_v = sum_k g_k w_k with deg w_k <= degree_bound; an empty list
    forces u_v = 0.
    """
    ctx = context(h)
    rhs = {m: (-c) % ctx.p for m, c in mod_reduce(obs.known_part, h).terms.items()}
    if multipliers is None:
        ech, nulls = ctx.echelon(degree_bound)
        rem, combo = ech.reduce(rhs)
        if rem:
            raise Infeasible(f"step {obs.step} has no solution with degree <= {degree_bound}")
        return StepSolution(ctx.labels_to_derivation(combo),
                            tuple(ctx.labels_to_derivation(n) for n in nulls))
    cols = []
    for v, gens in enumerate(multipliers):
        for k, g in enumerate(gens):
            for m in _all_monomials(ctx.nvars, degree_bound):
                cols.append(((m, v, k), ctx.reduce_plain(g.shift(m) * ctx.grad[v])))
    ech, nulls = nullspace_from_columns(cols, ctx.p)
    rem, combo = ech.reduce(rhs)
    if rem:
        raise Infeasible(f"step {obs.step} has no solution in the restricted family")

    def expand(vec):
        comps = [Poly.zero(ctx.field, ctx.nvars) for _ in range(ctx.nvars)]
        for (m, v, k), c in vec.items():
            comps[v] = comps[v] + multipliers[v][k].shift(m).scale(c)
        return tuple(comps)

    return StepSolution(expand(combo), tuple(expand(n) for n in nulls))


def restricted_integrate(delta, h: Poly, L: int, multipliers_at: Callable, degree_bound):
    """Greedy step-by-step extension with the slot-i unknowns restricted by multipliers_at(i).

    Used to replay hand proofs that keep every image coefficient inside a
    prescribed ideal.  ``degree_bound`` is an int or a callable of the step.
    Returns an IntegralCertificate or raises Infeasible.
    """
    delta = derivation_of(delta)
    D = from_derivation(delta)
    for i in range(2, L + 1):
        obs = obstruction(D, h, i)
        bound = degree_bound(i) if callable(degree_bound) else degree_bound
        sol = solve_step(obs, h, bound, multipliers_at(i))
        images = [list(s.coeffs) + [sol.particular[v]] for v, s in enumerate(D.images)]
        D = HSDerivation(images)
    report = is_logarithmic(D, h)
    if not report.ok:
        raise AssertionError("restricted extension failed re-verification")
    return IntegralCertificate(D, h, L)


# ---------------------------------------------------------------------------
# parametric polynomial kernels
#
# A "flat" polynomial is a dict {(base monomial, parameter monomial): residue}.
# Parameter monomials are sorted tuples of (index, exponent) with exponents in
# 1..p-1 (c^p = c on F_p).

@lru_cache(maxsize=1 << 18)
def _pm_mul(a, b, p):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for t, e in b:
        e2 = out.get(t, 0) + e
        while e2 >= p:
            e2 -= p - 1
        out[t] = e2
    return tuple(sorted(out.items()))


def _fmul(f, g, p):
    out = {}
    for (b1, q1), c1 in f.items():
        for (b2, q2), c2 in g.items():
            key = (tuple(i + j for i, j in zip(b1, b2)), _pm_mul(q1, q2, p))
            out[key] = (out.get(key, 0) + c1 * c2) % p
    return {k: c for k, c in out.items() if c}


def _fadd_into(acc, f, p, scale=1):
    for k, c in f.items():
        w = (acc.get(k, 0) + scale * c) % p
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


def _pm_dict_mul(a, b, p):
    out = {}
    for q1, c1 in a.items():
        for q2, c2 in b.items():
            q = _pm_mul(q1, q2, p)
            out[q] = (out.get(q, 0) + c1 * c2) % p
    return {q: c for q, c in out.items() if c}


def _fsubst(f, t, powers, p):
    """Replace parameter t by an expression; powers[e] is the expression^e."""
    out = {}
    for (b, q), c in f.items():
        e = 0
        rest = q
        for idx, (tt, ee) in enumerate(q):
            if tt == t:
                e = ee
                rest = q[:idx] + q[idx + 1:]
                break
        if not e:
            key = (b, q)
            w = (out.get(key, 0) + c) % p
            if w:
                out[key] = w
            else:
                out.pop(key, None)
            continue
        for q2, c2 in powers[e].items():
            key = (b, _pm_mul(rest, q2, p))
            w = (out.get(key, 0) + c * c2) % p
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def _is_linear(eq):
    return all(len(q) == 0 or (len(q) == 1 and q[0][1] == 1) for q in eq)


# ---------------------------------------------------------------------------
# per-curve context with caches

class _Counter:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"branch budget {self.limit} exceeded", self.used)


def _all_monomials(nvars, bound):
    if nvars == 1:
        return [(a,) for a in range(bound + 1)]
    out = []
    for a in range(bound + 1):
        for rest in _all_monomials(nvars - 1, bound - a):
            out.append((a,) + rest)
    return out


class CurveContext:
    """Caches for one hypersurface h: normal forms, step matrices, certified sub-modules."""

    def __init__(self, h: Poly):
        if h.is_zero():
            raise NotApplicable("h must be nonzero")
        self.h = h
        self.p = h.field.p
        self.field = h.field
        self.nvars = h.nvars
        self.lt = max(h.terms)
        self.inv_lc = pow(h.terms[self.lt], -1, self.p)
        self.tail = [(m, c) for m, c in h.terms.items() if m != self.lt]
        self.grad = gradient(h)
        self.deg = h.degree()
        self._normal: Dict[int, list] = {}
        self._columns: Dict[tuple, dict] = {}
        self._echelon: Dict[int, tuple] = {}
        self._gens = None
        self._ok_len: Dict[tuple, int] = {}
        self._fail_len: Dict[tuple, int] = {}
        self._certified: Dict[tuple, list] = {}
        self._directions: Dict[tuple, list] = {}

    # normal forms -----------------------------------------------------------
    def is_normal(self, mono) -> bool:
        return not mono_divides(self.lt, mono)

    def normal_monomials(self, bound: int):
        if bound not in self._normal:
            monos = [m for m in _all_monomials(self.nvars, bound) if self.is_normal(m)]
            monos.sort()
            self._normal[bound] = monos
        return self._normal[bound]

    def freduce(self, f):
        """Normal form of a flat polynomial modulo h (parameters ride along)."""
        p = self.p
        lt = self.lt
        if not any(mono_divides(lt, b) for b, _ in f):
            return f
        work = dict(f)
        heap = [(tuple(-e for e in b), q) for b, q in work]
        heapq.heapify(heap)
        out = {}
        while heap:
            nb, q = heapq.heappop(heap)
            b = tuple(-e for e in nb)
            c = work.pop((b, q), 0)
            if not c:
                continue
            if all(i >= j for i, j in zip(b, lt)):
                s = tuple(i - j for i, j in zip(b, lt))
                factor = c * self.inv_lc % p
                for hm, hc in self.tail:
                    kb = tuple(i + j for i, j in zip(s, hm))
                    key = (kb, q)
                    if key in work:
                        work[key] = (work[key] - factor * hc) % p
                    else:
                        work[key] = (-factor * hc) % p
                        heapq.heappush(heap, (tuple(-e for e in kb), q))
            else:
                out[(b, q)] = c
        return out

    def reduce_plain(self, f: Poly) -> Dict[tuple, int]:
        return mod_reduce(f, self.h).terms

    def poly_to_flat(self, f: Poly):
        return {(m, ()): c for m, c in f.terms.items()}

    def flat_to_poly(self, f) -> Poly:
        return Poly(self.field, self.nvars, {b: c for (b, q), c in f.items() if not q})

    # step matrices ----------------------------------------------------------
    def column(self, v, mono):
        key = (v, mono)
        if key not in self._columns:
            self._columns[key] = self.reduce_plain(self.grad[v].shift(mono))
        return self._columns[key]

    def echelon(self, bound: int):
        """Column echelon of (u_v) -> sum_v u_v dh/dx_v mod h over normal u_v of degree <= bound.

        Columns are ordered by (monomial, variable) ascending in lex, so pivots
        prefer lex-smallest monomials; null vectors come out in the same order.
        """
        if bound not in self._echelon:
            cols = [((m, v), self.column(v, m))
                    for m in self.normal_monomials(bound) for v in range(self.nvars)]
            self._echelon[bound] = nullspace_from_columns(cols, self.p)
        return self._echelon[bound]

    def labels_to_derivation(self, combo) -> Derivation:
        comps = [dict() for _ in range(self.nvars)]
        for (m, v), c in combo.items():
            comps[v][m] = c
        return tuple(Poly(self.field, self.nvars, t) for t in comps)

    def derivation_vector(self, theta: Derivation, mono, bound) -> Optional[dict]:
        """Coordinates of mono*theta mod h, or None if it leaves the degree bound."""
        vec = {}
        for v, comp in enumerate(theta):
            if comp.is_zero():
                continue
            for b, c in self.reduce_plain(comp.shift(mono)).items():
                if sum(b) > bound:
                    return None
                vec[(b, v)] = c
        return vec

    # logarithmic derivations -------------------------------------------------
    def der_log_generators(self) -> List[Derivation]:
        """Module generators of the h-logarithmic derivations found up to degree deg(h)."""
        if self._gens is None:
            cap = max(self.deg, 1)
            _, nulls = self.echelon(cap)
            nulls = sorted(nulls, key=lambda n: (max(sum(m) for m, _ in n), sorted(n)))
            span = Echelon(self.p)
            gens = []
            for n in nulls:
                if span.contains(n):
                    continue
                theta = self.labels_to_derivation(n)
                gens.append(theta)
                for mono in self.normal_monomials(cap):
                    vec = self.derivation_vector(theta, mono, cap)
                    if vec:
                        span.add(vec, (len(gens), mono))
            self._gens = gens
        return self._gens

    def integrable(self, theta: Derivation, k: int, bound, counter) -> bool:
        """Whether theta has an h-logarithmic k-integral (exhaustive, memoised)."""
        key = (theta, _bound_key(bound))
        if self._ok_len.get(key, 0) >= k:
            return True
        if key in self._fail_len and self._fail_len[key] <= k:
            return False
        result = _Search(self, theta, k, bound, EXHAUSTIVE, counter).run()
        if isinstance(result, IntegralCertificate):
            self._ok_len[key] = max(self._ok_len.get(key, 0), k)
            return True
        self._fail_len[key] = min(self._fail_len.get(key, k), k)
        return False

    def certified_generators(self, k: int, bound, counter) -> List[Derivation]:
        """Monomial multiples of the generators certified k-integrable (an under-approximation)."""
        key = (k, _bound_key(bound))
        if key in self._certified:
            return self._certified[key]
        cap = max(self.deg, 1)
        monos = sorted(self.normal_monomials(cap), key=lambda m: (sum(m), m))
        found = []
        for g in self.der_log_generators():
            good = []
            for mono in monos:
                if any(mono_divides(m0, mono) for m0 in good):
                    continue
                theta = tuple(comp.shift(mono) for comp in g)
                theta = tuple(Poly(self.field, self.nvars, self.reduce_plain(c)) for c in theta)
                if all(c.is_zero() for c in theta):
                    continue
                if self.integrable(theta, k, bound, counter):
                    good.append(mono)
                    found.append(theta)
        self._certified[key] = found
        return found

    def directions(self, i: int, L: int, slot_bound: int, bound, counter):
        """Complement of the k-integrable part of the slot-i solution space, k = L // i."""
        k = L // i
        if k < 2:
            return []
        key = (slot_bound, k, _bound_key(bound))
        if key in self._directions:
            return self._directions[key]
        _, nulls = self.echelon(slot_bound)
        span = Echelon(self.p)
        if nulls:
            for theta in self.certified_generators(k, bound, counter):
                for mono in self.normal_monomials(slot_bound):
                    vec = self.derivation_vector(theta, mono, slot_bound)
                    if vec:
                        span.add(vec, ("w", theta, mono))
        dirs = []
        for n in nulls:
            new, _ = span.add(n, ("n", len(dirs)))
            if new:
                dirs.append(n)
        self._directions[key] = dirs
        return dirs


def _bound_key(bound):
    return bound if isinstance(bound, int) or bound is None else id(bound)


@lru_cache(maxsize=64)
def context(h: Poly) -> CurveContext:
    return CurveContext(h)


# ---------------------------------------------------------------------------
# the search

class _Search:
    def __init__(self, ctx: CurveContext, delta: Derivation, L: int, bound, mode, counter):
        self.ctx = ctx
        self.delta = delta
        self.L = L
        self.mode = mode
        self.counter = counter
        self.bound = bound
        ddeg = max((c.degree() for c in delta), default=0)
        self._default_scale = max(ctx.deg, ddeg + 1, 1)
        self.deepest = 1
        self.next_param = 0
        self.branching = False

    def slot_bound(self, i: int) -> int:
        if self.bound is None:
            return i * self._default_scale
        if isinstance(self.bound, int):
            return self.bound
        return int(self.bound(i))

    def run(self):
        ctx = self.ctx
        p = ctx.p
        residue = mod_reduce(apply_derivation(self.delta, ctx.h), ctx.h)
        if not residue.is_zero():
            raise NotLogarithmic("derivation is not h-logarithmic", residue)
        images = []
        for v in range(ctx.nvars):
            x = ctx.freduce({(tuple(int(j == v) for j in range(ctx.nvars)), ()): 1})
            images.append([x, ctx.freduce(ctx.poly_to_flat(self.delta[v]))])
        if self.mode == GREEDY:
            self.counter.tick()
            final = self._extend(images, 2)
            return self._finish(final, exhaustive=False)
        self.counter.tick()
        final = self._extend(images, 2)
        if final is None and self.L >= 2:
            self.branching = True
            self.deepest = 1
            final = self._extend(images, 2)
        return self._finish(final, exhaustive=True)

    def _finish(self, final, exhaustive):
        ctx = self.ctx
        if final is None:
            return LeapWitness(self.deepest, self.counter.used, self.slot_bound(self.deepest),
                               self.mode, exhaustive)
        zero = Poly.zero(ctx.field, ctx.nvars)
        images = []
        for v, slots in enumerate(final):
            # slot 1 keeps the caller's representative; changing any slot by a
            # multiple of h moves every D_i(h) only within <h>
            coeffs = [Poly.var(ctx.field, ctx.nvars, v), self.delta[v]]
            coeffs += [ctx.flat_to_poly(s) for s in slots[2:self.L + 1]]
            coeffs += [zero] * (self.L + 1 - len(coeffs))
            images.append(coeffs)
        D = HSDerivation(images)
        report = is_logarithmic(D, ctx.h)
        if not report.ok:
            raise AssertionError(f"solver produced an invalid integral (step {report.first_failure[0]})")
        return IntegralCertificate(D, ctx.h, self.L)

    # one step -----------------------------------------------------------------
    def _known(self, images, j):
        """mu^j coefficient of phi(h) mod h, with slot j still zero."""
        ctx = self.ctx
        p = ctx.p
        nv = ctx.nvars
        cache = {}

        def smul(a, b, n):
            out = [{} for _ in range(n + 1)]
            for i1, f in enumerate(a):
                if not f or i1 > n:
                    continue
                for i2 in range(0, n + 1 - i1):
                    if i2 < len(b) and b[i2]:
                        _fadd_into(out[i1 + i2], _fmul(f, b[i2], p), p)
            return [ctx.freduce(c) if c else c for c in out]

        def power(v, e, n):
            key = (v, e, n)
            if key in cache:
                return cache[key]
            if e == 1:
                s = list(images[v][: n + 1])
                s += [{}] * (n + 1 - len(s))
            elif e % p == 0:
                base = power(v, e // p, n // p)
                s = [{} for _ in range(n + 1)]
                for k, f in enumerate(base):
                    if f:
                        s[k * p] = ctx.freduce({(tuple(x * p for x in b), q): c
                                                for (b, q), c in f.items()})
            else:
                s = smul(power(v, e - 1, n), power(v, 1, n), n)
            cache[key] = s
            return s

        total = {}
        one = (0,) * nv
        for mono, c in ctx.h.terms.items():
            factors = [power(v, e, j) for v, e in enumerate(mono) if e]
            if not factors:
                continue
            acc = factors[0]
            for f in factors[1:-1]:
                acc = smul(acc, f, j)
            if len(factors) == 1:
                coeff = acc[j]
            else:
                last = factors[-1]
                coeff = {}
                for i1 in range(j + 1):
                    if acc[i1] and last[j - i1]:
                        _fadd_into(coeff, _fmul(acc[i1], last[j - i1], p), p)
            if coeff:
                _fadd_into(total, coeff, p, c)
        return ctx.freduce(total)

    def _solve(self, images, j):
        """Returns ('ok', slot), ('fail',), ('linear', subs) or ('branch', param)."""
        ctx = self.ctx
        p = ctx.p
        B = self.slot_bound(j)
        ech, _ = ctx.echelon(B)
        known = self._known(images, j)
        groups: Dict[tuple, dict] = {}
        for (b, q), c in known.items():
            groups.setdefault(q, {})[b] = (-c) % p
        eqs: Dict[tuple, dict] = {}
        combos = {}
        for q, rhs in groups.items():
            rem, combo = ech.reduce(rhs)
            combos[q] = combo
            for b, c in rem.items():
                eqs.setdefault(b, {})[q] = c
        if eqs:
            eq_list = [eqs[b] for b in sorted(eqs)]
            if not self.branching or all(list(eq) == [()] for eq in eq_list):
                return ("fail",)
            return self._resolve(eq_list)
        slot = [{} for _ in range(ctx.nvars)]
        for q, combo in combos.items():
            for (m, v), c in combo.items():
                slot[v][(m, q)] = c
        if self.branching:
            for n in ctx.directions(j, self.L, B, self.bound, self.counter):
                t = self.next_param
                self.next_param += 1
                pm = ((t, 1),)
                for (m, v), c in n.items():
                    key = (m, pm)
                    slot[v][key] = (slot[v].get(key, 0) + c) % p
        return ("ok", slot)

    def _resolve(self, eq_list):
        p = self.ctx.p
        linear = [eq for eq in eq_list if _is_linear(eq)]
        if not linear:
            params = sorted({t for eq in eq_list for q in eq for t, _ in q})
            return ("branch", params[0])
        rows: Dict[int, dict] = {}
        subs = []
        for eq in linear:
            row = {(q[0][0] if q else None): c for q, c in eq.items()}
            for t, expr in subs:
                if t in row:
                    a = row.pop(t)
                    for k2, c2 in expr.items():
                        w = (row.get(k2, 0) + a * c2) % p
                        if w:
                            row[k2] = w
                        else:
                            row.pop(k2, None)
            params = [t for t in row if t is not None]
            if not params:
                if row.get(None, 0):
                    return ("fail",)
                continue
            piv = max(params)
            inv = pow(row[piv], -1, p)
            expr = {k2: (-c2 * inv) % p for k2, c2 in row.items() if k2 != piv}
            subs.append((piv, expr))
        if not subs:
            params = sorted({t for eq in eq_list for q in eq for t, _ in q})
            return ("branch", params[0])
        return ("linear", subs)

    def _substitute(self, images, t, expr):
        p = self.ctx.p
        base = {((k, 1),) if k is not None else (): c for k, c in expr.items()}
        powers = {1: base}
        for e in range(2, p):
            powers[e] = _pm_dict_mul(powers[e - 1], base, p)
        out = []
        for slots in images:
            new = []
            for s in slots:
                if any(any(tt == t for tt, _ in q) for _, q in s):
                    new.append(_fsubst(s, t, powers, p))
                else:
                    new.append(s)
            out.append(new)
        return out

    def _extend(self, images, j):
        p = self.ctx.p
        while j <= self.L:
            outcome = self._solve(images, j)
            kind = outcome[0]
            if kind == "ok":
                images = [slots + [outcome[1][v]] for v, slots in enumerate(images)]
                j += 1
            elif kind == "fail":
                self.deepest = max(self.deepest, j)
                return None
            elif kind == "linear":
                for t, expr in outcome[1]:
                    images = self._substitute(images, t, expr)
            else:
                t = outcome[1]
                for value in range(p):
                    self.counter.tick()
                    expr = {None: value} if value else {}
                    result = self._extend(self._substitute(images, t, expr), j)
                    if result is not None:
                        return result
                return None
        return images


def integrate(delta, h: Poly, L: int, B=None, search: str = GREEDY,
              budget: Optional[int] = None):
    """Search for an h-logarithmic length-L integral of a derivation.

    ``B`` is the degree bound on new image coefficients: None for the default
    ``i * max(deg h, deg delta + 1)`` at step i, an int for a constant bound,
    or a callable of the step.  Returns an IntegralCertificate (re-verified by
    an independent expansion) or a LeapWitness.
    """
    if L < 1:
        raise LengthExceeded("target length must be positive")
    if search not in (GREEDY, EXHAUSTIVE):
        raise ValueError(f"unknown search mode {search!r}")
    delta = derivation_of(delta)
    ctx = context(h)
    counter = _Counter(budget if budget is not None else default_budget())
    return _Search(ctx, delta, L, B, search, counter).run()


def max_integrable_length(delta, h: Poly, upto: int, B=None, budget=None) -> int:
    """Largest n <= upto with an exhaustive n-integral (0 if not logarithmic)."""
    delta = derivation_of(delta)
    ctx = context(h)
    if not mod_reduce(apply_derivation(delta, h), h).is_zero():
        return 0
    result = integrate(delta, h, upto, B, EXHAUSTIVE, budget)
    if isinstance(result, IntegralCertificate):
        return upto
    return result.failed_at - 1


def euler_integral(weights: Sequence[int], L: int, p: int) -> HSDerivation:
    """x_v -> x_v (1 + mu)^(w_v), truncated at mu^(L+1)."""
    from math import comb
    field = PrimeField(p)
    nvars = len(weights)
    images = []
    for v, w in enumerate(weights):
        x = Poly.var(field, nvars, v)
        images.append([x.scale(comb(w, i)) for i in range(L + 1)])
    return HSDerivation(images)


def gradient_multiple_integral(delta, f: Poly, L: int, decomposition, B=None, budget=None):
    """Integral of a derivation given as delta(x_v) = sum_w a[v][w] * df/dx_w.

    The decomposition witnesses membership in the gradient ideal times Der;
    it is checked, together with delta(f) in <f>, before searching.
    """
    delta = derivation_of(delta)
    grad = gradient(f)
    for v, row in enumerate(decomposition):
        acc = Poly.zero(f.field, f.nvars)
        for a, g in zip(row, grad):
            acc = acc + a * g
        if acc != delta[v]:
            raise NotApplicable(f"decomposition does not reproduce component {v}")
    if not mod_reduce(apply_derivation(delta, f), f).is_zero():
        raise NotApplicable("derivation is not f-logarithmic")
    return integrate(delta, f, L, B, EXHAUSTIVE, budget)


@dataclass
class ProbeResult:
    verdicts: Dict[str, object] = field(default_factory=dict)
    integrable: List[Derivation] = field(default_factory=list)


def ider_probe(h: Poly, m: int, candidates, B=None, budget=None) -> ProbeResult:
    """Integrability verdict for each candidate; the integrable ones span an under-approximation."""
    result = ProbeResult()
    for cand in candidates:
        cand = derivation_of(cand)
        verdict = integrate(cand, h, m, B, EXHAUSTIVE, budget)
        result.verdicts[format_derivation(cand)] = verdict
        if isinstance(verdict, IntegralCertificate):
            result.integrable.append(cand)
    return result
