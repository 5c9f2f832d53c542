"""Hypothesis strategies for small polynomials and Hasse-Schmidt derivations."""

from hypothesis import strategies as st

from hsint.ffpoly import Poly, PrimeField
from hsint.hsderiv import HSDerivation

PRIMES = (2, 3, 5)


def polys(p, nvars=2, max_terms=3, max_deg=3):
    field = PrimeField(p)
    mono = st.tuples(*[st.integers(0, max_deg)] * nvars)
    term = st.tuples(mono, st.integers(1, p - 1))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: Poly(field, nvars, _collect(ts, p)))


def _collect(ts, p):
    out = {}
    for m, c in ts:
        out[m] = (out.get(m, 0) + c) % p
    return out


def nonzero_polys(p, nvars=2, max_terms=3, max_deg=3):
    return polys(p, nvars, max_terms, max_deg).filter(lambda f: not f.is_zero())


def derivations(p, length, nvars=2, max_terms=2, max_deg=2):
    """Random HS derivations of a fixed length via random image coefficients."""
    field = PrimeField(p)
    coeffs = st.lists(polys(p, nvars, max_terms, max_deg), min_size=length, max_size=length)
    return st.lists(coeffs, min_size=nvars, max_size=nvars).map(
        lambda cs: HSDerivation([[Poly.var(field, nvars, v)] + cs[v] for v in range(nvars)]))


@st.composite
def field_and_length(draw, primes=(2, 3), max_len=4):
    return draw(st.sampled_from(primes)), draw(st.integers(1, max_len))
