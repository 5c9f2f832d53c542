import pytest
from hypothesis import given, settings, strategies as st

from hsint.errors import DegenerateInput, InvalidField, NotDivisible, ParseError, ZeroDivisor
from hsint.ffpoly import (Poly, PrimeField, divides, exact_div, gradient, is_prime, mod_reduce,
                          padic_split, partial, pow_, ring)
from hsint.parsing import format_derivation, parse_derivation, parse_poly

from strategies import nonzero_polys, polys


def P(text, p, nvars=2):
    return parse_poly(text, p, nvars)


def test_prime_field_rejects_composites():
    for bad in (0, 1, 4, 9, 561):
        with pytest.raises(InvalidField):
            PrimeField(bad)
    assert PrimeField(7).inv(3) == 5


def test_is_prime_matches_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))
    assert all(is_prime(n) == slow(n) for n in range(2000))


@pytest.mark.parametrize("n,p,expected", [(9, 3, (2, 1)), (12, 2, (2, 3)), (5, 3, (0, 5))])
def test_padic_split(n, p, expected):
    split = padic_split(n, p)
    assert tuple(split) == expected
    assert split.unit_part * p ** split.alpha == n


def test_padic_split_zero():
    with pytest.raises(DegenerateInput):
        padic_split(0, 3)


def test_partials():
    assert partial(P("x^3 - y^4", 3), 0).is_zero()
    assert partial(P("x^3 - y^4", 3), 1) == P("2*y^3", 3)
    assert partial(P("x^4 + y^6 + y^7", 2), 0).is_zero()
    assert gradient(P("x^2*y", 5)) == (P("2*x*y", 5), P("x^2", 5))


def test_exact_div_examples():
    h = P("x^3 - y^4", 3)
    assert exact_div(h, h) == 1
    assert exact_div(h * P("x + y", 3), h) == P("x + y", 3)
    with pytest.raises(NotDivisible):
        exact_div(h + 1, h)
    with pytest.raises(ZeroDivisor):
        exact_div(h, Poly.zero(h.field, 2))


def test_mod_reduce_examples():
    h = P("x^3 - y^4", 3)
    assert mod_reduce(P("x^3", 3), h) == P("y^4", 3)
    assert mod_reduce(P("y^4", 3), h) == P("y^4", 3)
    f = P("x^3*y + x", 3)
    r = mod_reduce(f, h)
    assert r == P("y^5 + x", 3)
    assert divides(h, f - r)


def test_pow_examples():
    assert pow_(P("x + y", 2), 2) == P("x^2 + y^2", 2)
    assert pow_(P("x - y", 3), 3) == P("x^3 - y^3", 3)
    assert pow_(P("x + 1", 5), 0) == 1


def test_parse_examples():
    assert P("x^3 - y^4", 3) == P("x^3 + 2*y^4", 3)
    assert P("x^3 - y^4", 3).to_string() == "x^3 + 2*y^4"
    assert P("x^4 + y^6 + y^7", 2).to_string() == "x^4 + y^7 + y^6"
    with pytest.raises(ParseError) as err:
        P("x^^2", 3)
    assert err.value.offset == 2
    with pytest.raises(ParseError):
        P("x + z", 3)
    with pytest.raises(InvalidField):
        P("x", 4)


def test_parse_grammar_extensions():
    assert P("2x^2y", 5) == P("2*x^2*y", 5)
    assert P("(x+1)^2", 3) == P("x^2 + 2*x + 1", 3)
    assert P("-x", 3) == P("2*x", 3)
    assert P("7", 5) == 2
    assert parse_poly("x1*x3 + x2", 3, 3).to_string() == "x1*x3 + x2"


def test_derivation_strings():
    d = parse_derivation("x*dx + (1+y)*dy", 3)
    assert d == (P("x", 3), P("y + 1", 3))
    assert format_derivation(d) == "x*dx + (y + 1)*dy"
    assert parse_derivation("dx - dy", 3) == (P("1", 3), P("2", 3))
    assert format_derivation(parse_derivation("0", 3)) == "0"
    with pytest.raises(ParseError):
        parse_derivation("x*y", 3)


def test_ring_helper():
    field, (x, y) = ring(5)
    assert field.p == 5 and (x * y).to_string() == "x*y"


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(polys(p), polys(p), polys(p))))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f + g == g + f
    assert f - f == 0


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(polys(p), nonzero_polys(p))))
def test_division_laws(fh):
    f, h = fh
    assert exact_div(f * h, h) == f
    r = mod_reduce(f, h)
    assert mod_reduce(r, h) == r
    assert divides(h, f - r)
    assert (r.is_zero()) == divides(h, f)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), polys(p), polys(p))))
def test_frobenius_and_mixed_partials(pfg):
    p, f, g = pfg
    assert pow_(f + g, p) == pow_(f, p) + pow_(g, p)
    assert pow_(f, p) == f.frobenius()
    assert partial(partial(f, 0), 1) == partial(partial(f, 1), 0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(polys))
def test_print_parse_roundtrip(f):
    assert parse_poly(f.to_string(), f.field, 2) == f
    assert parse_poly(f.to_string(), f.field, 2).to_string() == f.to_string()
