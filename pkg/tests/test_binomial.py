import itertools

import pytest

from hsint.binomial import (INF, annihilator_B, binom_mod, binomial_curve, c_coefficients,
                            classify, closed_form_integral, der_log_full, invariants, leaps,
                            multinomial_mod, power_leaps, power_reduce, special_branch)
from hsint.errors import InvalidField, NoInverse, NotALeap, NotAPowerCase, NotApplicable, \
    UsePowerReduce
from hsint.ffpoly import Poly, PrimeField
from hsint.hsderiv import from_derivation, truncate
from hsint.logint import is_logarithmic
from hsint.parsing import parse_derivation, parse_poly


def gens(mod):
    return [(pc["lo"], pc["hi"], pc["generators"]) for pc in mod.report()["pieces"]]


def test_invariants_examples():
    inv = invariants(3, 3, 4)
    assert (inv.alpha, inv.s, inv.m_rem, inv.beta, inv.gamma, inv.t) == (1, 1, 1, 1, 1, 1)
    inv = invariants(3, 3, 5)
    assert (inv.alpha, inv.s, inv.m_rem, inv.gamma) == (1, 1, 2, 2)
    inv = invariants(2, 2, 3)
    assert (inv.alpha, inv.s, inv.m_rem, inv.beta, inv.gamma) == (1, 1, 1, 1, 1)
    with pytest.raises(InvalidField):
        invariants(4, 3, 4)


@pytest.mark.parametrize("p,n,q", [(p, n, q) for p in (2, 3, 5, 7)
                                   for n in range(1, 30) for q in range(1, 30)])
def test_invariant_laws(p, n, q):
    inv = invariants(p, n, q)
    assert n == inv.s * p ** inv.alpha and inv.s % p
    assert 0 <= inv.m_rem < p
    if inv.gamma is not None:
        pa = p ** inv.alpha
        assert inv.gamma * pa >= q - 1 > (inv.gamma - 1) * pa
    if inv.beta is not None:
        assert inv.t * p ** inv.beta == q - inv.m_rem and inv.t % p


def test_classify_examples():
    assert gens(classify(3, 3, 4)) == [(1, 3, ["dx"]), (3, 9, ["x*dx", "y*dx"]),
                                       (9, "inf", ["x*dx", "y^2*dx"])]
    assert classify(3, 3, 4).leaps == {3, 9}
    assert gens(classify(3, 3, 5)) == [(1, 3, ["dx"]), (3, "inf", ["x*dx", "y^2*dx"])]
    assert gens(classify(5, 3, 4)) == [(1, "inf", ["4*x*dx + 3*y*dy", "4*y^3*dx + 3*x^2*dy"])]
    assert gens(classify(3, 6, 1)) == [(1, "inf", ["dx"])]
    with pytest.raises(UsePowerReduce):
        classify(3, 9, 12)


def test_leaps_examples():
    assert leaps(3, 3, 4) == {3, 9}
    assert leaps(5, 3, 4) == set()
    assert leaps(2, 2, 3) == {2, 4}


def test_degenerate_line_flagged():
    mod = classify(5, 1, 1)
    assert mod.branch == "a" and any("degenerate" in f for f in mod.flags)


@pytest.mark.parametrize("p,n,q", [(p, n, q) for p in (2, 3, 5)
                                   for n in range(1, 13) for q in range(1, 13)
                                   if (n % p == 0) != (q % p == 0)])
def test_swap_symmetry(p, n, q):
    a, b = classify(p, n, q), classify(p, q, n)
    assert a.leaps == b.leaps
    swap = lambda s: s.replace("x", "#").replace("y", "x").replace("#", "y")
    for pa, pb in zip(gens(a), gens(b)):
        assert pa[:2] == pb[:2]
        assert pa[2] == [swap(g) for g in pb[2]]


@pytest.mark.parametrize("p,n,q", [(p, n, q) for p in (2, 3, 5)
                                   for n in range(1, 13) for q in range(1, 13)
                                   if n % p or q % p])
def test_piece_structure(p, n, q):
    mod = classify(p, n, q)
    pieces = mod.pieces
    assert pieces[0].lo == 1 and pieces[-1].hi == INF
    for a, b in zip(pieces, pieces[1:]):
        assert a.hi == b.lo
        assert set(a.generators) != set(b.generators)
    assert mod.leaps == {pc.lo for pc in pieces[1:]}
    assert len(mod.leaps) <= 2


def test_lucas():
    from math import comb
    for p in (2, 3, 5, 7):
        for a in range(40):
            for b in range(-1, 42):
                assert binom_mod(a, b, p) == (comb(a, b) % p if 0 <= b <= a else 0)
    from math import factorial
    for parts in [(3, 1, 2), (5, 0, 4), (2, 2, 2, 1)]:
        exact = factorial(sum(parts))
        for k in parts:
            exact //= factorial(k)
        for p in (2, 3, 5):
            assert multinomial_mod(parts, p) == exact % p


def test_c_coefficients():
    assert c_coefficients(invariants(3, 3, 5), 1) == [2]
    for p, n, q in [(3, 6, 5), (5, 10, 7), (2, 6, 5)]:
        inv = invariants(p, n, q)
        assert c_coefficients(inv, 1)[0] == inv.s * pow(q, -1, p) % p
    with pytest.raises(NoInverse):
        c_coefficients(invariants(3, 3, 6), 2)


def test_closed_form_examples():
    cf = closed_form_integral(3, 3, 5, 27)
    assert cf.gamma_used == 2
    for i, C, xe, ye in cf.v_terms:
        assert xe == 0 and ye == i + 1
    h = binomial_curve(3, 3, 5)
    assert is_logarithmic(cf.derivation, h).ok
    cf4 = closed_form_integral(3, 3, 4, 27)
    assert cf4.gamma_used == 2 and is_logarithmic(cf4.derivation, binomial_curve(3, 3, 4)).ok
    first = truncate(cf4.derivation, 1)
    assert first == from_derivation(parse_derivation("y^2*dx", 3))
    with pytest.raises(NotApplicable):
        closed_form_integral(5, 3, 4, 5)


def test_closed_form_exponents_nonnegative():
    for p in (2, 3, 5):
        for n in range(p, 41, p):
            for q in range(2, 41):
                if q % p == 0:
                    continue
                cf = closed_form_integral(p, n, q, 6 * p ** invariants(p, n, q).alpha)
                assert all(xe >= 0 and ye >= 0 for _, _, xe, ye in cf.v_terms)


def test_annihilators():
    ann = annihilator_B(3, 3, 4, 9)
    assert [str(g) for g in ann.generators] == ["y"] and ann.contains_gradient_ideal
    ann = annihilator_B(3, 3, 5, 3)
    assert [str(g) for g in ann.generators] == ["x", "y"]
    assert any("discrepancy" in f for f in ann.flags)
    assert not annihilator_B(3, 3, 4, 3).flags
    with pytest.raises(NotALeap):
        annihilator_B(5, 3, 4, 5)
    with pytest.raises(NotALeap):
        annihilator_B(3, 3, 4, 4)


def test_der_log_full():
    assert der_log_full(parse_poly("x^3 - y^3", 3))
    assert not der_log_full(parse_poly("x^3 - y^4", 3))
    assert der_log_full(parse_poly("1", 3))


def test_power_leaps_and_reduce():
    assert power_leaps(3, 3, 4, 1) == {3, 9, 27}
    assert power_leaps(5, 3, 4, 2) == {25}
    assert power_leaps(3, 3, 4, 0) == {3, 9}
    red = power_reduce(3, 9, 12)
    assert (red.tau, red.n_reduced, red.q_reduced) == (1, 3, 4)
    assert red.leaps == {3, 9, 27}
    assert "pullback" in red.report()
    red = power_reduce(2, 4, 6)
    assert (red.tau, red.n_reduced, red.q_reduced) == (1, 2, 3)
    with pytest.raises(NotAPowerCase):
        power_reduce(3, 3, 4)
