import pytest

from hsint.errors import DegenerateInput, LengthExceeded, LengthMismatch
from hsint.ffpoly import Poly, PrimeField
from hsint.hsderiv import (HSDerivation, apply, component, compose, extend_freely, from_derivation,
                           from_slots, identity, invert, scale, stretch, truncate)
from hsint.parsing import parse_derivation, parse_poly

F3 = PrimeField(3)


def P(text, p=3):
    return parse_poly(text, p)


def shift_x(p, m):
    """x -> x + mu, y -> y at length m."""
    f = PrimeField(p)
    zero = Poly.zero(f, 2)
    return HSDerivation([[Poly.var(f, 2, 0), Poly.one(f, 2)] + [zero] * (m - 1),
                         [Poly.var(f, 2, 1)] + [zero] * m])


def test_from_derivation_images():
    D = from_derivation(parse_derivation("dx", 3))
    assert D.images[0].coeffs == (P("x"), P("1"))
    assert D.images[1].coeffs == (P("y"), P("0"))
    d1 = parse_derivation("4*x*dx + 3*y*dy", 5)
    D1 = from_derivation(d1)
    assert D1.slot(1) == d1
    assert from_derivation(parse_derivation("0", 3)) == identity(F3, 2, 1)


def test_image_constant_slot_is_checked():
    with pytest.raises(DegenerateInput):
        HSDerivation([[P("x + 1"), P("0")], [P("y"), P("0")]])
    with pytest.raises(LengthMismatch):
        HSDerivation([[P("x"), P("0")], [P("y"), P("0"), P("0")]])


def test_apply_shift_on_curve():
    h = P("x^3 - y^4")
    s = apply(shift_x(3, 3), h)
    assert s[0] == h and s[1] == 0 and s[2] == 0 and s[3] == 1
    ident = apply(identity(F3, 2, 4), h)
    assert ident[0] == h and all(c == 0 for c in ident.coeffs[1:])


def test_component_bounds():
    D = shift_x(3, 2)
    f = P("x*y")
    assert component(D, f, 0) == f
    assert component(D, f, 1) == P("y")
    with pytest.raises(LengthExceeded):
        component(D, f, 3)


def test_component_matches_step_shape():
    # x -> x + y^g mu on x^3 - y^4: coefficient of mu^3 is y^(3g)
    D = HSDerivation([[P("x"), P("y")] + [P("0")] * 2, [P("y")] + [P("0")] * 3])
    assert component(D, P("x^3 - y^4"), 3) == P("y^3")


def test_group_operations_examples():
    D = from_slots([parse_derivation("x*dx + y^2*dy", 3), parse_derivation("dy", 3)])
    ident = identity(F3, 2, 2)
    assert compose(D, ident) == D and compose(ident, D) == D
    assert compose(D, invert(D)) == ident
    assert invert(ident) == ident
    delta = parse_derivation("x*dx + 2*dy", 3)
    neg = tuple(-c for c in delta)
    assert invert(from_derivation(delta)) == from_derivation(neg)
    E = shift_x(3, 3)
    Einv = invert(E)
    assert Einv.images[0].coeffs == (P("x"), P("2"), P("0"), P("0"))
    with pytest.raises(LengthMismatch):
        compose(D, identity(F3, 2, 3))


def test_compose_convention():
    # (D o E)_2 = D_2 + D_1 E_1 + E_2 on x
    D = from_slots([parse_derivation("y*dx", 3), parse_derivation("0", 3)])
    E = from_slots([parse_derivation("x*dx", 3), parse_derivation("0", 3)])
    DE = compose(D, E)
    x = P("x")
    assert DE.images[0][2] == component(D, component(E, x, 1), 1)


def test_scale_and_truncate():
    D = from_slots([parse_derivation("x*dx", 3), parse_derivation("y*dy", 3)])
    one = Poly.one(F3, 2)
    assert scale(one, D) == D
    assert scale(Poly.zero(F3, 2), D) == identity(F3, 2, 2)
    assert truncate(D, 2) == D
    assert truncate(D, 1) == from_derivation(D.first())
    with pytest.raises(LengthExceeded):
        truncate(D, 3)
    with pytest.raises(DegenerateInput):
        truncate(D, 0)


def test_extend_freely_and_stretch():
    D = from_derivation(parse_derivation("y*dx", 3))
    E = extend_freely(D, 4)
    assert E.length == 4 and truncate(E, 1) == D
    assert extend_freely(identity(F3, 2, 1), 3) == identity(F3, 2, 3)
    with pytest.raises(LengthExceeded):
        extend_freely(E, 2)
    S = stretch(D, 3, 6)
    assert S.slot(3) == D.first() and S.slot(1) == (P("0"), P("0"))


def test_record_roundtrip():
    D = from_slots([parse_derivation("x*dx + 2*y^2*dy", 3), parse_derivation("dy", 3)])
    rec = D.to_record()
    assert rec["p"] == 3 and rec["length"] == 2 and rec["variables"] == ["x", "y"]
    assert rec["images"][0] == [[1, "x"]]
    assert HSDerivation.from_record(rec) == D
