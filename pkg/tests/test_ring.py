import random

import pytest
from hypothesis import given, settings, strategies as st

from biq.algebra.field import make_field
from biq.algebra.ring import (
    Free, Nilpotent, Rewrite, SymRing, Unit, UnitCyclic, test_ring as make_test_ring,
)
from biq.errors import AttributeViolation, NotInvertible, TooLarge

F2, F3 = make_field(2), make_field(3)


def char3_ring():
    return SymRing(F3, [("b", Unit()), ("c", Free()), ("d", Nilpotent(3)), ("a", UnitCyclic(3))])


def char2_ring():
    return SymRing(F2, [("lam", Free()), ("b", Unit()), ("c", Free()), ("d", Nilpotent(4)),
                        ("e", Nilpotent(2)), ("z", Rewrite(3, "lam*z + 1"))])


def test_normalize_examples():
    r = char3_ring()
    d, a = r.gen("d"), r.gen("a")
    assert d * d * d == 0
    assert a ** 4 == a
    r2 = char2_ring()
    z, lam = r2.gen("z"), r2.gen("lam")
    assert z ** 3 == lam * z + 1


def random_expr(r, rng, terms=4, maxexp=4):
    out = r.zero
    for _ in range(terms):
        m = r.one.scale(rng.randrange(1, r.p))
        for name, attr in zip(r.names, r.attrs):
            k = rng.randrange(-2 if isinstance(attr, Unit) else 0, maxexp)
            m = m * r.gen(name) ** k
        out = out + m
    return out


@pytest.mark.parametrize("make", [char3_ring, char2_ring])
def test_normal_form_multiplicative_and_idempotent(make):
    r = make()
    rng = random.Random(7)
    for _ in range(1000):
        x, y = random_expr(r, rng, 3, 3), random_expr(r, rng, 3, 3)
        assert r.elem(x.terms) == x
        assert r.elem(dict((x * y).terms)) == x * y
        z = random_expr(r, rng, 2, 2)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_rewrite_confluence_by_alternate_order():
    r = char2_ring()
    z = r.gen("z")
    # z^5 computed as z^3*z^2 and z^4*z must agree
    assert (z ** 3) * (z ** 2) == (z ** 4) * z


def test_inverse_unit_plus_nilpotent():
    r = char3_ring()
    b, d, a = r.gen("b"), r.gen("d"), r.gen("a")
    for x in (b + d, b ** 2 - d * b, a, 1 + a, b * (1 + a) + d):
        assert x * x.inverse() == 1
    with pytest.raises(NotInvertible):
        (1 - a).inverse()
    with pytest.raises(NotInvertible):
        d.inverse()


def test_substitute_checks():
    r = char3_ring()
    t3 = make_test_ring(F3, [("e", 3)])
    t4 = make_test_ring(F3, [("e", 4)])
    x = r.parse("b*c + d")
    img = x.substitute({"b": 1, "c": 0, "d": t3.gen("e"), "a": 1}, t3)
    assert img == t3.gen("e")
    with pytest.raises(AttributeViolation) as err:
        x.substitute({"b": 1, "c": 0, "d": t4.gen("e"), "a": 1}, t4)
    assert err.value.generator == "d"
    with pytest.raises(AttributeViolation):
        x.substitute({"b": 0, "c": 0, "d": 0, "a": 1}, t3)


def test_substitute_is_homomorphism():
    r = char3_ring()
    t = make_test_ring(make_field(3, 2), [("e", 2)])
    rng = random.Random(3)
    e = t.gen("e")
    assign = {"b": t.const(4) + e, "c": t.const(5) * e + 1, "d": e, "a": t.one}
    for _ in range(100):
        x, y = random_expr(r, rng, 3, 3), random_expr(r, rng, 3, 3)
        sx, sy = x.substitute(assign, t), y.substitute(assign, t)
        assert (x * y).substitute(assign, t) == sx * sy
        assert (x + y).substitute(assign, t) == sx + sy


def test_enumerate_counts():
    t = make_test_ring(F2, [("e", 2)])
    els = list(t.enumerate())
    assert [str(x) for x in els] == ["0", "1", "e", "e + 1"]
    t8 = make_test_ring(make_field(2, 3), [("e", 2)])
    assert len(set(t8.enumerate())) == 64
    t3 = make_test_ring(F3, [("e", 3)])
    assert sum(1 for _ in t3.units()) == 18


def test_enumerate_guard(monkeypatch):
    monkeypatch.setenv("BIQ_MAX_ENUM", "10")
    with pytest.raises(TooLarge):
        list(make_test_ring(F2, [("e", 4)]).enumerate())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_nilpotent_images(cs):
    t = make_test_ring(F3, [("e", 2), ("f", 3)])
    x = t.from_coords(cs)
    nil = x - x.constant()
    assert nil ** 4 == 0
    if x.constant():
        assert x * x.inverse() == 1
