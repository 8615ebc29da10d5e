import random

from hypothesis import given, settings, strategies as st

from biq.algebra.field import make_field
from biq.algebra.ring import Free, SymRing
from biq.algebra.series import Series

F13 = SymRing(make_field(13), [])


def test_identity_composition():
    z = Series.variable(F13, 6)
    g = Series(F13, [0, 3, 5, 7], 6)
    assert z.compose(g) == g


def test_inverse_example():
    f = Series(F13, [0, 1, 1], 4)
    assert f.func_inverse().coeffs == [F13(c) for c in (0, 1, 12, 2)]


def test_w_solve():
    r = SymRing(make_field(2), [("lam", Free())])
    lam = r.gen("lam")
    z3 = Series(r, [0, 0, 0, 1], 7)
    w = Series(r, [], 7)
    for _ in range(2):
        w = z3 + w * w * lam
    assert w == Series(r, [0, 0, 0, 1, 0, 0, lam], 7)
    assert z3 == w + w * w * lam


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=5, max_size=5), st.integers(1, 12))
def test_inverse_round_trip(cs, lin):
    f = Series(F13, [0, lin] + cs, 7)
    h = f.func_inverse()
    assert f.compose(h) == Series.variable(F13, 7)
    assert h.compose(f) == Series.variable(F13, 7)
