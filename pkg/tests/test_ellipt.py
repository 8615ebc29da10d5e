import itertools

import pytest
from hypothesis import given, settings, strategies as st

from biq import ellipt
from biq.algebra.field import make_field
from biq.algebra.ring import Free, Rewrite, SymRing, UnitCyclic
from biq.algebra.series import Series
from biq.ellipt import (
    AffineAut, IsoSub, WCurve, affine, autO_enum, centralizer_O, compose_affine, compose_aut, conjugate_affine,
    contact_order, expand_substitution, fixed_locus, formal_expand, formal_group_law, invert_affine, invert_aut,
    normalizer_O, torsion_count, translation,
)
from biq.errors import BoundExceeded, CurveMismatch
from biq.grouprec import closure

F2, F3, F4, F9, F13 = make_field(2), make_field(3), make_field(2, 2), make_field(3, 2), make_field(13)

CURVES = {
    "p13.generic": WCurve.from_ints(F13, [0, 0, 0, 2, 6]),
    "p13.1728": WCurve.from_ints(F13, [0, 0, 0, 1, 0]),
    "p13.0": WCurve.from_ints(F13, [0, 0, 0, 0, 1]),
    "p3.ord": WCurve.from_ints(F9, [0, 1, 0, 0, 1]),
    "p3.ss": WCurve.from_ints(F9, [0, 0, 0, -1, 0]),
    "p2.ord": WCurve.from_ints(F4, [1, 0, 0, 0, 1]),
    "p2.ss": WCurve.from_ints(F4, [0, 0, 1, 0, 0]),
}


def all_points(c):
    f = c.f
    pts = [None]
    for x in range(f.q):
        for y in range(f.q):
            if c.contains((x, y)):
                pts.append((x, y))
    return pts


def weierstrass(c, x, y):
    f = c.f
    lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(c.a1, x), c.a3)))
    return f.sub(lhs, c.rhs(x))


def brute_auts(c):
    """(u, r, s, t) with F(u²x + r, u³y + u²sx + t) = u⁶ F(x, y) at every point of F_q²."""
    f = c.f
    out = []
    grid = list(itertools.product(range(f.q), repeat=2))
    for u in range(1, f.q):
        u2 = f.mul(u, u)
        u3 = f.mul(u2, u)
        u6 = f.mul(u3, u3)
        for r, s, t in itertools.product(range(f.q), repeat=3):
            if all(weierstrass(c, f.add(f.mul(u2, x), r), f.add(f.add(f.mul(u3, y), f.mul(f.mul(u2, s), x)), t))
                   == f.mul(u6, weierstrass(c, x, y)) for x, y in grid):
                out.append((u, r, s, t))
    return sorted(out)


# -- curves and points --------------------------------------------------------

@pytest.mark.parametrize("name", sorted(CURVES))
def test_j_and_reduction_type(name):
    c = CURVES[name]
    j = {"p13.1728": 1728 % 13, "p13.0": 0, "p3.ss": 0, "p2.ss": 0}
    if name in j:
        assert c.j == j[name]
    assert c.supersingular == name.endswith(".ss")


@pytest.mark.parametrize("name", sorted(CURVES))
def test_rational_torsion_by_brute_force(name):
    c = CURVES[name]
    pts = all_points(c)
    for n in (2, 3, 4):
        want = sorted((P for P in pts if P is not None and c.mul(n, P) is None))
        assert ellipt._rational_torsion(c, n) == [None] + want


@pytest.mark.parametrize("name", sorted(CURVES))
def test_full_torsion_reaches_geometric_count(name):
    c = CURVES[name]
    pts, cm, m = ellipt.torsion(c, 2)
    assert len(pts) == torsion_count(c, 2)
    assert all(cm.mul(2, P) is None for P in pts)


def test_torsion_beyond_field_ceiling():
    # E[3] of this curve is not rational over F_13 or F_169
    with pytest.raises(BoundExceeded):
        ellipt.torsion(CURVES["p13.generic"], 3, max_degree=2)
    pts, _, m = ellipt.torsion(CURVES["p13.0"], 3)
    assert len(pts) == 9 and m == 3  # only 3 points over F_169 (brute force)


def test_point_not_on_curve():
    with pytest.raises(CurveMismatch):
        IsoSub(CURVES["p13.1728"], ((1, 1),))


@pytest.mark.parametrize("name", sorted(CURVES))
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_point_group_axioms(name, data):
    c = CURVES[name]
    pts = _points_cached(name)
    P, Q, S = (data.draw(st.sampled_from(pts)) for _ in range(3))
    assert c.add(c.add(P, Q), S) == c.add(P, c.add(Q, S))
    assert c.add(P, Q) == c.add(Q, P)
    assert c.add(P, None) == P
    assert c.add(P, c.neg(P)) is None


_PTS = {}


def _points_cached(name):
    if name not in _PTS:
        _PTS[name] = all_points(CURVES[name])
    return _PTS[name]


# -- Aut(E, O) ---------------------------------------------------------------

@pytest.mark.parametrize("name,order", [("p13.generic", 2), ("p13.1728", 4), ("p13.0", 6), ("p3.ord", 2),
                                        ("p3.ss", 12), ("p2.ord", 2), ("p2.ss", 24)])
def test_aut_enum_matches_brute_force(name, order):
    c = CURVES[name]
    got = sorted(h.key() for h in autO_enum(c))
    assert len(got) == order
    assert got == brute_auts(c)


@pytest.mark.parametrize("name", ["p13.0", "p3.ss", "p2.ss"])
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_aut_group_axioms(name, data):
    auts = autO_enum(CURVES[name])
    a, b, c = (data.draw(st.sampled_from(auts)) for _ in range(3))
    assert compose_aut(compose_aut(a, b), c).key() == compose_aut(a, compose_aut(b, c)).key()
    assert compose_aut(a, invert_aut(a)).is_identity()
    P = data.draw(st.sampled_from(_points_cached(name)))
    assert compose_aut(a, b)(P) == a(b(P))


@pytest.mark.parametrize("name", ["p13.1728", "p3.ss", "p2.ss"])
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_affine_group_axioms(name, data):
    c = CURVES[name]
    pts, auts = _points_cached(name), autO_enum(c)

    def draw():
        return AffineAut(c, data.draw(st.sampled_from(pts)), data.draw(st.sampled_from(auts)))

    x, y, z = draw(), draw(), draw()
    assert compose_affine(compose_affine(x, y), z).key() == compose_affine(x, compose_affine(y, z)).key()
    assert compose_affine(x, invert_affine(x)).key() == affine(ellipt.identity_aut(c)).key()
    P = data.draw(st.sampled_from(pts))
    assert compose_affine(x, y)(P) == x(y(P))
    assert conjugate_affine(x, y)(P) == x(y(invert_affine(x)(P)))


# -- expansions --------------------------------------------------------------

@pytest.mark.parametrize("name", ["p13.0", "p3.ss", "p2.ss"])
def test_expansion_is_multiplicative(name):
    auts = autO_enum(CURVES[name])
    for a in auts:
        for b in auts:
            lhs = formal_expand(compose_aut(a, b), 6)
            assert lhs == formal_expand(a, 6).compose(formal_expand(b, 6))


def test_expansion_linear_term_is_u_inverse():
    c = CURVES["p13.1728"]
    for h in autO_enum(c):
        assert formal_expand(h, 4)[1] == c.f.inv(h.u)


def m2_ring():
    return SymRing(F2, [("lam", Free()), ("b", UnitCyclic(3)), ("c", Rewrite(4, "lam*c")),
                        ("d", Rewrite(2, "lam*d + c^6"))])


def test_m2_expansion_golden():
    R = m2_ring()
    lam, b, c, d = (R.gen(n) for n in ("lam", "b", "c", "d"))
    a = (R.zero, R.zero, lam, R.zero, R.zero)
    got = expand_substitution(a, (b, c ** 2, c, d), R, 4)
    z = Series.variable(R, 4)
    assert got == z * b ** 2 + z * z * (b * c)


def test_m2_formal_group_law_golden():
    R = m2_ring()
    lam = R.gen("lam")
    F = formal_group_law((R.zero, R.zero, lam, R.zero, R.zero), R, 4)
    want = {(1, 0): R.one, (0, 1): R.one, (2, 2): lam}
    for i in range(4):
        for j in range(4):
            assert F[i, j] == want.get((i, j), R.zero)


def test_formal_group_law_supersingular_char2_at_lambda_one():
    F = ellipt.curve_fgl(CURVES["p2.ss"], 4)
    assert F[1, 0] == 1 and F[0, 1] == 1 and F[2, 2] == 1 and F[1, 1] == 0


# -- fixed loci and subgroups ---------------------------------------------------

def test_fixed_locus_j1728():
    c = CURVES["p13.1728"]
    i = next(h for h in autO_enum(c) if ellipt.aut_order(h) == 4)
    fl = fixed_locus(i)
    assert fl.points == (None, (0, 0)) and fl.v == 1 and fl.label == "Z/2"


def test_fixed_locus_of_inversion_is_2_torsion():
    c = CURVES["p13.generic"]
    neg = next(h for h in autO_enum(c) if not h.is_identity())
    fl = fixed_locus(neg)
    assert len(fl.points) == torsion_count(c, 2)


def test_contact_order_supersingular_char3():
    # every order-3 automorphism of y² = x³ - x moves O only to first order in z^3
    c = CURVES["p3.ss"]
    for h in autO_enum(c):
        if ellipt.aut_order(h) == 3:
            assert contact_order(h) == 3
            assert fixed_locus(h).connected == "α3"


def test_centralizer_of_two_torsion_at_j1728():
    c = CURVES["p13.1728"]
    assert len(centralizer_O(IsoSub(c, ((0, 0),)))) == 4
    assert len(centralizer_O(IsoSub(c, ((5, 0),)))) == 2
    assert len(normalizer_O(IsoSub(c, ((5, 0),)))) == 2


# -- translations against stabilizers ------------------------------------------------

def subgroups_of_torsion(c, bound=9):
    """Subgroups of E(k) of order ≤ bound generated by at most two points."""
    pts = [P for P in _all_points_any(c) if P is not None and c.order(P) <= bound]
    seen = {}
    for P in pts:
        for Q in [None] + pts:
            S = frozenset(ellipt.subgroup_points(c, (P,) if Q is None else (P, Q)))
            if len(S) <= bound:
                seen[S] = True
    return list(seen)


def _all_points_any(c):
    for name, cc in CURVES.items():
        if cc == c:
            return _points_cached(name)
    return all_points(c)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_translation_lemma(name):
    """G₂ normalizes ⟨h⟩ ⇔ G₂ commutes with ⟨h⟩ ⇔ G₂ ⊆ E^h, for translation groups G₂."""
    c = CURVES[name]
    for h in autO_enum(c):
        if h.is_identity():
            continue
        G1 = [affine(g) for g in closure([h], compose_aut, key=lambda g: g.key())]
        g1keys = {x.key() for x in G1}
        fixed = {P for P in _points_cached(name) if h(P) == P}
        for G2 in subgroups_of_torsion(c):
            T = [translation(c, s) for s in G2]
            normalizes = all(conjugate_affine(t, x).key() in g1keys for t in T for x in G1)
            commutes = all(compose_affine(t, x).key() == compose_affine(x, t).key() for t in T for x in G1)
            inside = set(G2) <= fixed
            assert normalizes == commutes == inside
