import random

import pytest
from hypothesis import given, settings, strategies as st

from biq.algebra.field import make_field
from biq.algebra.ring import Free, Nilpotent, Rewrite, SymRing, Unit, UnitCyclic, test_ring as make_ring
from biq.cuspaut import (
    CuspAut, FAMILIES, ParamEndo, STATED, ambient_elements, base_change, centralizer_brute,
    centralizer_enum, centralizer_structure, compose, conjugate, family, generic_element, generic_ring,
    induced_ad, inverse_closed_form, invert, normalizer_enum, reduce_lambda, stated_groups,
    verify_conditions,
)
from biq.errors import EnumMismatch, LambdaForbidden, LambdaRequired, NotInNormalizer, ShapeViolation

F2, F3, F4, F8, F9 = make_field(2), make_field(3), make_field(2, 2), make_field(2, 3), make_field(3, 2)


def sym(p, attr, lam=False, extra=()):
    R = generic_ring(p, lam_symbolic=lam, extra=extra).extend([("a", attr)])
    return R, generic_element(R, p), {n: R.gen(n) for n in R.names}


# -- closed forms ---------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3])
def test_inverse_matches_closed_form(p):
    R = generic_ring(p)
    h = generic_element(R, p)
    assert invert(h) == inverse_closed_form(h)
    assert compose(h, invert(h)).is_identity()
    assert compose(invert(h), h).is_identity()


def test_char2_composition_t4_coefficient():
    R = SymRing(F2, [(f"{n}{i}", a) for i in (1, 2) for n, a in
                     (("b", Unit()), ("c", Free()), ("d", Nilpotent(4)), ("e", Nilpotent(2)))])
    g = lambda n: R.gen(n)
    h1 = CuspAut(2, (g("b1"), g("c1"), g("d1"), g("e1")))
    h2 = CuspAut(2, (g("b2"), g("c2"), g("d2"), g("e2")))
    e = compose(h1, h2).e
    assert e == g("b1") * g("e2") + g("d1") * g("d2") ** 2 + g("e1") * g("b2") ** 4
    assert not e * e


def test_conjugation_char3_mu3():
    R, h, v = sym(3, UnitCyclic(3))
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    got = conjugate(h, family("p3.a").universal(R))
    assert got == CuspAut(3, (a, (1 - a) * b ** -1 * (c ** 3 - c), (1 - a) * (b ** 2 - b ** -1 * d)), False)


def test_conjugation_char3_alpha3_and_sign():
    R, h, v = sym(3, Nilpotent(3))
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    assert conjugate(h, family("p3.d").universal(R)) == CuspAut(3, (R.one, a * b ** -1 * c ** 3, a * b ** 2), False)
    neg = CuspAut.make(3, R, b=-1)
    assert conjugate(h, neg) == CuspAut(3, (-R.one, b ** -1 * c - b ** -4 * c ** 3 * d, R.zero), False)


def test_conjugation_char2_mu2():
    R, h, v = sym(2, UnitCyclic(2), lam=True)
    a, b, c, d, e, l = (v[n] for n in ("a", "b", "c", "d", "e", "lam"))
    want = (a, (a + 1) * b ** -1 * (c + l * c ** 2 + c ** 4), (a + 1) * (b ** -1 * d + l * b),
            (a + 1) * (b ** -1 * e + l * b ** -1 * d ** 2 + b ** 3))
    assert conjugate(h, family("p2.a", "symbolic").universal(R)) == CuspAut(2, want, False)


def test_conjugation_char2_mu4():
    R, h, v = sym(2, UnitCyclic(4))
    a, b, c, d, e = (v[n] for n in "abcde")
    want = (a, (a + 1) * b ** -1 * (c + a * c ** 2 + (a + 1) * (b ** -2 * c ** 2 * d + b ** -2 * c ** 4 * d + c ** 4)),
            (a + a * a) * (b ** -1 * d + b),
            (a + 1) * (b ** -1 * e + a * b ** -1 * d ** 2 + (a + 1) * (b ** -3 * d ** 3 + b * d + b ** 3)))
    assert conjugate(h, family("p2.d").universal(R)) == CuspAut(2, want, False)


def test_conjugation_char2_alpha2():
    R, h, v = sym(2, Nilpotent(2), lam=True)
    a, b, c, d, l = (v[n] for n in ("a", "b", "c", "d", "lam"))
    want = (R.one, a * b ** -1 * (l * c ** 2 + c ** 4), l * a * b, a * (l * b ** -1 * d ** 2 + b ** 3))
    assert conjugate(h, family("p2.f", "symbolic").universal(R)) == CuspAut(2, want, False)


def test_conjugation_char2_omega():
    R, h, v = sym(2, Nilpotent(2), extra=[("w", Rewrite(2, "w + 1"))])
    b, c, d, e, w = (v[n] for n in ("b", "c", "d", "e", "w"))
    want = (w, w ** 2 * b ** -1 * (c + b ** -4 * c ** 4 * e + w ** 2 * b ** -2 * c ** 2 * d + b ** -6 * c ** 4 * d ** 3),
            b ** -1 * d, b ** -3 * d ** 3)
    assert conjugate(h, CuspAut.make(2, R, b=w)) == CuspAut(2, want, False)


def test_conjugation_char2_m2():
    R, h, v = sym(2, Nilpotent(4), lam=True)
    a, b, c, d, l = (v[n] for n in ("a", "b", "c", "d", "lam"))
    want = (R.one, a * b ** -1 * (1 + a * (l * c ** 2 + c ** 4 + b ** -2 * d)), l * a * a * b,
            a * a * (l * b ** -1 * d ** 2 + b ** 3))
    assert conjugate(h, family("p2.h", "symbolic").universal(R)) == CuspAut(2, want, False)


def test_conjugation_by_identity():
    R, h, v = sym(3, UnitCyclic(3))
    g = family("p3.a").universal(R)
    assert conjugate(CuspAut.identity(3, R), g) == g


# -- families ---------------------------------------------------------------

LAWS = {"mul": lambda x, y, l: x * y, "add": lambda x, y, l: x + y, "m2": lambda x, y, l: x + y + l * x * x * y * y}


@pytest.mark.parametrize("key", sorted(FAMILIES))
def test_family_group_law(key):
    spec = FAMILIES[key]
    lam = "symbolic" if spec.lam in ("any", "binary", "nonzero") else None
    fam = family(key, lam)
    gens = [("lam", Free())] if lam else []
    R = SymRing(make_field(spec.p), gens + [("a1", spec.param_attr), ("a2", spec.param_attr)])
    a1, a2 = R.gen("a1"), R.gen("a2")
    law = LAWS[spec.law](a1, a2, fam.lam_value(R))
    assert compose(fam.element(a1), fam.element(a2), validate=True) == fam.element(law)
    assert fam.element(R.const(spec.identity_param)).is_identity()


def test_universal_examples():
    R = SymRing(F3, [("a", UnitCyclic(3))])
    g = family("p3.a").universal(R)
    assert g.coeffs == (R.gen("a"), R.zero, 1 - R.gen("a"))
    R = SymRing(F2, [("lam", Free()), ("a", Nilpotent(4))])
    g = family("p2.h", "symbolic").universal(R)
    a, l = R.gen("a"), R.gen("lam")
    assert g.coeffs == (R.one, a, l * a * a, a * a)


def test_lambda_errors():
    with pytest.raises(LambdaRequired):
        family("p2.a")
    with pytest.raises(LambdaForbidden):
        family("p2.h", 0)
    with pytest.raises(LambdaForbidden):
        family("p3.a", 1)


def test_readoff_examples():
    R = SymRing(F3, [("b", Unit()), ("a", Nilpotent(3))])
    a, b = R.gen("a"), R.gen("b")
    fam = family("p3.d")
    assert fam.readoff(CuspAut(3, (R.one, R.zero, a * b ** 2), False)) == a * b ** 2
    assert fam.readoff(CuspAut.identity(3, R)) == 0
    assert fam.readoff(CuspAut(3, (R.one, R.one, a), False)) is None


def test_shape_violation():
    R = make_ring(F3, [("e", 4)])
    with pytest.raises(ShapeViolation):
        CuspAut.make(3, R, b=1, d=R.gen("e"))


# -- group axioms over test rings ---------------------------------------------

RINGS = {2: [make_ring(F2, [("e", 4)]), make_ring(F4, [("e", 2)])], 3: [make_ring(F3, [("e", 3)]), make_ring(F9, [("e", 2)])]}


def random_aut(p, R, rng):
    els = list(R.enumerate())
    units = [x for x in els if x.is_unit()]
    nil_d = [x for x in els if not x ** (3 if p == 3 else 4)]
    coeffs = [rng.choice(units), rng.choice(els), rng.choice(nil_d)]
    if p == 2:
        coeffs.append(rng.choice([x for x in els if not x * x]))
    return CuspAut(p, coeffs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 0), (2, 1), (3, 0), (3, 1)]), st.integers(0, 10 ** 6))
def test_group_axioms(case, seed):
    p, i = case
    R = RINGS[p][i]
    rng = random.Random(seed)
    x, y, z = (random_aut(p, R, rng) for _ in range(3))
    assert compose(compose(x, y), z) == compose(x, compose(y, z))
    assert compose(x, invert(x)).is_identity() and compose(invert(x), x).is_identity()
    invert(x).validate()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_base_change_functorial(seed):
    rng = random.Random(seed)
    src = make_ring(F2, [("e", 4)])
    dst = make_ring(F4, [("e", 2)])
    x, y = random_aut(2, src, rng), random_aut(2, src, rng)
    bc = lambda h: base_change(h, dst, {"e": dst.gen("e")})
    assert bc(compose(x, y)) == compose(bc(x), bc(y))


# -- solvers ----------------------------------------------------------------

@pytest.mark.parametrize("key,lam,R", [
    ("p3.a", None, make_ring(F3, [("e", 2)])), ("p3.d", None, make_ring(F3, [("e", 2)])),
    ("p3.e", None, make_ring(F3, [("e", 2)])), ("p2.a", 1, make_ring(F2, [("e", 2)])),
    ("p2.h", 1, make_ring(F2, [("e", 2)])), ("p2.f", 0, make_ring(F2, [("e", 2)])),
    ("p2.e", None, make_ring(F2, [("e", 2)])),
])
@pytest.mark.parametrize("kind", ["centralizer", "normalizer"])
def test_solver_matches_brute_force(key, lam, R, kind):
    fam = family(key, lam)
    solver = centralizer_enum if kind == "centralizer" else normalizer_enum
    got = {h.key() for h in solver(fam, R).elements}
    assert got == {h.key() for h in centralizer_brute(fam, R, kind)}


def test_mu2_centralizer_count_over_f8_dual_numbers():
    # (Z/2)^2 x μ2 at λ = 1: four étale points times the μ2 points over F_8[ε]/ε²
    R = make_ring(F8, [("e", 2)])
    res = centralizer_enum(family("p2.a", 1), R)
    assert len(res) == 32
    assert res.table is not None


def test_centralizer_inside_normalizer():
    for key, lam, R in [("p3.d", None, make_ring(F9, [("e", 2)])), ("p2.h", 1, make_ring(F4, [("e", 2)]))]:
        fam = family(key, lam)
        c = set(centralizer_enum(fam, R, with_table=False).ids)
        n = set(normalizer_enum(fam, R, with_table=False).ids)
        assert c <= n and len(c) < len(n)


def test_alpha3_normalizer_has_every_scaling():
    res = normalizer_enum(family("p3.d"), make_ring(F9))
    assert sorted(h.b.constant() for h in res.elements) == list(range(1, 9))


def test_alpha2_omega_normalizer_kpoints_are_scalings():
    res = normalizer_enum(family("p2.g", 0), make_ring(F4))
    assert all(not h.c and not h.d and not h.e for h in res.elements)
    assert len(res) == 3


def test_centralizer_sound_over_extension():
    fam = family("p2.f", 1)
    R = make_ring(F2, [("e", 2)])
    big = make_ring(F4, [("e", 2)])
    bigA = fam.param_ring(big)
    g = fam.universal(bigA)
    for h in centralizer_enum(fam, R).elements:
        hb = base_change(h, bigA, {"e": bigA.gen("e")})
        assert compose(hb, g) == compose(g, hb)


# -- stated systems ------------------------------------------------------------

@pytest.mark.parametrize("group", [("p3.d", "centralizer", None), ("p2.a", "centralizer", "symbolic"),
                                   ("p2.d", "centralizer", None), ("p2.h", "centralizer", "symbolic"),
                                   ("p3.c", "normalizer", None)])
def test_verify_stated_system(group):
    report = verify_conditions(stated_groups()[group])
    assert report["symbolic"] and report["rings_checked"] >= 4


def test_dropped_equation_is_caught():
    stated = [s for s in STATED if s.key == "p2.d" and s.kind == "centralizer"][0]
    with pytest.raises(EnumMismatch) as exc:
        verify_conditions(stated.drop(0))
    assert exc.value.witness["side"] == "stated only"


# -- λ reduction and induced actions --------------------------------------------

def test_reduce_lambda():
    h, target, phi = reduce_lambda(family("p2.f", "symbolic"))
    assert str(phi) == "s^3*a"
    h, target, phi = reduce_lambda(family("p2.f", 1))
    assert h.is_identity()
    # λ = ω in F_4 (encoded 2): √ω = ω^2 = ω + 1 (encoded 3)
    h, target, phi = reduce_lambda(family("p2.f", 2))
    assert h.b.constant() == 3 and h.b ** 2 == 2


def test_induced_ad_alpha3_scales_by_b_squared():
    R = SymRing(F3, [("b", Unit()), ("c", Nilpotent(3)), ("d", Nilpotent(3))])
    ad = induced_ad(family("p3.d"), generic_element(R, 3))
    a, b = ad.ring.gen("a"), ad.ring.gen("b")
    assert ad.image == b * b * a
    assert ad.check_homomorphism()


def test_induced_ad_m2():
    R = SymRing(F2, [("lam", Free()), ("c", Free()), ("d", Nilpotent(2)), ("e", Nilpotent(2))])
    h = CuspAut(2, (R.one, R.gen("c"), R.gen("d"), R.gen("e")), False)
    ad = induced_ad(family("p2.h", "symbolic"), h)
    g = ad.ring.gen
    assert ad.image == g("a") + (g("lam") * g("c") ** 2 + g("c") ** 4 + g("d")) * g("a") ** 2
    assert ad.check_homomorphism()


def test_induced_ad_identity_and_non_normalizer():
    R = make_ring(F3)
    ad = induced_ad(family("p3.d"), CuspAut.identity(3, R))
    assert ad.is_identity()
    with pytest.raises(NotInNormalizer):
        induced_ad(family("p3.d"), CuspAut.make(3, R, c=1))


# -- C/α(G) structures --------------------------------------------------------------

@pytest.mark.parametrize("key,lam,field,label", [
    ("p3.a", None, (3, 1), "S3"), ("p3.b", None, (3, 1), "1"), ("p3.c", None, (3, 1), "1"),
    ("p3.d", None, (3, 2), "α3 ⋊ Z/2"), ("p3.e", None, (3, 2), "1"),
    ("p2.a", 1, (2, 3), "(Z/2)^2"), ("p2.a", 0, (2, 2), "A4"), ("p2.b", 0, (2, 2), "1"),
    ("p2.c", 1, (2, 3), "Z/2"), ("p2.d", None, (2, 1), "Z/2"), ("p2.e", None, (2, 1), "1"),
    ("p2.f", 1, (2, 2), "α2^2 ⋊ Z/2"), ("p2.f", 0, (2, 2), "(α4 ⋊ α4) ⋊ Z/3"),
    ("p2.g", 0, (2, 2), "1"), ("p2.h", 1, (2, 2), "α2 × Z/2"),
])
def test_centralizer_quotient_labels(key, lam, field, label):
    assert centralizer_structure(family(key, lam), make_field(*field)).label == label
