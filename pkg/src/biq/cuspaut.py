"""Substitution automorphisms of the cuspidal cubic's smooth locus.

In characteristic 3 an automorphism is t -> b t + c + d t^3 with b a unit
and d^3 = 0; in characteristic 2 it is t -> b t + c + d t^2 + e t^4 with
d^4 = e^2 = 0.  Coefficients live in a SymRing (symbolic or a finite test
ring); composition is h1(h2(t)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from biq.algebra.field import Field, make_field, roots
from biq.algebra.ring import (
    Free, Nilpotent, Rewrite, SymExpr, SymRing, Unit, UnitCyclic,
)
from biq.errors import (
    BiqError, LambdaForbidden, LambdaRequired, NotInNormalizer, RingMismatch, ShapeViolation,
)

DEGREES = {3: (1, 0, 3), 2: (1, 0, 2, 4)}
COEFF_NAMES = {3: ("b", "c", "d"), 2: ("b", "c", "d", "e")}


class CuspAut:
    """t -> b t + c + d t^p (+ e t^4 in characteristic 2)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs, validate: bool = True):
        if p not in DEGREES:
            raise BiqError(f"characteristic must be 2 or 3, got {p}")
        if len(coeffs) != len(DEGREES[p]):
            raise ShapeViolation(f"expected {len(DEGREES[p])} coefficients")
        self.p = p
        self.coeffs = tuple(coeffs)
        if validate:
            self.validate()

    @property
    def ring(self) -> SymRing:
        return self.coeffs[0].ring

    @property
    def b(self):
        return self.coeffs[0]

    @property
    def c(self):
        return self.coeffs[1]

    @property
    def d(self):
        return self.coeffs[2]

    @property
    def e(self):
        return self.coeffs[3] if self.p == 2 else self.ring.zero

    def validate(self):
        ring = self.ring
        if any(x.ring != ring for x in self.coeffs):
            raise RingMismatch("coefficients over different rings")
        if not self.b.is_unit():
            raise ShapeViolation(f"b = {self.b} is not a unit")
        if self.p == 3:
            if self.d ** 3:
                raise ShapeViolation(f"d = {self.d} has d^3 != 0")
        else:
            if self.d ** 4:
                raise ShapeViolation(f"d = {self.d} has d^4 != 0")
            if self.e ** 2:
                raise ShapeViolation(f"e = {self.e} has e^2 != 0")

    @classmethod
    def identity(cls, p: int, ring: SymRing) -> "CuspAut":
        zero = ring.zero
        return cls(p, (ring.one, zero, zero) + ((zero,) if p == 2 else ()), validate=False)

    @classmethod
    def make(cls, p, ring, b=1, c=0, d=0, e=0, validate=True) -> "CuspAut":
        vals = [ring(x) for x in (b, c, d, e)][: len(DEGREES[p])]
        return cls(p, vals, validate)

    def is_identity(self) -> bool:
        return self.b == 1 and all(not x for x in self.coeffs[1:])

    def __eq__(self, other):
        return isinstance(other, CuspAut) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def key(self):
        return tuple(tuple(sorted(x.terms.items())) for x in self.coeffs)

    def map_coeffs(self, fn) -> "CuspAut":
        return CuspAut(self.p, tuple(fn(x) for x in self.coeffs), validate=False)

    def __repr__(self):
        parts = [f"{n}={x}" for n, x in zip(COEFF_NAMES[self.p], self.coeffs)]
        return f"CuspAut[p={self.p}]({', '.join(parts)})"

    def as_polynomial(self) -> str:
        deg = DEGREES[self.p]
        terms = []
        for x, k in sorted(zip(self.coeffs, deg), key=lambda z: z[1]):
            if not x:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            xs = str(x)
            if mono:
                xs = "" if xs == "1" else (f"({xs})" if " " in xs else xs)
                terms.append(xs + mono)
            else:
                terms.append(xs)
        return "t -> " + (" + ".join(terms) or "0")


def compose(h1: CuspAut, h2: CuspAut, validate: bool = True) -> CuspAut:
    """h1 after h2, i.e. t -> h1(h2(t))."""
    if h1.p != h2.p:
        raise RingMismatch("characteristics differ")
    if h1.ring != h2.ring:
        raise RingMismatch(f"{h1.ring!r} vs {h2.ring!r}")
    if h1.p == 3:
        b1, c1, d1 = h1.coeffs
        b2, c2, d2 = h2.coeffs
        # d1 * h2(t)^3 = d1 (b2^3 t^3 + c2^3 + d2^3 t^9), and d1 d2^3 = 0
        if validate and d1 * d2 ** 3:
            raise ShapeViolation("t^9 term survives composition")
        out = (b1 * b2, b1 * c2 + c1 + d1 * c2 ** 3, b1 * d2 + d1 * b2 ** 3)
    else:
        b1, c1, d1, e1 = h1.coeffs
        b2, c2, d2, e2 = h2.coeffs
        # h2^2 = b2^2 t^2 + c2^2 + d2^2 t^4 + e2^2 t^8 and h2^4 = b2^4 t^4 + c2^4 + d2^4 t^8 + ...
        if validate and (d1 * e2 ** 2 or e1 * d2 ** 4 or e1 * e2 ** 4):
            raise ShapeViolation("t^8 term survives composition")
        c2sq = c2 * c2
        out = (
            b1 * b2,
            b1 * c2 + c1 + d1 * c2sq + e1 * c2sq * c2sq,
            b1 * d2 + d1 * b2 * b2,
            b1 * e2 + d1 * d2 * d2 + e1 * b2 ** 4,
        )
    result = CuspAut(h1.p, out, validate=False)
    if validate:
        result.validate()
    return result


def invert(h: CuspAut, validate: bool = True) -> CuspAut:
    """Compositional inverse via the fixed point u = b^-1 (t - c - d u^p - e u^4)."""
    p = h.p
    ring = h.ring
    binv = h.b.inverse()
    if p == 3:
        _, c, d = h.coeffs
        beta, gamma, delta = binv, -(binv * c), ring.zero
        for _ in range(12):
            new = (binv, -(binv * (c + d * gamma ** 3)), -(binv * d * beta ** 3))
            if new == (beta, gamma, delta):
                break
            beta, gamma, delta = new
        u = CuspAut(3, (beta, gamma, delta), validate=False)
    else:
        _, c, d, e = h.coeffs
        beta, gamma, delta, eps = binv, binv * c, ring.zero, ring.zero
        for _ in range(12):
            g2 = gamma * gamma
            new = (binv, binv * (c + d * g2 + e * g2 * g2), binv * d * beta * beta,
                   binv * (d * delta * delta + e * beta ** 4))
            if new == (beta, gamma, delta, eps):
                break
            beta, gamma, delta, eps = new
        u = CuspAut(2, (beta, gamma, delta, eps), validate=False)
    if validate and not compose(h, u, validate=False).is_identity():
        raise ShapeViolation("fixed-point inverse did not converge")
    return u


def conjugate(h: CuspAut, g: CuspAut, validate: bool = False) -> CuspAut:
    """h o g o h^-1 with elements acting as coordinate-ring maps.

    As substitutions this is t -> h^-1(g(h(t))).  Note conjugate(h1 h2, g)
    equals conjugate(h2, conjugate(h1, g)) for the substitution product.
    """
    return compose(invert(h, validate), compose(g, h, validate), validate)


def inverse_closed_form(h: CuspAut) -> CuspAut:
    """The displayed closed-form inverse, used as an independent check."""
    b, c, d = h.b, h.c, h.d
    bi = b.inverse()
    if h.p == 3:
        return CuspAut(3, (bi, bi ** 4 * (c ** 3 * d - b ** 3 * c), -(bi ** 4 * d)), validate=False)
    e = h.e
    return CuspAut(2, (
        bi,
        bi ** 7 * (b ** 6 * c + b ** 2 * c ** 4 * e + b ** 4 * c ** 2 * d + c ** 4 * d ** 3),
        bi ** 3 * d,
        bi ** 7 * (d ** 3 + b ** 2 * e),
    ), validate=False)


def base_change(h: CuspAut, target: SymRing, assignment=None) -> CuspAut:
    assignment = assignment or {}
    return h.map_coeffs(lambda x: x.substitute(assignment, target, check=False))


# ---------------------------------------------------------------------------
# action families

@dataclass(frozen=True)
class FamilySpec:
    key: str
    p: int
    group: str
    connected: str
    param_attr: object
    identity_param: int
    readoff: str
    law: str  # "mul" | "add" | "m2"
    lam: str  # "none" | "any" | "zero" | "nonzero" | "binary"
    etale: tuple = ()  # names of étale generators
    parent: str | None = None


FAMILIES = {
    "p3.a": FamilySpec("p3.a", 3, "μ3", "μ3", UnitCyclic(3), 1, "b", "mul", "none"),
    "p3.b": FamilySpec("p3.b", 3, "μ3 × Z/2", "μ3", UnitCyclic(3), 1, "b", "mul", "none", ("neg",), "p3.a"),
    "p3.c": FamilySpec("p3.c", 3, "μ3 × Z/3", "μ3", UnitCyclic(3), 1, "b", "mul", "none", ("shift1",), "p3.a"),
    "p3.d": FamilySpec("p3.d", 3, "α3", "α3", Nilpotent(3), 0, "d", "add", "none"),
    "p3.e": FamilySpec("p3.e", 3, "α3 × Z/2", "α3", Nilpotent(3), 0, "d", "add", "none", ("neg",), "p3.d"),
    "p2.a": FamilySpec("p2.a", 2, "μ2", "μ2", UnitCyclic(2), 1, "b", "mul", "any"),
    "p2.b": FamilySpec("p2.b", 2, "μ2 × Z/3", "μ2", UnitCyclic(2), 1, "b", "mul", "zero", ("omega",), "p2.a"),
    "p2.c": FamilySpec("p2.c", 2, "μ2 × Z/2", "μ2", UnitCyclic(2), 1, "b", "mul", "any", ("zeta",), "p2.a"),
    "p2.d": FamilySpec("p2.d", 2, "μ4", "μ4", UnitCyclic(4), 1, "b", "mul", "none"),
    "p2.e": FamilySpec("p2.e", 2, "μ4 × Z/2", "μ4", UnitCyclic(4), 1, "b", "mul", "none", ("shift1",), "p2.d"),
    "p2.f": FamilySpec("p2.f", 2, "α2", "α2", Nilpotent(2), 0, "e", "add", "binary"),
    "p2.g": FamilySpec("p2.g", 2, "α2 × Z/3", "α2", Nilpotent(2), 0, "e", "add", "zero", ("omega",), "p2.f"),
    "p2.h": FamilySpec("p2.h", 2, "M2", "M2", Nilpotent(4), 0, "c", "m2", "nonzero"),
}

READOFF_INDEX = {"b": 0, "c": 1, "d": 2, "e": 3}


def family_coeffs(key: str, a, lam):
    """Coefficient tuple of the family element with parameter a."""
    one = a.ring.one
    zero = a.ring.zero
    if key in ("p3.a", "p3.b", "p3.c"):
        return (a, zero, one - a)
    if key in ("p3.d", "p3.e"):
        return (one, zero, a)
    if key in ("p2.a", "p2.b", "p2.c"):
        return (a, zero, lam * (a + 1), a + 1)
    if key in ("p2.d", "p2.e"):
        return (a, zero, a + a * a, one + a * a)
    if key in ("p2.f", "p2.g"):
        return (one, zero, lam * a, a)
    if key == "p2.h":
        return (one, a, lam * a * a, a * a)
    raise KeyError(key)


class ActionFamily:
    """One family of subgroup-scheme actions, with λ fixed (concrete or symbolic)."""

    def __init__(self, key: str, lam=None):
        if key not in FAMILIES:
            raise BiqError(f"unknown family {key!r}")
        self.spec = FAMILIES[key]
        self.key = key
        self.p = self.spec.p
        mode = self.spec.lam
        if mode == "none" or mode == "zero":
            if lam not in (None, 0, "0"):
                raise LambdaForbidden(f"family {key} takes no λ (or λ = 0)")
            lam = None if mode == "none" else 0
        elif lam is None:
            raise LambdaRequired(f"family {key} needs λ")
        if mode == "nonzero" and lam in (0, "0"):
            raise LambdaForbidden(f"family {key} requires λ != 0")
        self.lam = lam  # int (field element), "symbolic", or None

    def __repr__(self):
        return f"ActionFamily({self.key}, λ={self.lam})"

    @property
    def symbolic_lambda(self) -> bool:
        return self.lam == "symbolic"

    @property
    def has_etale(self) -> bool:
        return bool(self.spec.etale)

    def parent(self) -> "ActionFamily | None":
        if self.spec.parent is None:
            return None
        lam = self.lam if FAMILIES[self.spec.parent].lam != "none" else None
        return ActionFamily(self.spec.parent, lam)

    # -- rings --------------------------------------------------------------
    def lam_value(self, ring: SymRing) -> SymExpr:
        if self.lam is None:
            return ring.zero
        if self.lam == "symbolic":
            return ring.gen("lam")
        return ring.const(self.lam)

    def param_ring(self, ring: SymRing, name: str = "a") -> SymRing:
        """ring ⊗ A_G for the connected part: adjoin the parameter a."""
        return ring.extend([(name, self.spec.param_attr)])

    def universal(self, ring: SymRing) -> CuspAut:
        """The universal element over ring ⊗ A_G (ring must contain 'a')."""
        a = ring.gen("a")
        return CuspAut(self.p, family_coeffs(self.key, a, self.lam_value(ring)), validate=False)

    def element(self, a: SymExpr) -> CuspAut:
        return CuspAut(self.p, family_coeffs(self.key, a, self.lam_value(a.ring)), validate=False)

    def identity_element(self, ring: SymRing) -> CuspAut:
        return self.element(ring.const(self.spec.identity_param))

    # -- étale generators ---------------------------------------------------
    def constant(self, name: str, ring: SymRing) -> SymExpr:
        """ω (order 3) or ζ (root of x^3 + λx + 1) in ring: a generator if present, else a field root."""
        gen = {"omega": "w", "zeta": "z"}[name]
        if gen in ring.index:
            return ring.gen(gen)
        f = ring.base
        if name == "omega":
            rs = roots([1, 1, 1], f)
        else:
            lam = self.lam or 0
            if lam == "symbolic":
                raise LambdaRequired("ζ needs a concrete λ or a generator z")
            rs = roots([1, lam, 0, 1], f)
        if not rs:
            raise BiqError(f"{name} is not defined over {f!r}")
        return ring.const(rs[0])

    def etale_generators(self, ring: SymRing) -> list[CuspAut]:
        out = []
        p = self.p
        for name in self.spec.etale:
            if name == "neg":
                out.append(CuspAut.make(p, ring, b=-1, validate=False))
            elif name == "shift1":
                out.append(CuspAut.make(p, ring, c=1, validate=False))
            elif name == "omega":
                out.append(CuspAut.make(p, ring, b=self.constant("omega", ring), validate=False))
            elif name == "zeta":
                out.append(CuspAut.make(p, ring, c=self.constant("zeta", ring), validate=False))
        return out

    def etale_group(self, ring: SymRing) -> list[CuspAut]:
        """All elements generated by the étale generators (k-points)."""
        gens = self.etale_generators(ring)
        elems = [CuspAut.identity(self.p, ring)]
        seen = {elems[0]}
        frontier = list(elems)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(x, g, validate=False)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            elems += nxt
            frontier = nxt
        return elems

    # -- membership ---------------------------------------------------------
    def readoff(self, h: CuspAut) -> SymExpr | None:
        """The parameter a with element(a) = h, or None."""
        a = h.coeffs[READOFF_INDEX[self.spec.readoff]]
        attr = self.spec.param_attr
        if isinstance(attr, UnitCyclic):
            if a ** attr.n != 1:
                return None
        elif a ** attr.n:
            return None
        if self.element(a) != h:
            return None
        return a

    def readoff_product(self, h: CuspAut, etale_elems) -> tuple | None:
        """(a, e) with h = element(a) o e for some étale element e, or None."""
        for e in etale_elems:
            x = compose(h, invert(e, validate=False), validate=False)
            a = self.readoff(x)
            if a is not None:
                return a, e
        return None


def family(key: str, lam=None) -> ActionFamily:
    return ActionFamily(key, lam)


# ---------------------------------------------------------------------------
# symbolic rings

def generic_ring(p: int, base: Field | None = None, lam_symbolic: bool = False, extra=()) -> SymRing:
    """F[λ][b^±1, c, d, e] with the substitution-group relations on d, e."""
    base = base or make_field(p)
    gens = [("lam", Free())] if lam_symbolic else []
    gens += [("b", Unit()), ("c", Free())]
    gens += [("d", Nilpotent(3))] if p == 3 else [("d", Nilpotent(4)), ("e", Nilpotent(2))]
    return SymRing(base, gens + list(extra))


def generic_element(ring: SymRing, p: int) -> CuspAut:
    return CuspAut(p, tuple(ring.gen(n) for n in COEFF_NAMES[p]), validate=False)


def etale_ring_gens(fam: ActionFamily):
    """Rewrite generators for ω and ζ used in symbolic checks."""
    out = []
    if "omega" in fam.spec.etale:
        out.append(("w", Rewrite(2, "w + 1")))
    if "zeta" in fam.spec.etale:
        out.append(("z", Rewrite(3, "lam*z + 1") if fam.symbolic_lambda else Rewrite(3, f"{fam.lam or 0}*z + 1")))
    return out


# ---------------------------------------------------------------------------
# condition systems and solvers

import functools  # noqa: E402

import numpy as np  # noqa: E402

from biq.algebra.finring import nilpotent_domain, ring_ops  # noqa: E402
from biq.algebra.polysys import PolySystem  # noqa: E402
from biq.errors import EnumMismatch, SymbolicFailure, TooLarge  # noqa: E402
from biq.grouprec import MAX_TABLE, MultTable  # noqa: E402


def _lam_key(fam: ActionFamily):
    return fam.lam if fam.lam is not None else 0


@functools.lru_cache(maxsize=256)
def _condition_system(key: str, lam, field: Field, kind: str) -> PolySystem:
    fam = ActionFamily(key, lam)
    p = fam.p
    S = generic_ring(p, field)
    SA = fam.param_ring(S)
    h = generic_element(SA, p)
    g = fam.universal(SA)
    names = COEFF_NAMES[p]
    exprs = []
    if kind == "centralizer":
        lhs, rhs = compose(g, h, validate=False), compose(h, g, validate=False)
        exprs += [x - y for x, y in zip(lhs.coeffs, rhs.coeffs)]
    elif kind == "normalizer":
        cj = conjugate(h, g)
        phi = cj.coeffs[READOFF_INDEX[fam.spec.readoff]]
        exprs += [x - y for x, y in zip(fam.element(phi).coeffs, cj.coeffs)]
        attr = fam.spec.param_attr
        exprs.append(phi ** attr.n - (1 if isinstance(attr, UnitCyclic) else 0))
    elif kind.startswith("normalizer@"):
        # connected normalizer plus: conjugate of the étale generator lands in G° o e'
        conn = fam.parent()
        base = _condition_system(conn.key, conn.lam, field, "normalizer")
        target = int(kind.split("@")[1])
        hS = generic_element(S, p)
        et = fam.etale_generators(S)[0]
        eprime = fam.etale_group(S)[target]
        x = compose(conjugate(hS, et), invert(eprime))
        phi = x.coeffs[READOFF_INDEX[conn.spec.readoff]]
        attr = conn.spec.param_attr
        extra = [u - v for u, v in zip(conn.element(phi).coeffs, x.coeffs)]
        extra.append(phi ** attr.n - (1 if isinstance(attr, UnitCyclic) else 0))
        return PolySystem(names, base.polys + PolySystem.from_exprs(extra, names).polys)
    else:
        raise BiqError(f"unknown condition kind {kind!r}")
    system = PolySystem.from_exprs(exprs, names, group_by=("a",))
    if kind == "centralizer" and fam.has_etale:
        extra = []
        for et in fam.etale_generators(S):
            lhs, rhs = compose(et, generic_element(S, p), validate=False), compose(generic_element(S, p), et, validate=False)
            extra += [x - y for x, y in zip(lhs.coeffs, rhs.coeffs)]
        system = PolySystem(names, system.polys + PolySystem.from_exprs(extra, names).polys)
    return system


def condition_system(fam: ActionFamily, field: Field, kind: str) -> PolySystem:
    """Polynomials in (b, c, d[, e]) cutting out the centralizer or the
    normalizer of the identity component, obtained by expanding the
    commutation (or readoff) condition against the universal element and
    splitting over the basis of the parameter algebra."""
    if fam.symbolic_lambda:
        raise LambdaRequired("condition systems need a concrete λ")
    return _condition_system(fam.key, fam.lam, field, kind)


def ambient_domains(p: int, ops) -> dict:
    dom = {"b": ops.units, "c": ops.all}
    if p == 3:
        dom["d"] = nilpotent_domain(ops, 3)
    else:
        dom["d"] = nilpotent_domain(ops, 4)
        dom["e"] = nilpotent_domain(ops, 2)
    return dom


def ambient_size(p: int, R: SymRing) -> int:
    ops = ring_ops(R)
    return int(np.prod([len(v) for v in ambient_domains(p, ops).values()]))


SEARCH_ORDER = {3: ("b", "d", "c"), 2: ("b", "d", "e", "c")}


def _ids_to_aut(p, ops, R, ids) -> CuspAut:
    return CuspAut(p, tuple(ops.to_expr(R, x) for x in ids), validate=False)


def _solve_ids(fam: ActionFamily, R: SymRing, kind: str, cap: int | None = None):
    ops = ring_ops(R)
    system = condition_system(fam, R.base, kind)
    names = COEFF_NAMES[fam.p]
    order = SEARCH_ORDER[fam.p]
    from biq.algebra.ring import max_enum
    cap = min(cap or max_enum(), max_enum())
    sols = system.solve(ops, ambient_domains(fam.p, ops), order=order, limit=cap + 1)
    if len(sols) > cap:
        raise TooLarge(f"{kind} of {fam.key} over {R!r} has more than {cap} points")
    perm = [order.index(n) for n in names]
    return [tuple(s[i] for i in perm) for s in sols]


def compose_ids(p, ops, h1, h2):
    """compose() on id tuples using the ring tables."""
    mul, add = ops.mul, ops.add
    if p == 3:
        b1, c1, d1 = h1
        b2, c2, d2 = h2
        c23 = ops.pow(c2, 3)
        b23 = ops.pow(b2, 3)
        return (mul(b1, b2), add(add(mul(b1, c2), c1), mul(d1, c23)), add(mul(b1, d2), mul(d1, b23)))
    b1, c1, d1, e1 = h1
    b2, c2, d2, e2 = h2
    c22 = mul(c2, c2)
    return (
        mul(b1, b2),
        add(add(mul(b1, c2), c1), add(mul(d1, c22), mul(e1, mul(c22, c22)))),
        add(mul(b1, d2), mul(d1, mul(b2, b2))),
        add(add(mul(b1, e2), mul(d1, mul(d2, d2))), mul(e1, ops.pow(b2, 4))),
    )


def table_from_ids(p, ops, sols) -> MultTable:
    """Multiplication table of a set of id tuples under composition."""
    n = len(sols)
    if n > MAX_TABLE:
        raise TooLarge(f"{n} elements exceed the table limit {MAX_TABLE}")
    index = {s: i for i, s in enumerate(sols)}
    arr = np.array(sols, dtype=np.int64).T if n else np.zeros((len(DEGREES[p]), 0), np.int64)
    left = [np.repeat(col, n) for col in arr]
    right = [np.tile(col, n) for col in arr]
    prod = compose_ids(p, ops, left, right)
    flat = list(zip(*[np.asarray(x).tolist() for x in prod]))
    table = []
    from biq.errors import NotClosed
    for i in range(n):
        row = []
        for j in range(n):
            k = index.get(flat[i * n + j])
            if k is None:
                raise NotClosed((i, j))
            row.append(k)
        table.append(row)
    return MultTable(table, elements=sols)


@dataclass
class SolverResult:
    family: ActionFamily
    ring: SymRing
    kind: str
    ids: list
    table: MultTable | None = None

    @property
    def elements(self) -> list[CuspAut]:
        ops = ring_ops(self.ring)
        return [_ids_to_aut(self.family.p, ops, self.ring, s) for s in self.ids]

    def __len__(self):
        return len(self.ids)


def _check_size(fam, R):
    from biq.algebra.ring import max_enum
    # the search scans the ring level by level, so the ring size is what is guarded
    n = R.base.q ** R.dimension() if R.ngens else R.base.q
    if n > max_enum():
        raise TooLarge(f"{R!r} has {n} elements, above the guard {max_enum()}")


def centralizer_enum(fam: ActionFamily, R: SymRing, with_table: bool = True, cap: int | None = None) -> SolverResult:
    """All R-points of the ambient group commuting with the universal element
    (and with the étale generators)."""
    _check_size(fam, R)
    ids = _solve_ids(fam, R, "centralizer", cap)
    table = table_from_ids(fam.p, ring_ops(R), ids) if with_table and len(ids) <= MAX_TABLE else None
    return SolverResult(fam, R, "centralizer", ids, table)


def normalizer_enum(fam: ActionFamily, R: SymRing, with_table: bool = True, cap: int | None = None) -> SolverResult:
    """All R-points whose conjugate of the universal element reads off in the
    family; for product families the étale generators must land in α(G)(R)."""
    _check_size(fam, R)
    if not fam.has_etale:
        ids = _solve_ids(fam, R, "normalizer", cap)
    else:
        # one étale generator in every family; its image picks a coset of G°
        ids = []
        for i in range(len(fam.etale_group(R))):
            ids += _solve_ids(fam, R, f"normalizer@{i}", cap)
    table = table_from_ids(fam.p, ring_ops(R), ids) if with_table and len(ids) <= MAX_TABLE else None
    return SolverResult(fam, R, "normalizer", ids, table)


def _etale_lands(conn: ActionFamily, h: CuspAut, et: CuspAut, group) -> bool:
    """Whether conjugate(h, et) lies in α(G)(R) = G°(R) · étale group."""
    return conn.readoff_product(conjugate(h, et), group) is not None


def ambient_elements(p: int, R: SymRing):
    ops = ring_ops(R)
    dom = ambient_domains(p, ops)
    names = COEFF_NAMES[p]
    import itertools
    for ids in itertools.product(*[dom[n] for n in names]):
        yield _ids_to_aut(p, ops, R, ids)


def centralizer_brute(fam: ActionFamily, R: SymRing, kind: str = "centralizer") -> list[CuspAut]:
    """Direct universal-element probe over R ⊗ A_G, element by element.

    Slow; used to cross-check the polynomial solver on small rings.
    """
    RA = fam.param_ring(R)
    base = fam if not fam.has_etale else fam.parent()
    g = base.universal(RA)
    gens = fam.etale_generators(R)
    group = fam.etale_group(R) if fam.has_etale else []
    out = []
    for h in ambient_elements(fam.p, R):
        hA = base_change(h, RA)
        cj = conjugate(hA, g)
        if kind == "centralizer":
            ok = cj == g and all(compose(h, et, False) == compose(et, h, False) for et in gens)
        else:
            ok = base.readoff(cj) is not None and all(_etale_lands(base, h, et, group) for et in gens)
        if ok:
            out.append(h)
    return out


# ---------------------------------------------------------------------------
# stated solution sets

@dataclass(frozen=True)
class SolutionSet:
    """A parametric description: generators with attributes and the
    coefficients (b, c, d[, e]) as expressions in them.  ``lam`` may appear
    in rules and expressions."""

    key: str
    kind: str  # centralizer | normalizer
    lam: object  # None, an F_p value, or "symbolic" (generic λ != 0)
    gens: tuple
    coeffs: tuple
    equations: tuple = ()
    shift: tuple = ()  # a fixed k-point composed on the right, for cosets

    def describe(self) -> str:
        gens = ", ".join(f"{n}: {a}" for n, a in self.gens)
        names = COEFF_NAMES[FAMILIES[self.key].p]
        cs = ", ".join(f"{n} = {x}" for n, x in zip(names, self.coeffs))
        tail = f" ∘ ({', '.join(self.shift)})" if self.shift else ""
        return f"{self.key} {self.kind} [λ={self.lam}] {{{gens}; {cs}}}{tail}"

    def drop(self, index: int) -> "SolutionSet":
        """A corrupted copy: generator ``index`` loses its relation (becomes Free or Unit)."""
        gens = list(self.gens)
        name, attr = gens[index]
        gens[index] = (name, Unit() if isinstance(attr, UnitCyclic) else Free())
        return SolutionSet(self.key, self.kind, self.lam, tuple(gens), self.coeffs, self.equations, self.shift)


def _S(key, kind, lam, gens, coeffs, equations=(), shift=()):
    return SolutionSet(key, kind, lam, tuple(gens), tuple(coeffs), tuple(equations), tuple(shift))


U, UC, N, RW, FR = Unit, UnitCyclic, Nilpotent, Rewrite, Free

STATED = [
    _S("p3.a", "centralizer", None, [("b", UC(6)), ("c", RW(3, "c"))], ["b", "c", "b^3 - b"],
       ["c^3 = c", "b^3 = d + b", "b^6 = 1"]),
    _S("p3.a", "normalizer", None, [("b", UC(6)), ("c", RW(3, "c"))], ["b", "c", "b^3 - b"],
       ["c^3 = c", "b^3 = d + b", "b^6 = 1"]),
    _S("p3.b", "centralizer", None, [("b", UC(6))], ["b", "0", "b^3 - b"], ["c = 0", "d = b^3 - b", "b^6 = 1"]),
    _S("p3.b", "normalizer", None, [("b", UC(6))], ["b", "0", "b^3 - b"], ["c = 0", "d = b^3 - b", "b^6 = 1"]),
    _S("p3.c", "centralizer", None, [("b", UC(3)), ("c", RW(3, "c"))], ["b", "c", "1 - b"],
       ["c^3 = c", "d = 1 - b", "b^3 = 1"]),
    _S("p3.c", "normalizer", None, [("b", UC(3)), ("c", RW(3, "c"))], ["b", "c", "1 - b"],
       ["c^3 = c", "d = 1 - b", "b^3 = 1"]),
    _S("p3.c", "normalizer", None, [("b", UC(3)), ("c", RW(3, "c"))], ["b", "c", "1 - b"],
       ["c^3 = c", "d = 1 - b", "b^3 = 1", "composed with t -> -t"], shift=["-1", "0", "0"]),
    _S("p3.d", "centralizer", None, [("b", UC(2)), ("c", N(3)), ("d", N(3))], ["b", "c", "d"], ["c^3 = 0", "b^2 = 1"]),
    _S("p3.d", "normalizer", None, [("b", U()), ("c", N(3)), ("d", N(3))], ["b", "c", "d"], ["c^3 = 0"]),
    _S("p3.e", "centralizer", None, [("b", UC(2)), ("d", N(3))], ["b", "0", "d"], ["c = 0", "b^2 = 1"]),
    _S("p3.e", "normalizer", None, [("b", U()), ("d", N(3))], ["b", "0", "d"], ["c = 0"]),
    _S("p2.a", "centralizer", "symbolic", [("b", UC(2)), ("c", RW(4, "lam*c^2 + c"))],
       ["b", "c", "lam*(b^2 + b)", "b^4 + b + lam^3*(b^4 + b^2)"],
       ["c^4 + λc^2 + c = 0", "d = λ(b^2 + b)", "e = b^4 + b + λ^3(b^4 + b^2)", "b^2 = 1"]),
    _S("p2.a", "centralizer", 0, [("b", UC(6)), ("c", RW(4, "c"))], ["b", "c", "0", "b^4 + b"],
       ["c^4 = c", "d = 0", "e = b^4 + b", "b^6 = 1"]),
    _S("p2.a", "normalizer", "symbolic", [("b", UC(2)), ("c", RW(4, "lam*c^2 + c"))],
       ["b", "c", "lam*(b^2 + b)", "b^4 + b + lam^3*(b^4 + b^2)"], ["normalizer = centralizer"]),
    _S("p2.a", "normalizer", 0, [("b", UC(6)), ("c", RW(4, "c"))], ["b", "c", "0", "b^4 + b"],
       ["normalizer = centralizer"]),
    _S("p2.b", "centralizer", 0, [("b", UC(6))], ["b", "0", "0", "b^4 + b"], ["c = 0", "d = 0", "e = b^4 + b", "b^6 = 1"]),
    _S("p2.b", "normalizer", 0, [("b", UC(6))], ["b", "0", "0", "b^4 + b"], ["c = 0", "d = 0", "e = b^4 + b", "b^6 = 1"]),
    _S("p2.c", "centralizer", "symbolic", [("b", UC(2)), ("c", RW(4, "lam*c^2 + c"))],
       ["b", "c", "lam*(b^2 + b)", "b^4 + b + lam^3*(b^4 + b^2)"], ["as for μ2, λ != 0"]),
    _S("p2.d", "centralizer", None, [("b", UC(4)), ("c", RW(2, "c"))], ["b", "c", "b^2 + b", "b^4 + b^2"],
       ["c + c^2 = 0", "d = b^2 + b", "e = b^4 + b^2", "b^4 = 1"]),
    _S("p2.d", "normalizer", None, [("b", UC(4)), ("c", RW(2, "c"))], ["b", "c", "b^2 + b", "b^4 + b^2"],
       ["normalizer = centralizer"]),
    _S("p2.e", "centralizer", None, [("b", UC(4)), ("c", RW(2, "c"))], ["b", "c", "b^2 + b", "b^4 + b^2"],
       ["c + c^2 = 0", "d = b^2 + b", "e = b^4 + b^2", "b^4 = 1"]),
    _S("p2.f", "centralizer", 1, [("c", RW(4, "c^2")), ("d", N(2)), ("e", N(2))], ["1", "c", "d", "e"],
       ["c^2 + c^4 = 0", "d^2 = 0", "b = 1"]),
    _S("p2.f", "normalizer", 1, [("b", UC(4)), ("c", RW(4, "c^2")), ("x", N(2)), ("e", N(2))],
       ["b", "c", "b^2 + b + x", "e"], ["c^2 + c^4 = 0", "d^2 = b^4 + b^2"]),
    _S("p2.f", "centralizer", 0, [("b", UC(3)), ("c", N(4)), ("d", N(4)), ("e", N(2))], ["b", "c", "d", "e"],
       ["c^4 = 0", "b^3 = 1"]),
    _S("p2.f", "normalizer", 0, [("b", U()), ("c", N(4)), ("d", N(4)), ("e", N(2))], ["b", "c", "d", "e"], ["c^4 = 0"]),
    _S("p2.g", "centralizer", 0, [("b", UC(3)), ("e", N(2))], ["b", "0", "0", "e"], ["c = 0", "d = 0", "b^3 = 1"]),
    _S("p2.g", "normalizer", 0, [("b", U()), ("e", N(2))], ["b", "0", "0", "e"], ["c = 0", "d = 0"]),
    _S("p2.h", "centralizer", "symbolic", [("c", RW(8, "lam^2*c^4")), ("e", N(2))], ["1", "c", "c^4 + lam*c^2", "e"],
       ["b = 1", "d = c^4 + λc^2", "c^8 + λ^2c^4 = 0"]),
    _S("p2.h", "normalizer", "symbolic", [("c", FR()), ("d", N(2)), ("e", N(2))], ["1", "c", "d", "e"],
       ["b^3 = 1", "λd^2 = b + b^2"]),
]


def stated_sets(key: str, kind: str | None = None) -> list[SolutionSet]:
    return [s for s in STATED if s.key == key and (kind is None or s.kind == kind)]


def _stated_lam_gen(stated: SolutionSet, lam):
    """The λ generator for a symbolic check: Free, or pinned to an F_p value."""
    if lam == "symbolic":
        return ("lam", Free())
    return ("lam", Rewrite(1, str(int(lam or 0))))


def _stated_ring(stated: SolutionSet, fam: ActionFamily, base: Field, lam) -> SymRing:
    gens = [_stated_lam_gen(stated, lam)]
    gens += etale_ring_gens(ActionFamily(fam.key, "symbolic" if lam == "symbolic" else lam)) if fam.has_etale else []
    gens += list(stated.gens)
    return SymRing(base, gens)


def _family_for(stated: SolutionSet, lam):
    spec = FAMILIES[stated.key]
    if spec.lam == "none":
        return ActionFamily(stated.key)
    if spec.lam == "zero":
        return ActionFamily(stated.key, 0)
    return ActionFamily(stated.key, lam)


def verify_symbolic(stated: SolutionSet) -> dict:
    """Impose the stated system as rewrite rules and check the defining
    condition against the universal element."""
    spec = FAMILIES[stated.key]
    lam = stated.lam if spec.lam not in ("none",) else None
    fam = _family_for(stated, lam if lam is not None else None)
    base = make_field(spec.p)
    P = _stated_ring(stated, fam, base, lam)
    h = CuspAut(spec.p, tuple(P.parse(x) for x in stated.coeffs), validate=False)
    if stated.shift:
        h = compose(h, CuspAut(spec.p, tuple(P.parse(x) for x in stated.shift), validate=False), validate=False)
    try:
        h.validate()
    except ShapeViolation as exc:
        raise SymbolicFailure(f"{stated.describe()}: not a valid substitution ({exc})") from exc
    core = fam.parent() if fam.has_etale else fam
    PA = fam.param_ring(P)
    hA = base_change(h, PA)
    g = core.universal(PA)
    if stated.kind == "centralizer":
        ok = compose(g, hA, False) == compose(hA, g, False)
        et_ok = all(compose(h, et, False) == compose(et, h, False) for et in fam.etale_generators(P))
    else:
        ok = core.readoff(conjugate(hA, g)) is not None
        group = fam.etale_group(P) if fam.has_etale else []
        et_ok = all(_etale_lands(core, h, et, group) for et in fam.etale_generators(P))
    if not (ok and et_ok):
        raise SymbolicFailure(f"{stated.describe()}: condition fails after imposing the stated system")
    return {"stated": stated.describe(), "symbolic": True}


def stated_points(stated: SolutionSet, fam: ActionFamily, R: SymRing) -> set:
    """R-points of the stated set, as id tuples of (b, c, d[, e])."""
    from biq.algebra.polysys import eval_poly
    ops = ring_ops(R)
    f = R.base
    names = ["lam"] + [n for n, _ in stated.gens]
    extra = []
    if fam.has_etale:
        for n, _ in etale_ring_gens(fam):
            names.insert(1, n)
    free_gens = [("lam", Free())]
    consts = {}
    for n in names[1:]:
        if n in ("w", "z"):
            free_gens.append((n, Free()))
            consts[n] = fam.constant({"w": "omega", "z": "zeta"}[n], R).constant()
    attrs = dict(stated.gens)
    free_gens += [(n, Unit() if isinstance(a, (Unit, UnitCyclic)) else Free()) for n, a in stated.gens]
    F = SymRing(f, free_gens)
    rels = []
    for n, a in stated.gens:
        x = F.gen(n)
        if isinstance(a, UnitCyclic):
            rels.append(x ** a.n - 1)
        elif isinstance(a, Nilpotent):
            rels.append(x ** a.n)
        elif isinstance(a, Rewrite):
            rels.append(x ** a.n - F.parse(a.rule))
    order = tuple(n for n, _ in free_gens)
    system = PolySystem.from_exprs(rels, order)
    lam_val = 0 if fam.lam in (None, "symbolic") else fam.lam
    domains = {"lam": np.array([ops.const(lam_val)], dtype=np.int64)}
    for n, v in consts.items():
        domains[n] = np.array([ops.const(v)], dtype=np.int64)
    for n, a in stated.gens:
        domains[n] = ops.units if isinstance(a, (Unit, UnitCyclic)) else ops.all
    sols = system.solve(ops, domains, order=order)
    cpolys = PolySystem.from_exprs([F.parse(x) for x in stated.coeffs], order)
    # from_exprs drops zero polynomials and duplicates, so evaluate each coefficient separately
    coeff_polys = []
    for x in stated.coeffs:
        ps = PolySystem.from_exprs([F.parse(x)], order).polys
        coeff_polys.append(ps[0] if ps else {})
    _ = (cpolys, attrs, extra)
    pts = {tuple(eval_poly(ops, cp, s) if cp else 0 for cp in coeff_polys) for s in sols}
    if stated.shift:
        shift = tuple(ops.from_expr(R.parse(x)) for x in stated.shift)
        pts = {tuple(int(v) for v in compose_ids(fam.p, ops, pt, shift)) for pt in pts}
    return pts


def battery(p: int) -> list[SymRing]:
    """Default test rings: reduced fields and small Artinian rings."""
    from biq.algebra.ring import test_ring
    if p == 3:
        F3, F9 = make_field(3), make_field(3, 2)
        return [test_ring(F3), test_ring(F9), test_ring(F3, [("e", 2)]), test_ring(F3, [("e", 3)]),
                test_ring(F3, [("e", 2), ("f", 2)]), test_ring(F9, [("e", 2)])]
    F2, F4, F8, F16, F64 = (make_field(2, k) for k in (1, 2, 3, 4, 6))
    return [test_ring(F2), test_ring(F4), test_ring(F8), test_ring(F16), test_ring(F64),
            test_ring(F2, [("e", 2)]), test_ring(F2, [("e", 4)]), test_ring(F4, [("e", 2)]),
            test_ring(F2, [("e", 2), ("f", 2)]), test_ring(F8, [("e", 2)]), test_ring(F4, [("e", 4)]),
            test_ring(F4, [("e", 2), ("f", 2)]), test_ring(F8, [("e", 3)])]


def verify_conditions(stated, rings=None, lams=None, cap: int = 1 << 16) -> dict:
    """Two-sided check of a stated system (one SolutionSet or a union of
    pieces): symbolic per piece, then point sets over a battery of rings.
    Rings whose solution sets exceed ``cap`` points are skipped and listed."""
    pieces = [stated] if isinstance(stated, SolutionSet) else list(stated)
    head = pieces[0]
    report = {"stated": [pc.describe() for pc in pieces]}
    spec = FAMILIES[head.key]
    if lams is None:
        lams = [1] if head.lam == "symbolic" else [head.lam]
    runs = []
    for lam in lams:
        fam = _family_for(head, lam)
        for R in rings or battery(spec.p):
            try:
                solver = centralizer_enum if head.kind == "centralizer" else normalizer_enum
                got = solver(fam, R, with_table=False, cap=cap)
                want = set().union(*(stated_points(pc, fam, R) for pc in pieces))
            except BiqError as exc:
                runs.append({"ring": repr(R), "lam": lam, "skipped": str(exc)})
                continue
            have = set(got.ids)
            if have != want:
                ops = ring_ops(R)
                diff = sorted(have ^ want)[0]
                side = "solver only" if diff in have else "stated only"
                raise EnumMismatch(
                    f"{head.describe()} over {R!r}: {len(have)} solver points vs {len(want)} stated",
                    {"element": repr(_ids_to_aut(spec.p, ops, R, diff)), "side": side},
                )
            runs.append({"ring": repr(R), "lam": lam, "points": len(have)})
    report["runs"] = runs
    # point sets first, so a dropped equation surfaces as a witness
    report["symbolic"] = all(verify_symbolic(pc)["symbolic"] for pc in pieces)
    report["rings_checked"] = sum(1 for r in runs if "points" in r)
    return report


def stated_groups():
    """STATED grouped into unions by (key, kind, λ)."""
    groups: dict = {}
    for s in STATED:
        groups.setdefault((s.key, s.kind, s.lam), []).append(s)
    return groups


# ---------------------------------------------------------------------------
# λ reduction and induced actions

def reduce_lambda(fam: ActionFamily):
    """Conjugator t -> √λ t carrying the λ-family of α2 onto the λ = 1 family.

    Returns (conjugator, λ=1 family, image of the parameter).  For symbolic
    λ the check runs over F_2[s^±1] with λ = s^2.
    """
    if fam.key not in ("p2.f",):
        raise BiqError("λ reduction applies to the α2 family")
    if fam.lam in (0, None):
        raise LambdaForbidden("λ = 0 is not reducible to λ = 1")
    if fam.symbolic_lambda:
        base = make_field(2)
        R = SymRing(base, [("s", Unit()), ("lam", Rewrite(1, "s^2"))])
        root = R.gen("s")
    else:
        lam = fam.lam
        base = _field_containing(lam)
        R = SymRing(base, [])
        root = R.const(base.sqrt(lam))
    RA = fam.param_ring(R)
    h = CuspAut.make(2, RA, b=root if not R.ngens else root.substitute({}, RA, check=False), validate=False)
    g = fam.universal(RA)
    target = ActionFamily("p2.f", 1)
    phi = target.readoff(conjugate(h, g))
    if phi is None:
        raise SymbolicFailure("conjugation by t -> √λ t does not land in the λ = 1 family")
    return h, target, phi


def _field_containing(value: int) -> Field:
    for k in range(1, 21):
        if 2 ** k > value:
            return make_field(2, k)
    raise BiqError(f"no field holds {value}")


class ParamEndo:
    """The action a -> φ(a) of a normalizing element on the group's parameter,
    plus the permutation it induces on étale elements (k-points)."""

    def __init__(self, fam: ActionFamily, image: SymExpr, etale: dict | None = None):
        self.fam = fam
        self.image = image
        self.etale = etale or {}

    @property
    def ring(self):
        return self.image.ring

    def apply(self, x: SymExpr) -> SymExpr:
        return self.image.substitute({"a": x}, x.ring, check=False)

    def then(self, other: "ParamEndo") -> "ParamEndo":
        """x -> other(self(x))."""
        et = {k: other.etale.get(v, v) for k, v in self.etale.items()}
        return ParamEndo(self.fam, other.apply(self.image), et)

    def key(self):
        return (tuple(sorted(self.image.terms.items())), tuple(sorted(self.etale.items())))

    def __eq__(self, other):
        return isinstance(other, ParamEndo) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return self.image == self.ring.gen("a") and all(k == v for k, v in self.etale.items())

    def __repr__(self):
        et = f", étale {self.etale}" if self.etale else ""
        return f"a -> {self.image}{et}"

    def check_homomorphism(self) -> bool:
        """φ respects relations and the group law of the parameter algebra."""
        fam = self.fam.parent() if self.fam.has_etale else self.fam
        attr = fam.spec.param_attr
        R = self.ring
        base_gens = [(n, a) for n, a in zip(R.names, R.attrs) if n != "a"]
        R2 = SymRing(R.base, base_gens + [("a1", attr), ("a2", attr)])
        a1, a2 = R2.gen("a1"), R2.gen("a2")
        img = lambda x: self.image.substitute({"a": x}, R2, check=False)
        law = {"mul": a1 * a2, "add": a1 + a2, "m2": a1 + a2 + fam.lam_value(R2) * a1 * a1 * a2 * a2}[fam.spec.law]
        phi1, phi2 = img(a1), img(a2)
        rel_ok = (phi1 ** attr.n == 1) if isinstance(attr, UnitCyclic) else not phi1 ** attr.n
        return rel_ok and compose(fam.element(phi1), fam.element(phi2)) == fam.element(img(law))


def induced_ad(fam: ActionFamily, h: CuspAut) -> ParamEndo:
    """a -> readoff(conjugate(h, g_univ)), with étale images read at k-points."""
    core = fam.parent() if fam.has_etale else fam
    R = h.ring
    RA = fam.param_ring(R)
    hA = base_change(h, RA)
    phi = core.readoff(conjugate(hA, core.universal(RA)))
    if phi is None:
        raise NotInNormalizer(f"{h} does not normalize {fam.key}")
    etale = {}
    if fam.has_etale:
        group = fam.etale_group(R)
        for i, e in enumerate(group):
            hit = core.readoff_product(conjugate(h, e), group)
            if hit is None:
                raise NotInNormalizer(f"{h} moves an étale element of {fam.key} outside the group")
            etale[i] = group.index(hit[1])
    return ParamEndo(fam, phi, etale)


# ---------------------------------------------------------------------------
# k-points, ad preimages and the structure of C/α(G)

def kpoint_ring(f: Field) -> SymRing:
    return SymRing(f, [])


def centralizer_kpoints(fam: ActionFamily, f: Field) -> list[CuspAut]:
    return centralizer_enum(fam, kpoint_ring(f), with_table=False).elements


def ad_preimage(fam: ActionFamily, f: Field, image: SymExpr, etale_perm: dict | None = None,
                limit: int | None = None) -> list[CuspAut]:
    """k-points h with induced_ad(fam, h) equal to the given action.

    ``image`` is φ(a) in F[a] / (relations of a); ``etale_perm`` maps indices
    of fam.etale_group to indices.
    """
    p = fam.p
    S = generic_ring(p, f)
    SA = fam.param_ring(S)
    core = fam.parent() if fam.has_etale else fam
    h = generic_element(SA, p)
    g = core.universal(SA)
    phi = image.substitute({}, SA, check=False) if image.ring != SA else image
    target = core.element(phi)
    exprs = [x - y for x, y in zip(compose(g, h, False).coeffs, compose(h, target, False).coeffs)]
    names = COEFF_NAMES[p]
    system = PolySystem.from_exprs(exprs, names, group_by=("a",))
    if fam.has_etale:
        group = fam.etale_group(S)
        hS = generic_element(S, p)
        extra = []
        for i, j in (etale_perm or {i: i for i in range(len(group))}).items():
            extra += [x - y for x, y in zip(compose(group[i], hS, False).coeffs, compose(hS, group[j], False).coeffs)]
        system = PolySystem(names, system.polys + PolySystem.from_exprs(extra, names).polys)
    R = kpoint_ring(f)
    ops = ring_ops(R)
    order = SEARCH_ORDER[p]
    sols = system.solve(ops, ambient_domains(p, ops), order=order, limit=limit)
    perm = [order.index(n) for n in names]
    return [_ids_to_aut(p, ops, R, tuple(s[i] for i in perm)) for s in sols]


# connected factors of C/α(G), read off the verified centralizer systems:
# the nilpotent directions of C beyond those of α(G)
CONNECTED_QUOTIENT = {
    ("p3.a", None): ((), None), ("p3.b", None): ((), None), ("p3.c", None): ((), None),
    ("p3.d", None): (("α3",), "semidirect"), ("p3.e", None): ((), None),
    ("p2.a", "nonzero"): ((), None), ("p2.a", 0): ((), None), ("p2.b", 0): ((), None),
    ("p2.c", "nonzero"): ((), None), ("p2.c", 0): ((), None), ("p2.d", None): ((), None), ("p2.e", None): ((), None),
    ("p2.f", 1): (("α2", "α2"), "semidirect"), ("p2.f", 0): (("α4 ⋊ α4",), "semidirect"),
    ("p2.g", 0): ((), None), ("p2.h", "nonzero"): (("α2",), "direct"),
}


def lam_case(fam: ActionFamily):
    mode = fam.spec.lam
    if mode == "none":
        return None
    if mode == "zero":
        return 0
    if fam.lam == 0:
        return 0
    if mode == "binary":
        return 1
    return "nonzero"


def stated_centralizer(fam: ActionFamily) -> SolutionSet | None:
    case = lam_case(fam)
    for s in STATED:
        if s.key != fam.key or s.kind != "centralizer":
            continue
        if s.lam == case or (s.lam == "symbolic" and case == "nonzero") or (s.lam is None and case is None):
            return s
    return None


def stated_length(s: SolutionSet) -> int:
    """Length of the stated parameter ring (product of the attribute orders)."""
    n = 1
    for _, a in s.gens:
        if isinstance(a, (Unit, Free)):
            raise TooLarge("stated set is not finite")
        n *= a.n
    return n


def etale_quotient(fam: ActionFamily, f: Field):
    """C(k)/α(G)(k) as a MultTable, with C(k) and α(G)(k) = étale group."""
    from biq.grouprec import quotient_table
    C = centralizer_kpoints(fam, f)
    R = kpoint_ring(f)
    sub = fam.etale_group(R) if fam.has_etale else [CuspAut.identity(fam.p, R)]
    key = lambda h: h.key()
    op = lambda x, y: compose(x, y, validate=False)
    return quotient_table(C, op, key, sub), C, sub


def centralizer_structure(fam: ActionFamily, f: Field):
    """The structure of C_{Aut_C}(α(G)) / α(G).

    Connected factors come from CONNECTED_QUOTIENT; the étale part is
    recognized from k-points; the total length is cross-checked against
    the stated centralizer system when one exists.
    """
    from biq.grouprec import CONNECTED_LENGTH, assign_structure
    conn, kind = CONNECTED_QUOTIENT[(fam.key, lam_case(fam))]
    table, C, sub = etale_quotient(fam, f)
    counts = []
    stated = stated_centralizer(fam)
    if stated is not None:
        g_conn = CONNECTED_LENGTH[fam.spec.connected]
        total = stated_length(stated)
        # length(C) = |C(k)| * length(C°); length(C°) = length(G°) * length(quotient°)
        observed = total // (len(C) * g_conn) if total % (len(C) * g_conn) == 0 else -1
        expected = 1
        for c in conn:
            expected *= CONNECTED_LENGTH[c]
        counts.append((expected, observed))
    commutes = kind == "direct"
    return assign_structure(conn, table, commutes, counts, kind=kind if conn and table.n > 1 else None)


def centralizer_scheme(fam: ActionFamily, R: SymRing):
    """R-points of C_{Aut_C}(α(G)) with the structure of the whole centralizer.

    Connected part: G° followed by the connected factors of the quotient.
    The étale part is C(k); the product is semidirect when some k-point
    fails to commute with some R-point.
    """
    from biq.grouprec import SchemeStructure, recognize_elements
    res = centralizer_enum(fam, R, with_table=False)
    conn, _ = CONNECTED_QUOTIENT[(fam.key, lam_case(fam))]
    kpts = [base_change(h, R) for h in centralizer_kpoints(fam, R.base)]
    etale = recognize_elements(kpts, lambda x, y: compose(x, y, validate=False), lambda h: h.key())
    sols = res.elements
    commutes = all(compose(g, h, validate=False).key() == compose(h, g, validate=False).key()
                   for g in kpts for h in sols)
    kind = "direct" if commutes or etale == "1" else "semidirect"
    return res, SchemeStructure((fam.spec.connected,) + tuple(conn), etale, kind)


# ---------------------------------------------------------------------------
# closed-form conjugation formulas, checked by normal-form equality

def _generic_with(p, attr, lam=False, extra=()):
    R = generic_ring(p, lam_symbolic=lam, extra=extra).extend([("a", attr)])
    return R, generic_element(R, p), {n: R.gen(n) for n in R.names}


def _conj_mu3():
    R, h, v = _generic_with(3, UnitCyclic(3))
    a, b, c, d = (v[n] for n in "abcd")
    want = (a, (1 - a) * b ** -1 * (c ** 3 - c), (1 - a) * (b ** 2 - b ** -1 * d))
    return conjugate(h, family("p3.a").universal(R)), CuspAut(3, want, False)


def _conj_alpha3():
    R, h, v = _generic_with(3, Nilpotent(3))
    a, b, c = v["a"], v["b"], v["c"]
    return conjugate(h, family("p3.d").universal(R)), CuspAut(3, (R.one, a * b ** -1 * c ** 3, a * b ** 2), False)


def _conj_neg():
    R, h, v = _generic_with(3, Nilpotent(3))
    b, c, d = v["b"], v["c"], v["d"]
    want = (-R.one, b ** -1 * c - b ** -4 * c ** 3 * d, R.zero)
    return conjugate(h, CuspAut.make(3, R, b=-1)), CuspAut(3, want, False)


def _conj_mu2():
    R, h, v = _generic_with(2, UnitCyclic(2), lam=True)
    a, b, c, d, e, l = (v[n] for n in ("a", "b", "c", "d", "e", "lam"))
    want = (a, (a + 1) * b ** -1 * (c + l * c ** 2 + c ** 4), (a + 1) * (b ** -1 * d + l * b),
            (a + 1) * (b ** -1 * e + l * b ** -1 * d ** 2 + b ** 3))
    return conjugate(h, family("p2.a", "symbolic").universal(R)), CuspAut(2, want, False)


def _conj_mu4():
    R, h, v = _generic_with(2, UnitCyclic(4))
    a, b, c, d, e = (v[n] for n in "abcde")
    want = (a, (a + 1) * b ** -1 * (c + a * c ** 2 + (a + 1) * (b ** -2 * c ** 2 * d + b ** -2 * c ** 4 * d + c ** 4)),
            (a + a * a) * (b ** -1 * d + b),
            (a + 1) * (b ** -1 * e + a * b ** -1 * d ** 2 + (a + 1) * (b ** -3 * d ** 3 + b * d + b ** 3)))
    return conjugate(h, family("p2.d").universal(R)), CuspAut(2, want, False)


def _conj_alpha2():
    R, h, v = _generic_with(2, Nilpotent(2), lam=True)
    a, b, c, d, l = (v[n] for n in ("a", "b", "c", "d", "lam"))
    want = (R.one, a * b ** -1 * (l * c ** 2 + c ** 4), l * a * b, a * (l * b ** -1 * d ** 2 + b ** 3))
    return conjugate(h, family("p2.f", "symbolic").universal(R)), CuspAut(2, want, False)


def _conj_omega():
    R, h, v = _generic_with(2, Nilpotent(2), extra=[("w", Rewrite(2, "w + 1"))])
    b, c, d, e, w = (v[n] for n in ("b", "c", "d", "e", "w"))
    want = (w, w ** 2 * b ** -1 * (c + b ** -4 * c ** 4 * e + w ** 2 * b ** -2 * c ** 2 * d + b ** -6 * c ** 4 * d ** 3),
            b ** -1 * d, b ** -3 * d ** 3)
    return conjugate(h, CuspAut.make(2, R, b=w)), CuspAut(2, want, False)


def _conj_m2():
    R, h, v = _generic_with(2, Nilpotent(4), lam=True)
    a, b, c, d, l = (v[n] for n in ("a", "b", "c", "d", "lam"))
    want = (R.one, a * b ** -1 * (1 + a * (l * c ** 2 + c ** 4 + b ** -2 * d)), l * a * a * b,
            a * a * (l * b ** -1 * d ** 2 + b ** 3))
    return conjugate(h, family("p2.h", "symbolic").universal(R)), CuspAut(2, want, False)


CONJUGATION_FORMULAS = {
    "mu3": _conj_mu3, "alpha3": _conj_alpha3, "neg": _conj_neg,
    "mu2": _conj_mu2, "mu4": _conj_mu4, "alpha2": _conj_alpha2, "omega": _conj_omega, "M2": _conj_m2,
}

# which closed forms each family's conjugation rests on
CASE_FORMULAS = {
    "p3.a": ("mu3",), "p3.b": ("mu3", "neg"), "p3.c": ("mu3",), "p3.d": ("alpha3",), "p3.e": ("alpha3", "neg"),
    "p2.a": ("mu2",), "p2.b": ("mu2", "omega"), "p2.c": ("mu2",), "p2.d": ("mu4",), "p2.e": ("mu4",),
    "p2.f": ("alpha2",), "p2.g": ("alpha2", "omega"), "p2.h": ("M2",),
}


def check_inverse(p: int) -> bool:
    """Generic inverse equals the closed form, and both composites are the identity."""
    h = generic_element(generic_ring(p), p)
    inv = invert(h)
    return inv == inverse_closed_form(h) and compose(h, inv).is_identity() and compose(inv, h).is_identity()


def check_formula(name: str) -> bool:
    got, want = CONJUGATION_FORMULAS[name]()
    return got == want
