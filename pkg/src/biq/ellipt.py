"""Elliptic curves over finite fields.

Points, torsion, automorphisms fixing the origin, fixed loci with their
infinitesimal part at O, formal expansions at O and the formal group law.
The local parameter at O is z = x/y, with w = 1/y.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from biq.algebra.field import (
    Field, distinct_roots, embed, make_field, poly_mul, poly_scale, poly_sub, poly_trim,
)
from biq.algebra.ring import Nilpotent, SymExpr, SymRing
from biq.algebra.series import BiSeries, Series
from biq.errors import BiqError, BoundExceeded, CountMismatch, CurveMismatch, NotInvertible

MAX_EXTENSION = 12
TORSION_BOUND = 12


# ---------------------------------------------------------------------------
# curves

@dataclass(frozen=True)
class WCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a finite field."""

    f: Field
    a: tuple  # (a1, a2, a3, a4, a6) as field elements

    def __post_init__(self):
        if len(self.a) != 5:
            raise BiqError("a Weierstrass curve needs five coefficients")
        if self.disc == 0:
            raise BiqError(f"{self} is singular")

    @classmethod
    def from_ints(cls, f: Field, coeffs) -> "WCurve":
        return cls(f, tuple(f.from_int(c) if isinstance(c, int) and c < 0 else c for c in coeffs))

    @classmethod
    def from_literal(cls, lit: dict) -> "WCurve":
        f = make_field(lit["p"], lit.get("k", 1))
        return cls(f, tuple(f.from_int(c) for c in lit["a"]))

    def literal(self) -> dict:
        return {"p": self.f.p, "k": self.f.k, "a": list(self.a)}

    def __str__(self):
        names = ("a1", "a2", "a3", "a4", "a6")
        parts = ", ".join(f"{n}={self.f.element_str(v)}" for n, v in zip(names, self.a) if v)
        return f"E[{parts or 'all zero'}] over {self.f!r}"

    # invariants
    def _c(self, n):
        return self.f.from_int(n)

    @property
    def a1(self):
        return self.a[0]

    @property
    def a2(self):
        return self.a[1]

    @property
    def a3(self):
        return self.a[2]

    @property
    def a4(self):
        return self.a[3]

    @property
    def a6(self):
        return self.a[4]

    @functools.cached_property
    def b(self):
        f, (a1, a2, a3, a4, a6) = self.f, self.a
        m, ad, c = f.mul, f.add, self._c
        b2 = ad(m(a1, a1), m(c(4), a2))
        b4 = ad(m(c(2), a4), m(a1, a3))
        b6 = ad(m(a3, a3), m(c(4), a6))
        b8 = f.sub(ad(ad(m(m(a1, a1), a6), m(m(c(4), a2), a6)), f.sub(m(a2, m(a3, a3)), m(m(a1, a3), a4))),
                   m(a4, a4))
        return b2, b4, b6, b8

    @functools.cached_property
    def c4(self):
        f = self.f
        b2, b4, _, _ = self.b
        return f.sub(f.mul(b2, b2), f.mul(self._c(24), b4))

    @functools.cached_property
    def disc(self):
        f, m, c = self.f, self.f.mul, self._c
        b2, b4, b6, b8 = self.b
        t1 = m(m(m(b2, b2), b8), c(-1))
        t2 = m(c(-8), m(b4, m(b4, b4)))
        t3 = m(c(-27), m(b6, b6))
        t4 = m(c(9), m(b2, m(b4, b6)))
        return f.add(f.add(t1, t2), f.add(t3, t4))

    @functools.cached_property
    def j(self):
        f = self.f
        return f.div(f.mul(self.c4, f.mul(self.c4, self.c4)), self.disc)

    @functools.cached_property
    def supersingular(self) -> bool:
        p = self.f.p
        if p in (2, 3):
            return self.j == 0
        # Hasse invariant: coefficient of x^(p-1) in g(x)^((p-1)/2), with
        # y^2 = g(x) after completing the square
        f = self.f
        b2, b4, b6, _ = self.b
        g = [b6, f.mul(self._c(2), b4), b2, self._c(4)]
        acc = [1]
        for _ in range((p - 1) // 2):
            acc = poly_mul(f, acc, g)
        return (acc[p - 1] if len(acc) > p - 1 else 0) == 0

    @property
    def ordinary(self) -> bool:
        return not self.supersingular

    def base_change(self, dst: Field) -> "WCurve":
        if dst == self.f:
            return self
        return WCurve(dst, tuple(embed(x, self.f, dst) for x in self.a))

    # points
    def rhs(self, x):
        f = self.f
        return f.add(f.mul(f.add(f.mul(f.add(x, self.a2), x), self.a4), x), self.a6)

    def contains(self, P) -> bool:
        if P is None:
            return True
        f = self.f
        x, y = P
        lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(self.a1, x), self.a3)))
        return lhs == self.rhs(x)

    def points_at(self, x) -> list:
        """All affine points with the given x-coordinate."""
        f = self.f
        A = f.add(f.mul(self.a1, x), self.a3)
        ys = distinct_roots([f.neg(self.rhs(x)), A, 1], f)
        return [(x, y) for y in ys]

    # group law
    def neg(self, P):
        if P is None:
            return None
        f = self.f
        x, y = P
        return (x, f.neg(f.add(y, f.add(f.mul(self.a1, x), self.a3))))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        f = self.f
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2 and f.add(f.add(y1, y2), f.add(f.mul(self.a1, x2), self.a3)) == 0:
            return None
        if x1 != x2:
            dx = f.sub(x2, x1)
            lam = f.div(f.sub(y2, y1), dx)
            nu = f.div(f.sub(f.mul(y1, x2), f.mul(y2, x1)), dx)
        else:
            c = self._c
            den = f.add(f.add(f.mul(c(2), y1), f.mul(self.a1, x1)), self.a3)
            num = f.sub(f.add(f.add(f.mul(c(3), f.mul(x1, x1)), f.mul(f.mul(c(2), self.a2), x1)), self.a4),
                        f.mul(self.a1, y1))
            lam = f.div(num, den)
            num2 = f.sub(f.add(f.add(f.neg(f.mul(x1, f.mul(x1, x1))), f.mul(self.a4, x1)), f.mul(c(2), self.a6)),
                         f.mul(self.a3, y1))
            nu = f.div(num2, den)
        x3 = f.sub(f.sub(f.sub(f.add(f.mul(lam, lam), f.mul(self.a1, lam)), self.a2), x1), x2)
        y3 = f.sub(f.neg(f.mul(f.add(lam, self.a1), x3)), f.add(nu, self.a3))
        return (x3, y3)

    def mul(self, n: int, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        out, base = None, P
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    def order(self, P, bound: int = 10 ** 6) -> int:
        Q, n = P, 1
        while Q is not None:
            Q = self.add(Q, P)
            n += 1
            if n > bound:
                raise BoundExceeded(f"order of {P} exceeds {bound}")
        return n

    # division polynomials in x (the f_n with psi_n = f_n or psi_2 f_n)
    def division_poly(self, n: int):
        return _division_polys(self, n)[n]

    def psi2_squared(self):
        f, c = self.f, self._c
        b2, b4, b6, _ = self.b
        return poly_trim([b6, f.mul(c(2), b4), b2, c(4)])


def point_arith(c: WCurve, P, Q=None, op: str = "add", n: int = 0):
    """add | neg | mul on points of c; O is None."""
    for R in (P, Q):
        if R is not None and not c.contains(R):
            raise CurveMismatch(f"{R} is not on {c}")
    if op == "add":
        return c.add(P, Q)
    if op == "neg":
        return c.neg(P)
    if op == "mul":
        return c.mul(n, P)
    raise BiqError(f"unknown point operation {op!r}")


def _division_polys(c: WCurve, n: int) -> dict:
    f = c.f
    k = c._c
    b2, b4, b6, b8 = c.b
    F = c.psi2_squared()
    polys = {0: [], 1: [1], 2: [1]}
    polys[3] = poly_trim([b8, f.mul(k(3), b6), f.mul(k(3), b4), b2, k(3)])
    polys[4] = poly_trim([
        f.sub(f.mul(b4, b8), f.mul(b6, b6)), f.sub(f.mul(b2, b8), f.mul(b4, b6)), f.mul(k(10), b8),
        f.mul(k(10), b6), f.mul(k(5), b4), b2, k(2)])
    F2 = poly_mul(f, F, F)

    def get(m):
        if m in polys:
            return polys[m]
        h = m // 2
        if m % 2:
            a = poly_mul(f, get(h + 2), poly_mul(f, get(h), poly_mul(f, get(h), get(h))))
            b = poly_mul(f, get(h - 1), poly_mul(f, get(h + 1), poly_mul(f, get(h + 1), get(h + 1))))
            if h % 2 == 0:
                a = poly_mul(f, F2, a)
            else:
                b = poly_mul(f, F2, b)
            out = poly_sub(f, a, b)
        else:
            a = poly_mul(f, get(h + 2), poly_mul(f, get(h - 1), get(h - 1)))
            b = poly_mul(f, get(h - 2), poly_mul(f, get(h + 1), get(h + 1)))
            out = poly_mul(f, get(h), poly_sub(f, a, b))
        polys[m] = out
        return out

    get(n)
    return polys


# ---------------------------------------------------------------------------
# torsion

def _rational_torsion(c: WCurve, n: int) -> list:
    """n-torsion points of c over its own field, O first, then sorted."""
    if n == 1:
        return [None]
    f = c.f
    xpoly = c.division_poly(n)
    if n % 2 == 0:
        xpoly = poly_mul(f, xpoly, c.psi2_squared())
    if not poly_trim(xpoly):
        raise BiqError(f"division polynomial of {n} vanishes")
    pts = []
    for x in distinct_roots(xpoly, f):
        for P in c.points_at(x):
            if c.mul(n, P) is None:
                pts.append(P)
    return [None] + sorted(pts)


def torsion_count(c: WCurve, n: int) -> int:
    """|E[n](k̄)|."""
    p = c.f.p
    v, m = 0, n
    while m % p == 0:
        v += 1
        m //= p
    return m * m * (1 if c.supersingular else p ** v)


def torsion(c: WCurve, n: int, max_degree: int = MAX_EXTENSION):
    """All n-torsion points over the least extension holding E[n](k̄).

    Returns (points, curve over that field, extension degree).
    """
    if n > TORSION_BOUND:
        raise BoundExceeded(f"torsion bound is {TORSION_BOUND}")
    want = torsion_count(c, n)
    p, k = c.f.p, c.f.k
    for m in range(1, max_degree + 1):
        try:
            dst = make_field(p, k * m)
        except BiqError:
            break
        cm = c.base_change(dst)
        pts = _rational_torsion(cm, n)
        if len(pts) == want:
            return pts, cm, m
    raise BoundExceeded(f"E[{n}] of {c} is not rational within the field-size bound")


# ---------------------------------------------------------------------------
# automorphisms fixing O

@dataclass(frozen=True)
class AutEO:
    """(x, y) -> (u^2 x + r, u^3 y + u^2 s x + t) on a fixed curve."""

    curve: WCurve
    u: int
    r: int
    s: int
    t: int

    def key(self):
        return (self.u, self.r, self.s, self.t)

    def __call__(self, P):
        if P is None:
            return None
        f = self.curve.f
        x, y = P
        u2 = f.mul(self.u, self.u)
        X = f.add(f.mul(u2, x), self.r)
        Y = f.add(f.add(f.mul(f.mul(u2, self.u), y), f.mul(f.mul(u2, self.s), x)), self.t)
        return (X, Y)

    def then_apply(self, other: "AutEO") -> "AutEO":
        return compose_aut(other, self)

    def is_identity(self) -> bool:
        return self.key() == (1, 0, 0, 0)

    def __repr__(self):
        f = self.curve.f
        return "Aut(u={}, r={}, s={}, t={})".format(*(f.element_str(v) for v in self.key()))


def compose_aut(h1: AutEO, h2: AutEO) -> AutEO:
    """P -> h1(h2(P))."""
    if h1.curve != h2.curve:
        raise CurveMismatch("automorphisms of different curves")
    f = h1.curve.f
    u1sq = f.mul(h1.u, h1.u)
    u = f.mul(h1.u, h2.u)
    r = f.add(h1.r, f.mul(u1sq, h2.r))
    s = f.add(h1.s, f.mul(h1.u, h2.s))
    t = f.add(f.add(h1.t, f.mul(f.mul(u1sq, h1.u), h2.t)), f.mul(f.mul(u1sq, h1.s), h2.r))
    return AutEO(h1.curve, u, r, s, t)


def invert_aut(h: AutEO) -> AutEO:
    f = h.curve.f
    ui = f.inv(h.u)
    ui2 = f.mul(ui, ui)
    r = f.neg(f.mul(ui2, h.r))
    s = f.neg(f.mul(ui, h.s))
    t = f.mul(f.mul(ui2, ui), f.sub(f.mul(h.r, h.s), h.t))
    return AutEO(h.curve, ui, r, s, t)


def _aut_equations(c: WCurve, u: int, R: SymRing):
    """The five coefficient identities for (u, r, s, t) to preserve c."""
    f = c.f
    K = lambda v: R.const(v)
    n = lambda v: R.const(f.from_int(v))
    a1, a2, a3, a4, a6 = (K(v) for v in c.a)
    s, r, t = R.gen("s"), R.gen("r"), R.gen("t")
    U = K(u)
    return [
        U * a1 - (a1 + n(2) * s),
        U ** 2 * a2 - (a2 - s * a1 + n(3) * r - s * s),
        U ** 3 * a3 - (a3 + r * a1 + n(2) * t),
        U ** 4 * a4 - (a4 - s * a3 + n(2) * r * a2 - (t + r * s) * a1 + n(3) * r * r - n(2) * s * t),
        U ** 6 * a6 - (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1),
    ]


def _univariate(e: SymExpr, name: str):
    i = e.ring.index[name]
    out = [0] * (max(m[i] for m in e.terms) + 1)
    for m, c in e.terms.items():
        out[m[i]] = c
    return out


def _solve_triangular(eqs, unknowns, R: SymRing, assigned: dict, out: list):
    f = R.base
    eqs = [e.substitute({k: R.const(v) for k, v in assigned.items()}, R, check=False) if assigned else e
           for e in eqs]
    eqs = [e for e in eqs if e]
    if any(e.is_constant() for e in eqs):
        return
    todo = [u for u in unknowns if u not in assigned]
    if not todo:
        out.append(dict(assigned))
        return
    for e in sorted(eqs, key=lambda e: len(e.variables())):
        vs = e.variables()
        if len(vs) == 1:
            (v,) = vs
            for root in distinct_roots(_univariate(e, v), f):
                _solve_triangular(eqs, unknowns, R, {**assigned, v: root}, out)
            return
    # eliminate a variable that occurs linearly with a constant coefficient
    for e in eqs:
        for v in sorted(e.variables()):
            i = R.index[v]
            if max(m[i] for m in e.terms) != 1:
                continue
            coeff = {m: c for m, c in e.terms.items() if m[i] == 1}
            if len(coeff) != 1 or any(x for j, x in enumerate(next(iter(coeff))) if j != i):
                continue
            cinv = f.inv(next(iter(coeff.values())))
            rest = R.elem({m: c for m, c in e.terms.items() if m[i] == 0})
            expr = rest * R.const(f.neg(cinv))
            sub_eqs = [x.substitute({v: expr}, R, check=False) for x in eqs if x is not e]
            inner = []
            _solve_triangular(sub_eqs, [u for u in todo if u != v], R, assigned, inner)
            for sol in inner:
                val = expr.substitute({k: R.const(w) for k, w in sol.items()}, R, check=False)
                if val.is_constant():
                    out.append({**sol, v: val.constant()})
                else:  # v's expression kept a variable that no equation constrains
                    for w in range(f.q):
                        _solve_triangular(eqs, unknowns, R, {**sol, **{x: w for x in val.variables()}}, out)
            return
    # nothing determines the next unknown: scan it
    v = todo[0]
    if f.q > 4096:
        raise BoundExceeded(f"cannot scan {v} over {f!r}")
    for w in range(f.q):
        _solve_triangular(eqs, unknowns, R, {**assigned, v: w}, out)


@functools.lru_cache(maxsize=None)
def autO_enum(c: WCurve) -> tuple:
    """All automorphisms of (c, O) over c's field, identity first."""
    f = c.f
    R = SymRing(f, [("s", _free()), ("r", _free()), ("t", _free())])
    us = distinct_roots([f.neg(1)] + [0] * 23 + [1], f)
    found = set()
    for u in us:
        sols = []
        _solve_triangular(_aut_equations(c, u, R), ("s", "r", "t"), R, {}, sols)
        for s in sols:
            found.add((u, s["r"], s["s"], s["t"]))
    auts = [AutEO(c, *k) for k in sorted(found)]
    for h in auts:
        if not all(c.contains(h(P)) for P in _sample_points(c)):
            raise CurveMismatch(f"{h} does not preserve {c}")
    return tuple(auts)


def _free():
    from biq.algebra.ring import Free
    return Free()


def _sample_points(c: WCurve, n: int = 6) -> list:
    pts = []
    for x in range(c.f.q):
        pts += c.points_at(x)
        if len(pts) >= n:
            break
    return pts


EXPECTED_AUT_ORDER = {"generic": 2, 1728: 4, 0: 6}


def expected_aut_order(c: WCurve) -> int:
    p = c.f.p
    if c.j == 0 and p == 2:
        return 24
    if c.j == 0 and p == 3:
        return 12
    if c.j == 0:
        return 6
    if c.j == c.f.from_int(1728) and p > 3:
        return 4
    return 2


def aut_group(c: WCurve, check: bool = True):
    """Aut(c, O) with its multiplication table; CountMismatch if the field is too small."""
    from biq.grouprec import mult_table
    auts = list(autO_enum(c))
    if check and len(auts) != expected_aut_order(c):
        raise CountMismatch(f"{len(auts)} automorphisms over {c.f!r}; expected {expected_aut_order(c)}")
    return auts, mult_table(auts, compose_aut, key=lambda h: h.key())


def aut_field_degree(c: WCurve, max_degree: int = 6) -> int:
    """Least extension degree over which all automorphisms of (c, O) are rational."""
    want = expected_aut_order(c)
    for m in range(1, max_degree + 1):
        if len(autO_enum(c.base_change(make_field(c.f.p, c.f.k * m)))) == want:
            return m
    raise BoundExceeded(f"automorphisms of {c} not rational within degree {max_degree}")


# ---------------------------------------------------------------------------
# formal expansions at O

def _ring_of(c: WCurve, ring: SymRing | None) -> SymRing:
    return ring if ring is not None else SymRing(c.f, [])


def w_series(a, ring: SymRing, N: int) -> Series:
    """w(z) mod z^N for a = (a1, a2, a3, a4, a6) in ring."""
    a1, a2, a3, a4, a6 = (ring(x) for x in a)
    z = Series.variable(ring, N)
    w = Series(ring, [], N)
    for _ in range(N):
        w2 = w * w
        w = z ** 3 + z * z * w * a2 + z * w2 * a4 + w2 * w * a6 - z * w * a1 - w2 * a3
    return w


def expand_substitution(a, h, ring: SymRing, N: int) -> Series:
    """z∘h mod z^N for h = (u, r, s, t) acting by (u^2 x + r, u^3 y + u^2 s x + t)."""
    u, r, s, t = (ring(x) for x in h)
    z = Series.variable(ring, N)
    w = w_series(a, ring, N)
    num = z * (u * u) + w * r
    den = Series(ring, [u ** 3], N) + z * (u * u * s) + w * t
    return num * den.inverse()


def formal_expand(h: AutEO, N: int = 4, ring: SymRing | None = None) -> Series:
    if N > 8:
        raise BoundExceeded("expansions are supported to z^8")
    R = _ring_of(h.curve, ring)
    return expand_substitution(h.curve.a, h.key(), R, N)


def formal_group_law(a, ring: SymRing, N: int = 4) -> BiSeries:
    """F(z1, z2) mod (z1^N, z2^N) for the curve with coefficients a in ring."""
    R = ring.extend([("z1", Nilpotent(N)), ("z2", Nilpotent(N))])
    a1, a2, a3, a4, a6 = (R(x) for x in a)
    z1, z2 = R.gen("z1"), R.gen("z2")
    W = w_series(a, ring, 2 * N)

    def w_of(z):
        acc = R.zero
        for n in range(2 * N):
            if W[n]:
                acc = acc + R(W[n]) * z ** n
        return acc

    w1, w2 = w_of(z1), w_of(z2)
    # slope of the chord: sum_n A_n (z2^n - z1^n)/(z2 - z1)
    lam = R.zero
    for n in range(1, 2 * N):
        if W[n]:
            lam = lam + R(W[n]) * sum((z1 ** i * z2 ** (n - 1 - i) for i in range(n)), R.zero)
    nu = w1 - lam * z1
    A = 1 + a2 * lam + a4 * lam ** 2 + a6 * lam ** 3
    B = a1 * lam + a3 * lam ** 2 - a2 * nu - 2 * a4 * lam * nu - 3 * a6 * lam ** 2 * nu
    z3 = B * A.inverse() - z1 - z2
    w3 = lam * z3 + nu
    F = -(z3 * (1 + a1 * z3 + a3 * w3).inverse())
    i1, i2 = R.index["z1"], R.index["z2"]
    coeffs = {}
    for m, cf in F.terms.items():
        rest = tuple(x for j, x in enumerate(m) if j not in (i1, i2))
        coeffs.setdefault((m[i1], m[i2]), {})[rest] = cf
    return BiSeries(ring, {k: ring.elem(v) for k, v in coeffs.items()}, N, N)


def curve_fgl(c: WCurve, N: int = 4) -> BiSeries:
    return formal_group_law(c.a, _ring_of(c, None), N)


# ---------------------------------------------------------------------------
# fixed loci

@dataclass(frozen=True)
class FixedLocus:
    points: tuple  # global fixed points (O first)
    v: int  # length of the fixed scheme at O (valuation of expand(h) - z)
    connected: str | None  # tag of the infinitesimal part: μp, αp, M2 or None
    etale: str  # recognized group of fixed points
    whole: bool = False

    @property
    def label(self) -> str:
        if self.whole:
            return "E"
        if self.connected and self.etale != "1":
            return f"{self.connected} × {self.etale}"
        return self.connected or self.etale


def connected_tag(c: WCurve, v: int) -> str | None:
    p = c.f.p
    if v <= 1:
        return None
    if v == p:
        return f"α{p}" if c.supersingular else f"μ{p}"
    if p == 2 and v == 4 and c.supersingular:
        return "M2"
    return f"len{v}"


def fixed_locus(h: AutEO, N: int = 8) -> FixedLocus:
    """Fixed points of h over its field and the order of contact at O."""
    from biq.grouprec import recognize_elements
    c = h.curve
    if h.is_identity():
        return FixedLocus((None,), N, None, "1", whole=True)
    # a fixed point P satisfies (h - 1)P = O, so it is torsion of order
    # dividing deg(h - 1) <= 4; scan E[n] for n dividing 12
    pts = {None}
    for n in (2, 3, 4):
        try:
            cand = _rational_torsion(c, n)
        except BiqError:
            continue
        pts |= {P for P in cand if h(P) == P}
    pts = sorted(pts, key=lambda P: (P is not None, P))
    etale = recognize_elements(pts, c.add)
    series = formal_expand(h, N)
    v = (series - Series.variable(series.ring, N)).valuation()
    return FixedLocus(tuple(pts), v, connected_tag(c, v), etale)


# ---------------------------------------------------------------------------
# the full automorphism group at k-points: translations and Aut(E, O)

@dataclass(frozen=True)
class AffineAut:
    """P -> g(P) + s."""

    curve: WCurve
    s: object  # a point (None for O)
    g: AutEO

    def key(self):
        return (self.s, self.g.key())

    def __call__(self, P):
        return self.curve.add(self.g(P), self.s)

    def is_translation(self) -> bool:
        return self.g.is_identity()

    def __repr__(self):
        if self.g.is_identity():
            return f"t_{self.s}"
        return f"t_{self.s}∘{self.g}" if self.s is not None else repr(self.g)


def translation(c: WCurve, s) -> AffineAut:
    return AffineAut(c, s, identity_aut(c))


def identity_aut(c: WCurve) -> AutEO:
    return AutEO(c, 1, 0, 0, 0)


def affine(h: AutEO) -> AffineAut:
    return AffineAut(h.curve, None, h)


def compose_affine(a: AffineAut, b: AffineAut) -> AffineAut:
    """P -> a(b(P))."""
    c = a.curve
    return AffineAut(c, c.add(a.s, a.g(b.s)), compose_aut(a.g, b.g))


def invert_affine(a: AffineAut) -> AffineAut:
    gi = invert_aut(a.g)
    return AffineAut(a.curve, a.curve.neg(gi(a.s)), gi)


def conjugate_affine(h: AffineAut, x: AffineAut) -> AffineAut:
    """h x h^-1."""
    return compose_affine(h, compose_affine(x, invert_affine(h)))


def aut_order(h: AutEO) -> int:
    n, x = 1, h
    while not x.is_identity():
        x = compose_aut(x, h)
        n += 1
        if n > 24:
            raise BiqError(f"{h} has order above 24")
    return n


def subgroup_points(c: WCurve, gens) -> list:
    """The subgroup of c(k) generated by the points, O first."""
    from biq.grouprec import closure
    pts = closure(list(gens), c.add, identity=None)
    return sorted(pts, key=lambda P: (P is not None, P))


def contact_order(h: AutEO, N: int = 8) -> int:
    """Valuation of expand(h) - z: the length of the fixed scheme of h at O."""
    series = formal_expand(h, N)
    return (series - Series.variable(series.ring, N)).valuation()


# ---------------------------------------------------------------------------
# subgroup schemes of E and the E side

CONNECTED_LENGTHS = {None: 1, "kerF": None, "kerF2": None, "M2": 4}


@dataclass(frozen=True)
class IsoSub:
    """A subgroup scheme of E: étale generators plus an infinitesimal factor."""

    curve: WCurve
    gens: tuple = ()
    connected: str | None = None  # None | kerF | kerF2 | M2

    def __post_init__(self):
        c = self.curve
        for P in self.gens:
            if not c.contains(P):
                raise CurveMismatch(f"{P} is not on {c}")
        if self.connected == "M2" and not (c.f.p == 2 and c.supersingular):
            raise BiqError("M2 lives on supersingular curves in characteristic 2")
        if self.connected == "kerF2" and c.supersingular:
            raise BiqError("the second Frobenius kernel is used on ordinary curves only")

    @functools.cached_property
    def points(self) -> list:
        return subgroup_points(self.curve, self.gens)

    @property
    def conn_length(self) -> int:
        p = self.curve.f.p
        return {None: 1, "kerF": p, "kerF2": p * p, "M2": 4}[self.connected]

    @property
    def conn_label(self) -> str | None:
        c = self.curve
        p = c.f.p
        if self.connected is None:
            return None
        if self.connected == "M2":
            return "M2"
        n = self.conn_length
        return f"α{n}" if c.supersingular else f"μ{n}"

    def index(self, P) -> int:
        return self.points.index(P)

    def permutation(self, h) -> tuple | None:
        """Indices of h(P) for P in points, or None if h does not preserve G(k)."""
        out = []
        for P in self.points:
            Q = h(P)
            if Q not in self.points:
                return None
            out.append(self.points.index(Q))
        return tuple(out)


def acts_trivially_on_connected(h: AutEO, sub: IsoSub) -> bool:
    n = sub.conn_length
    if n == 1:
        return True
    return contact_order(h, n + 1) >= n


def centralizer_O(sub: IsoSub) -> list:
    """Automorphisms of (E, O) that fix G pointwise, the infinitesimal part included."""
    return [h for h in autO_enum(sub.curve)
            if all(h(P) == P for P in sub.gens) and acts_trivially_on_connected(h, sub)]


def normalizer_O(sub: IsoSub) -> list:
    """Automorphisms of (E, O) mapping G(k) onto itself (infinitesimal factors are characteristic)."""
    return [h for h in autO_enum(sub.curve) if sub.permutation(h) is not None]


def e_centralizer_label(sub: IsoSub) -> str:
    from biq.grouprec import recognize_elements
    return recognize_elements(centralizer_O(sub), compose_aut, key=lambda h: h.key())


# -- parameters of infinitesimal factors -----------------------------------

def _bi_mul(f: Field, A: dict, B: dict, N: int) -> dict:
    out = {}
    for (i, j), x in A.items():
        for (k, l), y in B.items():
            if i + k < N and j + l < N:
                out[(i + k, j + l)] = f.add(out.get((i + k, j + l), 0), f.mul(x, y))
    return {k: v for k, v in out.items() if v}


def _bi_eval(f: Field, coeffs, X: dict, N: int) -> dict:
    """sum c_i X^i in F[z1, z2]/(z1^N, z2^N)."""
    out, power = {}, {(0, 0): 1}
    for c in coeffs:
        if c:
            for k, v in power.items():
                out[k] = f.add(out.get(k, 0), f.mul(c, v))
        power = _bi_mul(f, power, X, N)
    return {k: v for k, v in out.items() if v}


def _fgl_ints(c: WCurve, N: int) -> dict:
    F = curve_fgl(c, N)
    return {k: v.constant() for k, v in F.coeffs.items()}


def mu_coordinate(c: WCurve, n: int) -> list:
    """Coefficients of χ(z) = 1 + c1 z + ... with χ(F(z1, z2)) = χ(z1) χ(z2) mod degree n.

    χ identifies the length-n Frobenius kernel of an ordinary curve with μ_n;
    the search runs over coefficient vectors in increasing order, so the
    result is deterministic.
    """
    import itertools
    f = c.f
    F = _fgl_ints(c, n)
    z1, z2 = {(1, 0): 1}, {(0, 1): 1}
    for tail in itertools.product(range(f.q), repeat=n - 1):
        if not tail[0]:
            continue
        chi = [1, *tail]
        lhs = _bi_eval(f, chi, F, n)
        rhs = _bi_mul(f, _bi_eval(f, chi, z1, n), _bi_eval(f, chi, z2, n), n)
        if lhs == rhs:
            return chi
    raise BiqError(f"no μ_{n} coordinate on {c}")


def _series_ints(s: Series) -> list:
    return [s[i].constant() for i in range(s.N)]


def _uni_eval(f: Field, coeffs, X: list, N: int) -> list:
    out, power = [0] * N, [1] + [0] * (N - 1)
    for cf in coeffs:
        if cf:
            out = [f.add(o, f.mul(cf, x)) for o, x in zip(out, power)]
        power = [
            sum_f(f, (f.mul(power[i], X[k - i]) for i in range(k + 1))) for k in range(N)
        ]
    return out


def sum_f(f: Field, xs) -> int:
    acc = 0
    for x in xs:
        acc = f.add(acc, x)
    return acc


def kernel_parameter_map(h: AutEO, sub: IsoSub) -> list:
    """The action of h on the infinitesimal factor, as z -> sum φ_i z^i mod z^length."""
    n = sub.conn_length
    return _series_ints(formal_expand(h, n))


def induced_kernel_ad(h: AutEO, sub: IsoSub, fam):
    """ad of h on G, written in the parameter a of the C-side family.

    Additive and M2 factors use a = z (the comultiplication is checked to
    match the family law); multiplicative factors use the coordinate χ of
    mu_coordinate and land on a -> a^k.
    """
    from biq.cuspaut import ParamEndo, kpoint_ring
    c = sub.curve
    f = c.f
    core = fam.parent() if fam.has_etale else fam
    R = fam.param_ring(kpoint_ring(f))
    a = R.gen("a")
    n = sub.conn_length
    if n == 1:
        image = a
    else:
        phi = kernel_parameter_map(h, sub)
        law = core.spec.law
        if law == "mul":
            chi = mu_coordinate(c, n)
            z = [0, 1] + [0] * (n - 2)
            lhs = _uni_eval(f, chi, phi, n)
            power = _uni_eval(f, chi, z, n)
            base = list(power)
            k = None
            acc = [1] + [0] * (n - 1)
            for e in range(n):
                if acc == lhs:
                    k = e
                    break
                acc = [sum_f(f, (f.mul(acc[i], base[m - i]) for i in range(m + 1))) for m in range(n)]
            if k is None:
                raise BiqError(f"{h} does not act on μ_{n} by a power map")
            image = a ** k
        else:
            _check_additive_law(c, n, core)
            image = R.zero
            for i, cf in enumerate(phi):
                if cf:
                    image = image + R.const(cf) * a ** i
    etale = {}
    if fam.has_etale:
        P = sub.gens[0]
        multiples = [c.mul(i, P) for i in range(c.order(P))]
        for i, Q in enumerate(multiples):
            etale[i] = multiples.index(h(Q))
    return ParamEndo(fam, image, etale)


def _check_additive_law(c: WCurve, n: int, fam):
    F = _fgl_ints(c, n)
    want = {(1, 0): 1, (0, 1): 1}
    if fam.spec.law == "m2":
        lam = fam.lam_value(SymRing(c.f, [])).constant()
        if lam:
            want[(2, 2)] = lam
    if F != want:
        raise BiqError(f"formal group of {c} mod degree {n} is {F}, not the law of {fam.key}")


# ---------------------------------------------------------------------------
# the C side for elliptic C: α(G) given by affine automorphisms

DEG_ONE_MINUS = {1: 0, 2: 4, 3: 3, 4: 2, 6: 1}
TRANSLATION_EXPONENT = {2: 4, 3: 3, 4: 2, 6: 1}


@dataclass(frozen=True)
class EllipticAction:
    """α(G) ⊂ Aut(C): images of the étale generators, plus the Frobenius kernel of C
    when α maps an infinitesimal factor to translations."""

    curve: WCurve
    gens: tuple
    connected: str | None = None  # None | kerF

    @functools.cached_property
    def group(self) -> list:
        from biq.grouprec import closure
        ident = affine(identity_aut(self.curve))
        return closure(list(self.gens), compose_affine, key=lambda a: a.key(), identity=ident)

    @functools.cached_property
    def keys(self) -> set:
        return {a.key() for a in self.group}

    @property
    def translations(self) -> list:
        return [a.s for a in self.group if a.is_translation()]

    @property
    def linear(self) -> list:
        seen = {}
        for a in self.group:
            seen.setdefault(a.g.key(), a.g)
        return list(seen.values())

    @property
    def conn_length(self) -> int:
        return self.curve.f.p if self.connected else 1


def normalizing_translations(act: EllipticAction) -> list:
    """Points s such that t_s∘g can normalize α(G)(k) for some g.

    With σ ≠ 1 a linear part of α(G), s - σ'(s) lies in the translation part T
    for a conjugate σ', and T is fixed by σ'; so (1 - σ')^2 s = 0, which puts s
    in C[n] for n = 4, 3, 2, 1 as σ has order 2, 3, 4, 6.  The count of
    solutions of (1 - σ)s ∈ T is checked against |T| · deg(1 - σ) / v(σ).
    """
    c = act.curve
    lin = [g for g in act.linear if not g.is_identity()]
    if not lin:
        raise BiqError("α(G) consists of translations only")
    sigma = min(lin, key=lambda g: TRANSLATION_EXPONENT[aut_order(g)])
    n = TRANSLATION_EXPONENT[aut_order(sigma)]
    cand = _rational_torsion(c, n) if n > 1 else [None]
    T = set(act.translations)
    hits = [s for s in cand if c.add(s, c.neg(sigma(s))) in T]
    expected = len(T) * DEG_ONE_MINUS[aut_order(sigma)] // contact_order(sigma)
    if len(hits) != expected:
        raise BoundExceeded(f"only {len(hits)} of {expected} normalizing translations are rational over {c.f!r}")
    return cand


def c_normalizer(act: EllipticAction) -> list:
    c = act.curve
    out = []
    for s in normalizing_translations(act):
        for g in autO_enum(c):
            h = AffineAut(c, s, g)
            if all(conjugate_affine(h, x).key() in act.keys for x in act.gens):
                out.append(h)
    return out


def c_centralizer(act: EllipticAction, normalizer=None) -> list:
    normalizer = normalizer if normalizer is not None else c_normalizer(act)
    out = []
    for h in normalizer:
        if all(conjugate_affine(h, x).key() == x.key() for x in act.gens):
            if act.connected is None or contact_order(h.g, act.conn_length + 1) >= act.conn_length:
                out.append(h)
    return out


def ell_aut_centralizer(act: EllipticAction):
    """C_{Aut_C}(α(G)) / α(G) as a SchemeStructure.

    The étale part is the recognized quotient of k-points; the connected part
    is the infinitesimal fixed scheme of a generator of the linear part,
    modulo the infinitesimal part of α(G).
    """
    from biq.grouprec import SchemeStructure, quotient_table, recognize
    c = act.curve
    N = c_normalizer(act)
    C = c_centralizer(act, N)
    key = lambda a: a.key()
    table = quotient_table(C, compose_affine, key, act.group)
    etale = recognize(table)
    sigma = max(act.linear, key=aut_order)
    v = contact_order(sigma)
    if v % act.conn_length:
        raise BiqError("infinitesimal part of α(G) does not divide the fixed scheme")
    qlen = v // act.conn_length
    conn = ()
    kind = "direct"
    if qlen > 1:
        conn = (connected_tag(c, qlen),)
        moving = [h for h in C if contact_order(h.g, qlen + 1) < qlen]
        kind = "semidirect" if moving else "direct"
    return SchemeStructure(conn, etale, kind), {"normalizer": N, "centralizer": C}


def n_group(act: EllipticAction) -> str:
    """N = N_{Aut(C)}(α(G)(k)) / C_{Aut_C}(α(G))(k), recognized."""
    from biq.grouprec import quotient_table, recognize
    N = c_normalizer(act)
    C = c_centralizer(act, N)
    return recognize(quotient_table(N, compose_affine, lambda a: a.key(), C))
