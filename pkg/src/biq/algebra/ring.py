"""Truncated multivariate rewrite rings over a finite field.

A ``SymRing`` is F_q[x_1, ..., x_m] modulo per-generator relations, each
generator carrying one attribute:

* ``Unit()``            Laurent generator, exponents in Z
* ``UnitCyclic(n)``     x^n = 1, exponents reduced mod n
* ``Nilpotent(n)``      x^n = 0
* ``Rewrite(n, rule)``  x^n replaced by ``rule``, a polynomial in earlier
                        generators and lower powers of x
* ``Free()``            polynomial generator, exponents >= 0

Elements (``SymExpr``) are sparse maps from exponent tuples to nonzero
field coefficients, always kept in normal form.
"""

from __future__ import annotations

import ast
import itertools
import os
import re
from dataclasses import dataclass

from biq.algebra.field import Field, embed
from biq.errors import AttributeViolation, BiqError, NotInvertible, RingMismatch, TooLarge

DEFAULT_MAX_ENUM = 2 ** 22


def max_enum() -> int:
    raw = os.environ.get("BIQ_MAX_ENUM")
    return int(raw) if raw else DEFAULT_MAX_ENUM


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class UnitCyclic:
    n: int

    def __str__(self):
        return f"unit^{self.n}=1"


@dataclass(frozen=True)
class Nilpotent:
    n: int

    def __str__(self):
        return f"nil^{self.n}=0"


@dataclass(frozen=True)
class Rewrite:
    n: int
    rule: str

    def __str__(self):
        return f"^{self.n}={self.rule}"


@dataclass(frozen=True)
class Free:
    def __str__(self):
        return "free"


def _is_finite_attr(attr) -> bool:
    return isinstance(attr, (UnitCyclic, Nilpotent, Rewrite))


class SymRing:
    def __init__(self, base: Field, gens):
        self.base = base
        self.p = base.p
        self.names = tuple(name for name, _ in gens)
        self.attrs = tuple(attr for _, attr in gens)
        if len(set(self.names)) != len(self.names):
            raise BiqError(f"duplicate generator names in {self.names}")
        self.index = {name: i for i, name in enumerate(self.names)}
        self.ngens = len(self.names)
        self._zero_exp = (0,) * self.ngens
        self._has_rewrite = any(isinstance(a, Rewrite) for a in self.attrs)
        self._rules: dict[int, dict] = {}
        self._nf_cache: dict[tuple, dict | None] = {}
        for i, attr in enumerate(self.attrs):
            if isinstance(attr, Rewrite):
                # the rule may only use generators 0..i; lower powers of x_i are fine
                rule = self._parse_terms(attr.rule, limit=i + 1)
                if any(e[i] >= attr.n for e in rule):
                    raise BiqError(f"rewrite rule for {self.names[i]} is not degree-lowering")
                self._rules[i] = rule

    # -- identity ---------------------------------------------------------
    def signature(self):
        return (self.base, self.names, self.attrs)

    def __eq__(self, other):
        return isinstance(other, SymRing) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        gens = ", ".join(f"{n}:{a}" for n, a in zip(self.names, self.attrs))
        return f"SymRing({self.base!r}; {gens})"

    @property
    def is_finite(self) -> bool:
        return all(_is_finite_attr(a) for a in self.attrs)

    def extend(self, gens) -> "SymRing":
        """The ring with extra generators appended (a tensor product)."""
        return SymRing(self.base, list(zip(self.names, self.attrs)) + list(gens))

    def with_base(self, base: Field) -> "SymRing":
        return SymRing(base, list(zip(self.names, self.attrs)))

    # -- constructors -----------------------------------------------------
    def elem(self, terms: dict) -> "SymExpr":
        return SymExpr(self, self._normalize(terms))

    def const(self, c: int) -> "SymExpr":
        c = c % self.p if isinstance(c, int) and c < 0 else c
        if c >= self.base.q:
            c = self.base.from_int(c)
        return SymExpr(self, {self._zero_exp: c} if c else {})

    @property
    def zero(self) -> "SymExpr":
        return SymExpr(self, {})

    @property
    def one(self) -> "SymExpr":
        return SymExpr(self, {self._zero_exp: 1})

    def gen(self, name: str) -> "SymExpr":
        i = self.index[name]
        e = [0] * self.ngens
        e[i] = 1
        return self.elem({tuple(e): 1})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def __call__(self, value) -> "SymExpr":
        if isinstance(value, SymExpr):
            if value.ring == self:
                return value
            return value.substitute({}, self)
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def parse(self, text: str) -> "SymExpr":
        """Parse an expression such as ``"lam*z^2 + 1"``; ``^`` means power."""
        return SymExpr(self, self._parse_terms(text, limit=self.ngens, normalize=True))

    def _parse_terms(self, text, limit, normalize=False):
        tree = ast.parse(text.replace("^", "**"), mode="eval").body
        f = self.base

        def mono(i, k=1):
            e = [0] * self.ngens
            e[i] = k
            return {tuple(e): 1}

        def add(a, b):
            out = dict(a)
            for m, c in b.items():
                s = f.add(out.get(m, 0), c)
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
            return out

        def mul(a, b):
            if normalize:
                return self._mul_terms(a, b)
            out = {}
            for ma, ca in a.items():
                for mb, cb in b.items():
                    m = tuple(x + y for x, y in zip(ma, mb))
                    out = add(out, {m: f.mul(ca, cb)})
            return out

        def neg(a):
            return {m: f.neg(c) for m, c in a.items()}

        def walk(node):
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                c = node.value % self.p
                return {self._zero_exp: c} if c else {}
            if isinstance(node, ast.Name):
                if node.id not in self.index or self.index[node.id] >= limit:
                    raise BiqError(f"unknown or out-of-order generator {node.id!r} in {text!r}")
                return mono(self.index[node.id])
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
                return neg(walk(node.operand))
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Add):
                    return add(walk(node.left), walk(node.right))
                if isinstance(node.op, ast.Sub):
                    return add(walk(node.left), neg(walk(node.right)))
                if isinstance(node.op, ast.Mult):
                    return mul(walk(node.left), walk(node.right))
                if isinstance(node.op, ast.Pow) and isinstance(node.right, ast.Constant):
                    k = node.right.value
                    base = walk(node.left)
                    if k < 0:
                        if not normalize:
                            raise BiqError("negative powers are not allowed in rewrite rules")
                        return SymExpr(self, base).inverse().terms_copy_pow(-k)
                    out = {self._zero_exp: 1}
                    for _ in range(k):
                        out = mul(out, base)
                    return out
            raise BiqError(f"cannot parse {text!r}")

        terms = walk(tree)
        return self._normalize(terms) if normalize else terms

    # -- normal forms -----------------------------------------------------
    def _nf_simple(self, e):
        """Reduce an exponent tuple without rewrite rules; None means zero."""
        out = list(e)
        for i, attr in enumerate(self.attrs):
            x = out[i]
            if isinstance(attr, Nilpotent):
                if x >= attr.n:
                    return None
                if x < 0:
                    raise NotInvertible(f"negative power of nilpotent {self.names[i]}")
            elif isinstance(attr, UnitCyclic):
                out[i] = x % attr.n
            elif x < 0 and not isinstance(attr, Unit):
                raise NotInvertible(f"negative power of {self.names[i]}")
        return tuple(out)

    def _nf_mono(self, e):
        """Normal form of a monomial as a term dict."""
        cached = self._nf_cache.get(e)
        if cached is not None or e in self._nf_cache:
            return cached
        s = self._nf_simple(e)
        if s is None:
            result = {}
        else:
            result = None
            for i in range(self.ngens - 1, -1, -1):
                attr = self.attrs[i]
                if isinstance(attr, Rewrite) and s[i] >= attr.n:
                    lower = list(s)
                    lower[i] -= attr.n
                    result = self._mul_terms(self._rules[i], self._nf_mono(tuple(lower)))
                    break
            if result is None:
                result = {s: 1}
        self._nf_cache[e] = result
        return result

    def _normalize(self, terms):
        out = {}
        f = self.base
        for e, c in terms.items():
            if not c:
                continue
            if self._has_rewrite:
                for m, d in self._nf_mono(e).items():
                    s = f.add(out.get(m, 0), f.mul(c, d))
                    if s:
                        out[m] = s
                    else:
                        out.pop(m, None)
            else:
                m = self._nf_simple(e)
                if m is None:
                    continue
                s = f.add(out.get(m, 0), c)
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return out

    def _mul_terms(self, a, b):
        f = self.base
        out: dict = {}
        prime = f.k == 1
        p = self.p
        rewrite = self._has_rewrite
        for ma, ca in a.items():
            for mb, cb in b.items():
                e = tuple(x + y for x, y in zip(ma, mb))
                c = ca * cb % p if prime else f.mul(ca, cb)
                if rewrite:
                    for m, d in self._nf_mono(e).items():
                        cd = c * d % p if prime else f.mul(c, d)
                        s = (out.get(m, 0) + cd) % p if prime else f.add(out.get(m, 0), cd)
                        if s:
                            out[m] = s
                        else:
                            out.pop(m, None)
                else:
                    m = self._nf_simple(e)
                    if m is None:
                        continue
                    s = (out.get(m, 0) + c) % p if prime else f.add(out.get(m, 0), c)
                    if s:
                        out[m] = s
                    else:
                        out.pop(m, None)
        return out

    # -- finite rings -----------------------------------------------------
    def basis(self):
        """Normal-form monomials spanning a finite ring, in canonical order.

        Order: itertools.product over per-generator exponent ranges, so the
        last generator's exponent varies fastest.
        """
        if not self.is_finite:
            raise TooLarge(f"{self!r} is not finite-dimensional")
        ranges = [range(a.n) for a in self.attrs]
        return [tuple(e) for e in itertools.product(*ranges)]

    def dimension(self) -> int:
        return len(self.basis())

    def size(self) -> int:
        return self.base.q ** self.dimension()

    def coords(self, x: "SymExpr") -> list[int]:
        return [x.terms.get(m, 0) for m in self.basis()]

    def from_coords(self, cs) -> "SymExpr":
        return SymExpr(self, {m: c for m, c in zip(self.basis(), cs) if c})

    def enumerate(self):
        """Every element once, in little-endian order on coordinate vectors."""
        n = self.size()
        if n > max_enum():
            raise TooLarge(f"{self!r} has {n} elements, above the guard {max_enum()}")
        basis = self.basis()
        q = self.base.q
        for idx in range(n):
            terms = {}
            for m in basis:
                idx, c = divmod(idx, q)
                if c:
                    terms[m] = c
            yield SymExpr(self, terms)

    def units(self):
        for x in self.enumerate():
            if x.is_unit():
                yield x

    def nilradical_basis(self):
        """Basis monomials involving some nilpotent generator."""
        return [m for m in self.basis() if self._mono_is_nilpotent(m)]

    def _mono_is_nilpotent(self, m) -> bool:
        return any(x and isinstance(a, Nilpotent) for x, a in zip(m, self.attrs))


def test_ring(base: Field, nilpotents=()) -> SymRing:
    """F_q[e1, ...]/(e1^n1, ...) as a SymRing with Nilpotent generators."""
    return SymRing(base, [(name, Nilpotent(n)) for name, n in nilpotents])


class SymExpr:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: SymRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion ---------------------------------------------------------
    def _lift(self, other) -> "SymExpr":
        if isinstance(other, SymExpr):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.ring.base
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(out.get(m, 0), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SymExpr(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.base
        return SymExpr(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return SymExpr(self.ring, {})
        return SymExpr(self.ring, self.ring._mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def scale(self, c: int) -> "SymExpr":
        f = self.ring.base
        if not c:
            return SymExpr(self.ring, {})
        return SymExpr(self.ring, {m: f.mul(c, d) for m, d in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def terms_copy_pow(self, k):
        return (self ** k).terms

    def frobenius(self) -> "SymExpr":
        return self ** self.ring.p

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    # -- predicates -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, SymExpr):
            return NotImplemented
        return self.terms == other.terms and (self.ring is other.ring or self.ring == other.ring)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant(self) -> int:
        return self.terms.get(self.ring._zero_exp, 0)

    def is_constant(self) -> bool:
        return all(m == self.ring._zero_exp for m in self.terms)

    def coeff(self, mono) -> int:
        return self.terms.get(tuple(mono), 0)

    def free_part(self, names) -> dict:
        """Group terms by the exponents of the named generators.

        Returns a map from exponent sub-tuples to SymExprs in the same ring
        whose monomials have zero exponents in those generators.
        """
        idx = [self.ring.index[n] for n in names]
        out: dict = {}
        for m, c in self.terms.items():
            key = tuple(m[i] for i in idx)
            rest = list(m)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: SymExpr(self.ring, v) for k, v in out.items()}

    def variables(self) -> set[str]:
        names = self.ring.names
        return {names[i] for m in self.terms for i, x in enumerate(m) if x}

    def is_nilpotent(self) -> bool:
        return all(self.ring._mono_is_nilpotent(m) for m in self.terms)

    def is_unit(self) -> bool:
        try:
            self.inverse()
        except NotInvertible:
            return False
        return True

    # -- inverse ----------------------------------------------------------
    def inverse(self) -> "SymExpr":
        """Multiplicative inverse, or NotInvertible.

        A unit monomial plus a nilpotent remainder is inverted by a
        geometric series; other elements of finite rings by linear algebra.
        """
        ring = self.ring
        reduced = {m: c for m, c in self.terms.items() if not ring._mono_is_nilpotent(m)}
        if not reduced:
            raise NotInvertible(f"{self} is nilpotent")
        # pull out a Laurent monomial in the Unit generators, leaving a
        # reduced part that lives in the finite subring (or is a constant)
        shift = [0] * ring.ngens
        for i, attr in enumerate(ring.attrs):
            if isinstance(attr, Unit):
                shift[i] = min(m[i] for m in reduced)
        for m in reduced:
            for i, attr in enumerate(ring.attrs):
                if isinstance(attr, (Unit, Free)) and m[i] != shift[i]:
                    raise NotInvertible(f"cannot decide invertibility of {self} in {ring!r}")
        unit_mono = SymExpr(ring, {tuple(shift): 1})
        unit_inv = SymExpr(ring, {tuple(-x for x in shift): 1})
        core = SymExpr(ring, reduced) * unit_inv
        if core.is_constant():
            core_inv = ring.const(ring.base.inv(core.constant()))
        else:
            core_inv = core._inverse_finite_part()
        approx = core_inv * unit_inv
        nil = self * approx - 1
        if not nil:
            return approx
        if not nil.is_nilpotent():
            raise NotInvertible(f"{self} is not a unit")
        total = ring.one
        term = ring.one
        for _ in range(10_000):
            term = -(term * nil)
            if not term:
                return approx * total
            total = total + term
        raise NotInvertible("geometric series did not terminate")

    def _inverse_finite_part(self):
        """Invert an element supported on the finite-type generators."""
        ring = self.ring
        f = ring.base
        finite = [i for i, a in enumerate(ring.attrs) if isinstance(a, (UnitCyclic, Rewrite))]
        ranges = [range(ring.attrs[i].n) for i in finite]
        basis = []
        for exps in itertools.product(*ranges):
            e = [0] * ring.ngens
            for i, x in zip(finite, exps):
                e[i] = x
            basis.append(tuple(e))
        n = len(basis)
        cols = [(self * SymExpr(ring, {m: 1})).terms for m in basis]
        rows = [[cols[j].get(basis[i], 0) for j in range(n)] + [1 if i == 0 else 0] for i in range(n)]
        extra = {m for c in cols for m in c} - set(basis)
        if extra:
            raise NotInvertible(f"cannot decide invertibility of {self} in {ring!r}")
        sol = solve_linear(f, rows, n)
        if sol is None:
            raise NotInvertible(f"{self} is not a unit")
        return SymExpr(ring, {basis[j]: c for j, c in enumerate(sol) if c})

    def _inverse_linear(self):
        ring = self.ring
        f = ring.base
        basis = ring.basis()
        pos = {m: i for i, m in enumerate(basis)}
        n = len(basis)
        # column j = self * basis_j
        cols = []
        for m in basis:
            prod = self * SymExpr(ring, {m: 1})
            cols.append(prod.terms)
        rows = [[cols[j].get(basis[i], 0) for j in range(n)] + [1 if i == 0 else 0] for i in range(n)]
        sol = solve_linear(f, rows, n)
        if sol is None:
            raise NotInvertible(f"{self} is not a unit")
        return SymExpr(ring, {basis[j]: c for j, c in enumerate(sol) if c})

    # -- substitution -----------------------------------------------------
    def substitute(self, assignment: dict, target: SymRing | None = None, check: bool = True) -> "SymExpr":
        """Apply the ring map sending named generators to given images.

        Generators not named map to the same-named generator of ``target``.
        With ``check`` on, every image is tested against its generator's
        attribute and AttributeViolation names the first offender.
        """
        src = self.ring
        target = target or src
        images = []
        for i, name in enumerate(src.names):
            if name in assignment:
                img = assignment[name]
                img = target(img) if not isinstance(img, SymExpr) else img
                if img.ring != target:
                    img = target(img)
            elif name in target.index:
                img = target.gen(name)
            else:
                raise AttributeViolation(name, "no image given and no generator of that name in the target")
            images.append(img)
        if check:
            check_images(src, images, target)
        return evaluate(self, images, target)

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"SymExpr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.base
        names = self.ring.names
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            factors = []
            for name, x in zip(names, m):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            cs = f.element_str(c)
            if f.k > 1 and c >= f.p:
                cs = f"({cs})"
            if factors:
                parts.append("*".join(([] if c == 1 else [cs]) + factors))
            else:
                parts.append(cs)
        return " + ".join(parts)


def check_images(src: SymRing, images, target: SymRing):
    for i, (name, attr) in enumerate(zip(src.names, src.attrs)):
        img = images[i]
        if isinstance(attr, Unit):
            if not img.is_unit():
                raise AttributeViolation(name, f"image {img} is not a unit")
        elif isinstance(attr, UnitCyclic):
            if img ** attr.n != target.one:
                raise AttributeViolation(name, f"image {img} does not satisfy x^{attr.n} = 1")
        elif isinstance(attr, Nilpotent):
            if img ** attr.n:
                raise AttributeViolation(name, f"image {img} does not satisfy x^{attr.n} = 0")
        elif isinstance(attr, Rewrite):
            rule = SymExpr(src, src._rules[i])
            if img ** attr.n != evaluate(rule, images, target):
                raise AttributeViolation(name, f"image {img} violates x^{attr.n} = {attr.rule}")


def evaluate(x: SymExpr, images, target: SymRing) -> SymExpr:
    src = x.ring
    sf, tf = src.base, target.base
    power_cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = images[i] ** k
        return power_cache[key]

    acc: dict = {}
    for m, c in x.terms.items():
        term = SymExpr(target, {target._zero_exp: embed(c, sf, tf)})
        for i, k in enumerate(m):
            if k:
                term = term * power(i, k)
                if not term:
                    break
        for tm, tc in term.terms.items():
            s = tf.add(acc.get(tm, 0), tc)
            if s:
                acc[tm] = s
            else:
                acc.pop(tm, None)
    return SymExpr(target, acc)


def solve_linear(f: Field, rows, n):
    """Solve an augmented system (list of rows, n unknowns); None if inconsistent.

    Free variables are set to zero.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][col])
        rows[r] = [f.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n]:
            return None
    sol = [0] * n
    for i, col in enumerate(pivots):
        sol[col] = rows[i][n]
    return sol


def nullspace(f: Field, rows, n):
    """Basis of the solutions of the homogeneous system rows * x = 0."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][col])
        rows[r] = [f.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(rows[i][fc])
        basis.append(v)
    return basis


_RING_SPEC = re.compile(r"F(\d+)(?:\[([A-Za-z_]\w*(?:,[A-Za-z_]\w*)*)\](?:/(.+))?)?")
_RELATION = re.compile(r"([A-Za-z_]\w*?)\^?(\d+)")


def parse_ring_spec(spec: str) -> SymRing:
    """``F16``, ``F16[e]/e2``, ``F4[e,f]/(e^2,f^3)``: a field with nilpotent generators."""
    from biq.algebra.field import field_of_order
    m = _RING_SPEC.fullmatch(spec.replace(" ", ""))
    if not m:
        raise BiqError(f"bad ring spec {spec!r}")
    base = field_of_order(int(m.group(1)))
    names = m.group(2).split(",") if m.group(2) else []
    rels = m.group(3) or ""
    if rels.startswith("(") and rels.endswith(")"):
        rels = rels[1:-1]
    orders = {}
    for r in filter(None, rels.split(",")):
        rm = _RELATION.fullmatch(r)
        if not rm or rm.group(1) not in names:
            raise BiqError(f"bad relation {r!r} in ring spec {spec!r}")
        orders[rm.group(1)] = int(rm.group(2))
    missing = [n for n in names if n not in orders]
    if missing or len(set(names)) != len(names):
        raise BiqError(f"every generator needs exactly one nilpotency relation in {spec!r}")
    return test_ring(base, [(n, orders[n]) for n in names])
