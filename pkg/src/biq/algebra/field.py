"""Finite fields F_{p^k} with integer-encoded elements.

An element of F_{p^k} is stored as the integer whose base-p digits
(little-endian) are the coefficients of its reduced polynomial
representative modulo the field's defining polynomial.  The canonical
element order is plain integer order on these encodings.

Multiplication goes through exp/log tables built lazily from a primitive
element; for odd p addition uses Zech logarithms, for p = 2 it is XOR.
"""

from __future__ import annotations

import functools
import itertools
import random

from biq.errors import DegreeTooLarge, NotPrime, ZeroPolynomial

MAX_FIELD_SIZE = 2 ** 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over the prime field (coefficient lists, low degree first)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_polymod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        if c:
            for i, mc in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
        _trim(a)
    return _trim(a)


def _fp_is_irreducible(modulus, p):
    k = len(modulus) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _fp_polymod(modulus, list(low) + [1], p):
                return False
    return True


def least_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are ordered by their coefficient vector read from the
    x^{k-1} coefficient down to the constant term.
    """
    if k == 1:
        return [0, 1]
    for big_endian in itertools.product(range(p), repeat=k):
        low = list(reversed(big_endian))
        if low[0] == 0:
            continue
        cand = low + [1]
        if _fp_is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


class Field:
    """The finite field F_{p^k}; elements are ints in range(q)."""

    def __init__(self, p: int, k: int, modulus: list[int]):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._exp = None
        self._log = None
        self._zech = None

    # -- identity -------------------------------------------------------
    def __repr__(self):
        return f"F{self.q}" if self.k == 1 else f"F{self.q}[{self.modulus_str()}]"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.k))

    def modulus_str(self) -> str:
        return poly_str(list(self.modulus), var="x")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + (d % self.p)
        return v

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    # -- tables ---------------------------------------------------------
    def _mul_poly(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_fp_polymod(prod, list(self.modulus), self.p) + [0] * 0)

    def _build_tables(self):
        q = self.q
        if q == 2:
            self._exp, self._log = [1], [None, 0]
            self._zech = [None]
            return
        order = q - 1
        factors = prime_factors(order)
        for g in range(2, q) if self.k == 1 else range(self.p, q):
            if all(self._pow_slow(g, order // f) != 1 for f in factors):
                break
        exp = [0] * order
        x = 1
        for i in range(order):
            exp[i] = x
            x = self._mul_poly(x, g)
        log = [None] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp, self._log = exp, log
        if self.p != 2:
            zech = [None] * order
            for n in range(order):
                s = self._add_digits(1, exp[n])
                zech[n] = None if s == 0 else log[s]
            self._zech = zech

    def _pow_slow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._mul_poly(r, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return r

    def _add_digits(self, a, b):
        p = self.p
        r, m = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            r += ((x + y) % p) * m
            m *= p
        return r

    @property
    def exp_table(self):
        if self._exp is None:
            self._build_tables()
        return self._exp

    @property
    def log_table(self):
        if self._log is None:
            self._build_tables()
        return self._log

    @property
    def generator(self) -> int:
        return self.exp_table[1] if self.q > 2 else 1

    # -- arithmetic -----------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        log = self.log_table
        order = self.q - 1
        la = log[a]
        z = self._zech[(log[b] - la) % order]
        if z is None:
            return 0
        return self._exp[(la + z) % order]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.k == 1:
            return self.p - a
        order = self.q - 1
        return self.exp_table[(self.log_table[a] + order // 2) % order]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        log = self.log_table
        return self._exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.exp_table[(-self.log_table[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        if self.k == 1:
            return pow(a, e % (self.p - 1), self.p)
        return self.exp_table[(self.log_table[a] * e) % (self.q - 1)]

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        n = self.q - 1
        o = n
        for f in prime_factors(n):
            while o % f == 0 and self.pow(a, o // f) == 1:
                o //= f
        return o

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def sqrt(self, a: int) -> int | None:
        """Some square root of a, or None; in characteristic 2 it is unique."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        la = self.log_table[a]
        if la % 2:
            return None
        r = self._exp[la // 2]
        return min(r, self.neg(r))

    def is_square(self, a: int) -> bool:
        return self.sqrt(a) is not None

    def root_of_unity(self, n: int) -> int | None:
        """An element of exact multiplicative order n, or None."""
        if (self.q - 1) % n:
            return None
        return self.pow(self.generator, (self.q - 1) // n) if self.q > 2 else 1

    def element_str(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return poly_str(self.digits(a), var="g") or "0"


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> Field:
    """Build F_{p^k} with the lexicographically least irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(p)
    if k < 1:
        raise DegreeTooLarge(f"degree must be >= 1, got {k}")
    if p ** k > MAX_FIELD_SIZE:
        raise DegreeTooLarge(f"{p}^{k} exceeds the desk-scale bound {MAX_FIELD_SIZE}")
    return Field(p, k, least_irreducible(p, k))


# ---------------------------------------------------------------------------
# polynomials over a Field (lists of ints, low degree first)

def poly_str(coeffs, var="x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{'*' if mono else ''}{mono}")
    return "+".join(terms)


def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_eval(f: Field, poly, x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = f.add(f.mul(acc, x), c)
    return acc


def poly_divmod(f: Field, a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not b:
        raise ZeroPolynomial("division by the zero polynomial")
    inv_lead = f.inv(b[-1])
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = f.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = f.sub(a[shift + i], f.mul(c, bc))
        a = poly_trim(a[:-1])
    return quot, a


def roots(poly, f: Field) -> list[int]:
    """All roots of poly in f, repeated by multiplicity, in canonical order.

    Roots are found by exhaustive evaluation; multiplicities by repeated
    synthetic division.
    """
    poly = poly_trim(poly)
    if not poly:
        raise ZeroPolynomial("roots of the zero polynomial")
    out = []
    for x in f.elements():
        if poly_eval(f, poly, x) != 0:
            continue
        rest = poly
        while len(rest) > 1 and poly_eval(f, rest, x) == 0:
            out.append(x)
            rest, _ = poly_divmod(f, rest, [f.neg(x), 1])
    return out


def splitting_degree(poly, p: int, max_degree: int = 20) -> int:
    """Least k such that poly (coefficients in F_p) splits over F_{p^k}."""
    poly = poly_trim([c % p for c in poly])
    if not poly:
        raise ZeroPolynomial("splitting degree of the zero polynomial")
    deg = len(poly) - 1
    for k in range(1, max_degree + 1):
        if p ** k > MAX_FIELD_SIZE:
            break
        if len(roots(poly, make_field(p, k))) == deg:
            return k
    raise DegreeTooLarge(f"{poly_str(poly)} does not split below the desk-scale bound")


@functools.lru_cache(maxsize=None)
def _embedding_image(src: Field, dst: Field) -> int:
    if src.k == 1:
        return 0
    if dst.p != src.p or dst.k % src.k:
        raise DegreeTooLarge(f"{src!r} does not embed in {dst!r}")
    rs = roots(list(src.modulus), dst)
    return rs[0]


def embed(a: int, src: Field, dst: Field) -> int:
    """Image of a under the deterministic embedding src -> dst.

    The embedding sends the class of x to the least root of src's
    modulus in dst; prime-field elements map to themselves.
    """
    if src == dst or a < src.p:
        return a
    g = _embedding_image(src, dst)
    acc, power = 0, 1
    for d in src.digits(a):
        if d:
            acc = dst.add(acc, dst.mul(d, power))
        power = dst.mul(power, g)
    return acc


def poly_add(f: Field, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim([f.add(x, y) for x, y in zip(a, b)])


def poly_sub(f: Field, a, b):
    return poly_add(f, a, [f.neg(y) for y in b])


def poly_mul(f: Field, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
    return poly_trim(out)


def poly_scale(f: Field, a, c: int):
    return poly_trim([f.mul(c, x) for x in a])


def poly_monic(f: Field, a):
    a = poly_trim(a)
    return poly_scale(f, a, f.inv(a[-1])) if a else a


def poly_gcd(f: Field, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(f, a, b)[1]
    return poly_monic(f, a)


def poly_powmod(f: Field, base, e: int, mod):
    out = [1]
    base = poly_divmod(f, base, mod)[1]
    while e:
        if e & 1:
            out = poly_divmod(f, poly_mul(f, out, base), mod)[1]
        base = poly_divmod(f, poly_mul(f, base, base), mod)[1]
        e >>= 1
    return out


def _split_linear(f: Field, g, out, rng=None):
    """Append the roots of g, a monic product of distinct linear factors."""
    if len(g) == 1:
        return
    if len(g) == 2:
        out.append(f.neg(g[0]))
        return
    # seeded random shifts: small sequential ones share traces for sparse moduli
    rng = rng or random.Random(f.q)
    for _ in range(64 * f.k + 64):
        delta = rng.randrange(1 if f.p == 2 else 0, f.q)
        if f.p == 2:
            # trace of delta*x: sum of its 2^i-th powers
            t = [0, delta]
            acc = list(t)
            for _ in range(f.k - 1):
                t = poly_powmod(f, t, 2, g)
                acc = poly_add(f, acc, t)
            h = poly_gcd(f, g, acc)
        else:
            h = poly_powmod(f, [delta, 1], (f.q - 1) // 2, g)
            h = poly_gcd(f, g, poly_sub(f, h, [1]))
        if 1 < len(h) < len(g):
            _split_linear(f, h, out, rng)
            _split_linear(f, poly_divmod(f, g, h)[0], out, rng)
            return
    raise ZeroPolynomial("could not split a product of linear factors")


def _artin_schreier(f: Field, u: int) -> int | None:
    """Some w with w^2 + w = u in characteristic 2, or None."""
    k = f.k
    if k % 2:
        # half-trace
        w, t = 0, u
        for _ in range((k + 1) // 2):
            w = f.add(w, t)
            t = f.pow(t, 4)
    else:
        w, t = 0, u
        for coef in _as_coefficients(f):
            w = f.add(w, f.mul(coef, t))
            t = f.mul(t, t)
    return w if f.add(f.mul(w, w), w) == u else None


@functools.lru_cache(maxsize=None)
def _as_coefficients(f: Field) -> tuple:
    """S_i = sum_{j>i} delta^(2^j) for a trace-one delta; then w = sum_i S_i u^(2^i)."""
    delta = next(d for d in range(1, f.q) if _trace2(f, d))
    dp = [delta]
    for _ in range(f.k - 1):
        dp.append(f.mul(dp[-1], dp[-1]))
    out = []
    for i in range(f.k - 1):
        s = 0
        for j in range(i + 1, f.k):
            s = f.add(s, dp[j])
        out.append(s)
    return tuple(out)


def _trace2(f: Field, a: int) -> int:
    t, x = 0, a
    for _ in range(f.k):
        t = f.add(t, x)
        x = f.mul(x, x)
    return t


def _quadratic_roots(f: Field, b: int, c: int) -> list[int]:
    """Distinct roots of x^2 + b x + c."""
    if f.p == 2:
        if b == 0:
            return [f.sqrt(c)]
        b2 = f.mul(b, b)
        w = _artin_schreier(f, f.div(c, b2))
        if w is None:
            return []
        r = f.mul(b, w)
        return sorted({r, f.add(r, b)})
    two = f.from_int(2)
    disc = f.sub(f.mul(b, b), f.mul(f.from_int(4), c))
    s = f.sqrt(disc)
    if s is None:
        return []
    half = f.inv(two)
    return sorted({f.mul(f.sub(s, b), half), f.mul(f.sub(f.neg(s), b), half)})


def distinct_roots(poly, f: Field) -> list[int]:
    """The distinct roots of poly in f, sorted; works for fields of any size."""
    poly = poly_monic(f, poly)
    if not poly:
        raise ZeroPolynomial("roots of the zero polynomial")
    if len(poly) == 1:
        return []
    if len(poly) == 3:
        return _quadratic_roots(f, poly[1], poly[0])
    xq = poly_powmod(f, [0, 1], f.q, poly)
    g = poly_gcd(f, poly, poly_sub(f, xq, [0, 1]))
    out = []
    _split_linear(f, g, out)
    return sorted(out)


def field_of_order(q: int) -> Field:
    """F_q for a prime power q."""
    ps = prime_factors(q) if q > 1 else []
    if len(set(ps)) != 1:
        raise NotPrime(f"{q} is not a prime power")
    p = ps[0]
    k = 0
    while q > 1:
        q //= p
        k += 1
    return make_field(p, k)
