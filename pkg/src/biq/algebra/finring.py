"""Vectorized arithmetic on finite rings.

Elements are integer ids.  A finite SymRing gets full addition and
multiplication tables; a bare field uses log/exp tables so that fields far
larger than any table can still be scanned in bulk.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from biq.algebra.field import Field
from biq.algebra.ring import SymExpr, SymRing
from biq.errors import TooLarge

TABLE_LIMIT = 1024


class FieldOps:
    """numpy arithmetic on F_q with elements encoded as in Field."""

    def __init__(self, f: Field):
        self.f = f
        self.q = f.q
        self.p = f.p
        q = f.q
        self.exp = np.array(list(f.exp_table) + list(f.exp_table), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        lt = f.log_table
        for a in range(1, q):
            log[a] = lt[a]
        self.log = log
        self.n = q
        self.all = np.arange(q, dtype=np.int64)
        self.units = np.arange(1, q, dtype=np.int64)
        self.one = 1

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        out = self.exp[self.log[x] + self.log[y]]
        return np.where((x == 0) | (y == 0), 0, out)

    def add(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        scale = 1
        xs, ys = x, y
        for _ in range(self.f.k):
            out = out + ((xs % self.p + ys % self.p) % self.p) * scale
            xs, ys = xs // self.p, ys // self.p
            scale *= self.p
        return out

    def neg(self, x):
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x
        out = np.zeros(x.shape, dtype=np.int64)
        scale = 1
        xs = x
        for _ in range(self.f.k):
            out = out + ((-(xs % self.p)) % self.p) * scale
            xs = xs // self.p
            scale *= self.p
        return out

    def pow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        if k == 0:
            return np.ones(x.shape, dtype=np.int64)
        out = self.exp[(self.log[x] * k) % (self.q - 1)]
        return np.where(x == 0, 0, out)

    def const(self, c: int) -> int:
        return c

    def to_expr(self, ring: SymRing, x: int) -> SymExpr:
        return ring.const(int(x))

    def from_expr(self, x: SymExpr) -> int:
        return x.constant()


class RingOps:
    """Table arithmetic on a finite SymRing of at most TABLE_LIMIT elements."""

    def __init__(self, ring: SymRing):
        n = ring.size()
        if n > TABLE_LIMIT:
            raise TooLarge(f"{ring!r} has {n} elements; table arithmetic stops at {TABLE_LIMIT}")
        self.ring = ring
        f = ring.base
        self.f = f
        self.p = f.p
        self.q = q = f.q
        self.n = n
        basis = ring.basis()
        self.basis = basis
        dim = len(basis)
        ids = np.arange(n, dtype=np.int64)
        digits = np.stack([(ids // q ** i) % q for i in range(dim)], axis=1) if dim else np.zeros((n, 0), np.int64)
        self.digits = digits
        fa = np.array([[f.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        fm = np.array([[f.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        weights = q ** np.arange(dim, dtype=np.int64)
        self.weights = weights
        add = np.zeros((n, n), dtype=np.int64)
        for i in range(dim):
            add += fa[digits[:, i][:, None], digits[:, i][None, :]] * weights[i]
        self.add_table = add
        bindex = {m: i for i, m in enumerate(basis)}
        acc = [np.zeros((n, n), dtype=np.int64) for _ in range(dim)]
        for i, mi in enumerate(basis):
            for j, mj in enumerate(basis):
                prod = ring._mul_terms({mi: 1}, {mj: 1})
                if not prod:
                    continue
                pair = fm[digits[:, i][:, None], digits[:, j][None, :]]
                for m, c in prod.items():
                    k = bindex[m]
                    acc[k] = fa[acc[k], fm[pair, c]]
        mul = np.zeros((n, n), dtype=np.int64)
        for k in range(dim):
            mul += acc[k] * weights[k]
        self.mul_table = mul
        self.all = ids
        one = self.from_expr(ring.one)
        self.one = one
        self.units = ids[(mul == one).any(axis=1)]
        neg = np.zeros(n, dtype=np.int64)
        for i in range(dim):
            neg += np.array([f.neg(int(d)) for d in digits[:, i]], dtype=np.int64) * weights[i]
        self.neg_table = neg
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(mul == one)
        inv[rows] = cols
        self.inv_table = inv

    def mul(self, x, y):
        return self.mul_table[x, y]

    def add(self, x, y):
        return self.add_table[x, y]

    def neg(self, x):
        return self.neg_table[x]

    def pow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        if k < 0:
            x = self.inv_table[x]
            k = -k
        out = np.full(x.shape, self.one, dtype=np.int64)
        base = x
        while k:
            if k & 1:
                out = self.mul_table[out, base]
            base = self.mul_table[base, base]
            k >>= 1
        return out

    def const(self, c: int) -> int:
        return int(c)  # constants sit in the first coordinate

    def to_expr(self, ring: SymRing, x: int) -> SymExpr:
        x = int(x)
        cs = [(x // self.q ** i) % self.q for i in range(len(self.basis))]
        return self.ring.from_coords(cs)

    def from_expr(self, x: SymExpr) -> int:
        return int(sum(c * self.q ** i for i, c in enumerate(self.ring.coords(x))))

    def elements(self):
        return [self.to_expr(self.ring, i) for i in range(self.n)]


@lru_cache(maxsize=64)
def ring_ops(ring: SymRing):
    """Arithmetic backend for a finite ring (tables) or a bare field (log/exp)."""
    if ring.ngens == 0 and ring.base.q > TABLE_LIMIT:
        return FieldOps(ring.base)
    return RingOps(ring)


def nilpotent_domain(ops, n: int):
    """Ids x with x^n = 0."""
    return ops.all[ops.pow(ops.all, n) == 0]
