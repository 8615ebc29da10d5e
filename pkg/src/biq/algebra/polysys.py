"""Polynomial systems over finite rings, solved by pruned vectorized search."""

from __future__ import annotations

import numpy as np

from biq.algebra.ring import SymExpr


class PolySystem:
    """Laurent polynomials in named variables with coefficients in a base field.

    Each polynomial is a dict mapping exponent tuples (one entry per
    variable) to nonzero field coefficients.
    """

    def __init__(self, variables, polys):
        self.variables = tuple(variables)
        self.polys = [dict(p) for p in polys if p]

    @classmethod
    def from_exprs(cls, exprs, variables, group_by=()):
        """Split SymExprs into polynomials in ``variables``.

        Generators listed in ``group_by`` index a basis over which each
        expression is decomposed; every component must vanish separately.
        """
        polys = []
        for x in exprs:
            ring = x.ring
            vidx = [ring.index[v] for v in variables]
            gidx = [ring.index[g] for g in group_by]
            parts: dict = {}
            for m, c in x.terms.items():
                key = tuple(m[i] for i in gidx)
                mono = tuple(m[i] for i in vidx)
                if any(m[i] for i in range(len(m)) if i not in vidx and i not in gidx):
                    raise ValueError(f"stray generator in {x}")
                parts.setdefault(key, {})[mono] = c
            polys.extend(parts.values())
        return cls(variables, _dedupe(polys))

    def specialize(self, var: str, value: int, field) -> "PolySystem":
        """Substitute a field value for one variable."""
        i = self.variables.index(var)
        out = []
        for p in self.polys:
            q: dict = {}
            for m, c in p.items():
                v = field.mul(c, field.pow(value, m[i]) if (value or m[i] > 0) else (1 if m[i] == 0 else 0))
                if not v:
                    continue
                mm = m[:i] + m[i + 1:]
                s = field.add(q.get(mm, 0), v)
                if s:
                    q[mm] = s
                else:
                    q.pop(mm, None)
            if q:
                out.append(q)
        return PolySystem(self.variables[:i] + self.variables[i + 1:], _dedupe(out))

    def involves(self, poly) -> set:
        return {self.variables[i] for m in poly for i, e in enumerate(m) if e}

    def solve(self, ops, domains: dict, order=None, limit=None):
        """All assignments (tuples of ids in ``order``) making every polynomial vanish."""
        order = tuple(order or self.variables)
        pos = {v: order.index(v) for v in self.variables}
        levels = [[] for _ in order]
        for p in self.polys:
            used = self.involves(p)
            if not used:
                # a nonzero constant: no solutions
                return []
            lvl = max(pos[v] for v in used)
            # exponents reordered to follow ``order``
            terms = []
            for m, c in p.items():
                e = [0] * len(order)
                for i, x in enumerate(m):
                    e[pos[self.variables[i]]] = x
                terms.append((tuple(e), c))
            levels[lvl].append(terms)
        doms = [np.asarray(domains[v], dtype=np.int64) for v in order]
        powcache: list[dict] = [dict() for _ in order]

        def dom_pow(lvl, e):
            if e not in powcache[lvl]:
                powcache[lvl][e] = ops.pow(doms[lvl], e)
            return powcache[lvl][e]

        out = []

        def scalar_pow(x, e):
            return int(ops.pow(np.int64(x), e))

        def rec(lvl, assigned):
            cand = doms[lvl]
            mask = np.ones(len(cand), dtype=bool)
            for terms in levels[lvl]:
                acc = np.zeros(len(cand), dtype=np.int64)
                by_exp: dict = {}
                for e, c in terms:
                    s = ops.const(c)
                    for j in range(lvl):
                        if e[j]:
                            s = int(ops.mul(np.int64(s), np.int64(scalar_pow(assigned[j], e[j]))))
                            if s == 0:
                                break
                    if s:
                        by_exp[e[lvl]] = int(ops.add(np.int64(by_exp.get(e[lvl], 0)), np.int64(s)))
                for k, s in by_exp.items():
                    if s:
                        acc = ops.add(acc, ops.mul(np.int64(s), dom_pow(lvl, k)))
                mask &= acc == 0
                if not mask.any():
                    return
            for x in cand[mask]:
                nxt = assigned + (int(x),)
                if lvl + 1 == len(order):
                    out.append(nxt)
                    if limit is not None and len(out) >= limit:
                        raise _Stop
                else:
                    rec(lvl + 1, nxt)

        try:
            rec(0, ())
        except _Stop:
            pass
        return out


class _Stop(Exception):
    pass


def _dedupe(polys):
    seen = set()
    out = []
    for p in polys:
        key = tuple(sorted(p.items()))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def poly_str(poly, variables) -> str:
    parts = []
    for m, c in sorted(poly.items(), reverse=True):
        f = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(variables, m) if e)
        parts.append(f if (f and c == 1) else (f"{c}*{f}" if f else str(c)))
    return " + ".join(parts) or "0"


def expr_from_poly(poly, variables, ring, images: dict) -> SymExpr:
    """Evaluate a polynomial at SymExpr images."""
    acc = ring.zero
    for m, c in poly.items():
        t = ring.const(c)
        for v, e in zip(variables, m):
            if e:
                t = t * images[v] ** e
        acc = acc + t
    return acc


def eval_poly(ops, poly, assignment) -> int:
    """Value (an id) of a polynomial at a tuple of ids, one per variable."""
    acc = np.int64(0)
    for m, c in poly.items():
        t = np.int64(ops.const(c))
        for x, e in zip(assignment, m):
            if e:
                t = ops.mul(t, ops.pow(np.int64(x), e))
        acc = ops.add(acc, t)
    return int(acc)
