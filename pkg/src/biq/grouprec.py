"""Finite group recognition and group-scheme structure labels.

Groups are handled as explicit multiplication tables.  Recognition is by
order profile (how many elements of each order) against a closed catalog;
every group in the catalog is determined by its profile.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

from biq.errors import (
    NoIdentity, NoInverse, NotAssociative, NotClosed, NotInCatalog, StructureMismatch,
)

MAX_TABLE = 256
FULL_ASSOC_LIMIT = 64


class MultTable:
    """A validated multiplication table on indices 0..n-1."""

    def __init__(self, table, labels=None, elements=None):
        self.table = table
        self.n = len(table)
        self.labels = labels or [str(i) for i in range(self.n)]
        self.elements = elements
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()
        self._check_associative()

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(self.n)):
                return e
        raise NoIdentity("no two-sided identity")

    def _find_inverses(self):
        inv = []
        for x in range(self.n):
            y = next((y for y in range(self.n) if self.table[x][y] == self.identity), None)
            if y is None or self.table[y][x] != self.identity:
                raise NoInverse(x)
            inv.append(y)
        return inv

    def _check_associative(self):
        t = self.table
        rng = range(self.n)
        if self.n <= FULL_ASSOC_LIMIT:
            triples = itertools.product(rng, rng, rng)
        else:
            # larger tables: exhaustive on a generating-set neighbourhood is
            # overkill; a fixed-seed sample of 20000 triples is checked instead
            r = random.Random(0)
            triples = ((r.randrange(self.n), r.randrange(self.n), r.randrange(self.n)) for _ in range(20000))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NotAssociative((a, b, c))

    def mul(self, a, b):
        return self.table[a][b]

    def order_of(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(a + 1, self.n))

    def order_profile(self) -> tuple:
        return tuple(sorted(Counter(self.order_of(x) for x in range(self.n)).items()))

    def fingerprint(self) -> dict:
        return {"order": self.n, "abelian": self.is_abelian(), "orders": dict(self.order_profile())}

    def __len__(self):
        return self.n


def mult_table(elements, op, key=lambda x: x, labels=None) -> MultTable:
    """Build and validate the table of ``op`` on ``elements``.

    ``key`` maps elements to hashable canonical keys used for equality.
    """
    elements = list(elements)
    if len(elements) > MAX_TABLE:
        raise NotInCatalog({"order": len(elements), "reason": "larger than 256"})
    index = {}
    for i, x in enumerate(elements):
        index.setdefault(key(x), i)
    table = []
    for i, a in enumerate(elements):
        row = []
        for j, b in enumerate(elements):
            k = index.get(key(op(a, b)))
            if k is None:
                raise NotClosed((i, j))
            row.append(k)
        table.append(row)
    return MultTable(table, labels=labels, elements=elements)


def closure(generators, op, key=lambda x: x, identity=None, limit=MAX_TABLE):
    """All products of the generators (the generated subgroup of a finite group)."""
    seen = {}
    frontier = []
    start = [identity] if identity is not None else []
    for g in start + list(generators):
        if key(g) not in seen:
            seen[key(g)] = g
            frontier.append(g)
    gens = list(generators)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if key(y) not in seen:
                    seen[key(y)] = y
                    nxt.append(y)
                    if len(seen) > limit:
                        raise NotInCatalog({"order": f"> {limit}", "reason": "closure too large"})
        frontier = nxt
    return list(seen.values())


def quotient_table(elements, op, key, normal) -> MultTable:
    """Table of G/N where ``normal`` lists the elements of N."""
    nkeys = {key(x) for x in normal}
    cosets = []
    coset_of = {}
    for x in elements:
        if key(x) in coset_of:
            continue
        members = {key(op(x, n)) for n in normal}
        idx = len(cosets)
        cosets.append(x)
        for m in members:
            coset_of[m] = idx
    if len(coset_of) != len(elements):
        raise StructureMismatch("normal subgroup cosets do not partition the group")
    _ = nkeys
    table = [[coset_of[key(op(a, b))] for b in cosets] for a in cosets]
    return MultTable(table, elements=cosets)


# ---------------------------------------------------------------------------
# catalog

def _cyclic(n):
    return mult_table(range(n), lambda a, b: (a + b) % n)


def _product(m, n):
    els = list(itertools.product(range(m), range(n)))
    return mult_table(els, lambda a, b: ((a[0] + b[0]) % m, (a[1] + b[1]) % n))


def _perm_group(gens, deg):
    ident = tuple(range(deg))
    op = lambda a, b: tuple(a[b[i]] for i in range(deg))
    return mult_table(sorted(closure(gens, op, identity=ident)), op)


def _quaternions():
    # (sign, unit) with unit in 1,i,j,k
    mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    els = [(s, u) for s in (1, -1) for u in "1ijk"]

    def op(a, b):
        s, u = mul[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return mult_table(els, op)


def _dicyclic12():
    els = list(itertools.product(range(3), range(4)))
    return mult_table(els, lambda a, b: ((a[0] + (b[0] if a[1] % 2 == 0 else -b[0])) % 3, (a[1] + b[1]) % 4))


def _sl23():
    mats = []
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if (a * d - b * c) % 3 == 1:
            mats.append((a, b, c, d))

    def op(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    return mult_table(mats, op)


CATALOG_BUILDERS = {
    "1": lambda: _cyclic(1),
    "Z/2": lambda: _cyclic(2),
    "Z/3": lambda: _cyclic(3),
    "Z/4": lambda: _cyclic(4),
    "Z/6": lambda: _cyclic(6),
    "(Z/2)^2": lambda: _product(2, 2),
    "(Z/3)^2": lambda: _product(3, 3),
    "Z/4 × Z/2": lambda: _product(4, 2),
    "S3": lambda: _perm_group([(1, 0, 2), (1, 2, 0)], 3),
    "D8": lambda: _perm_group([(1, 2, 3, 0), (3, 2, 1, 0)], 4),
    "Q8": _quaternions,
    "A4": lambda: _perm_group([(1, 2, 0, 3), (1, 0, 3, 2)], 4),
    "Z/3 ⋊ Z/4": _dicyclic12,
    "Q8 ⋊ Z/3": _sl23,
    "(Z/2)^2 ⋊ S3": lambda: _perm_group([(1, 0, 2, 3), (1, 2, 3, 0)], 4),
}

CATALOG = tuple(CATALOG_BUILDERS)


def reference_table(label: str) -> MultTable:
    return CATALOG_BUILDERS[label]()


_PROFILE_INDEX: dict | None = None


def _profiles():
    global _PROFILE_INDEX
    if _PROFILE_INDEX is None:
        idx = {}
        for label in CATALOG:
            t = reference_table(label)
            idx[(t.n, t.is_abelian(), t.order_profile())] = label
        _PROFILE_INDEX = idx
    return _PROFILE_INDEX


def recognize(t: MultTable) -> str:
    """Catalog label of the group, or NotInCatalog with the fingerprint."""
    key = (t.n, t.is_abelian(), t.order_profile())
    label = _profiles().get(key)
    if label is None:
        raise NotInCatalog(t.fingerprint())
    return label


def recognize_elements(elements, op, key=lambda x: x) -> str:
    return recognize(mult_table(elements, op, key))


def group_order(label: str) -> int:
    return reference_table(label).n


# ---------------------------------------------------------------------------
# scheme structures

CONNECTED_LENGTH = {
    "μ2": 2, "μ3": 3, "μ4": 4, "α2": 2, "α3": 3, "α4": 4, "M2": 4,
    "α2^2": 4, "α3^2": 9, "α4 ⋊ α4": 16, "M2 × α2": 8,
}


@dataclass(frozen=True)
class SchemeStructure:
    """connected factors, an étale catalog group, and how they combine."""

    connected: tuple = ()
    etale: str = "1"
    kind: str = "direct"  # direct | semidirect | unresolved-extension
    notes: tuple = field(default=(), compare=False)

    @property
    def connected_label(self) -> str:
        if not self.connected:
            return ""
        counts = Counter(self.connected)
        parts = []
        for f in dict.fromkeys(self.connected):
            n = counts[f]
            parts.append(f if n == 1 else f"{f}^{n}")
        return " × ".join(parts)

    @property
    def connected_length(self) -> int:
        out = 1
        for f in self.connected:
            out *= CONNECTED_LENGTH[f]
        return out

    @property
    def length(self) -> int:
        return self.connected_length * group_order(self.etale)

    @property
    def label(self) -> str:
        conn = self.connected_label
        if not conn:
            return self.etale
        if self.etale == "1":
            return conn
        if " " in conn:
            conn = f"({conn})"
        sym = "×" if self.kind == "direct" else "⋊"
        return f"{conn} {sym} {self.etale}"

    def __str__(self):
        return self.label


def etale_structure(label: str) -> SchemeStructure:
    return SchemeStructure((), label, "direct")


def assign_structure(connected, etale_table: MultTable | None, commutes: bool,
                     point_counts=None, kind: str | None = None) -> SchemeStructure:
    """Combine rule-derived connected factors with a recognized étale part.

    ``point_counts`` is an optional list of (expected_length, observed)
    pairs from the test-ring battery; any disagreement raises
    StructureMismatch.
    """
    etale = recognize(etale_table) if etale_table is not None else "1"
    if kind is None:
        kind = "direct" if (commutes or not connected or etale == "1") else "semidirect"
    s = SchemeStructure(tuple(connected), etale, kind)
    for expected, observed in point_counts or ():
        if expected != observed:
            raise StructureMismatch(f"{s.label}: expected {expected} points, counted {observed}")
    return s
