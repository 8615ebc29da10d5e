"""The case registry and the orchestration of the three table columns.

Each registry row fixes a characteristic, a field F_(p^k), the curve E with
the étale generators of G and its infinitesimal factor, and the C side:
either an elliptic curve with the images of the generators under α, or one
of the action families on the cuspidal curve.  run_case computes the triple
(C_E/E, C_C/α(G), M), plus N for elliptic C, and compares it with the
expected labels stored in the row.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from biq import cuspaut, ellipt, mgroup
from biq.algebra.field import embed, make_field
from biq.errors import BiqError, CrosscheckFailed, InvariantViolation, SchemaError
from biq.grouprec import recognize_elements

COLUMNS = ("cE", "cC", "M")
CLOSURE_SAMPLE = 200

# --------------------------------------------------------------------------
# loading


def default_registry_path() -> Path:
    return Path(str(resources.files("biq") / "data" / "registry.json"))


_ROW_KEYS = {"key": str, "table": int, "p": int, "k": int, "G": str, "variant": str,
             "E": dict, "C": dict, "expected": dict}


def _check_schema(doc):
    if not isinstance(doc, dict) or not isinstance(doc.get("rows"), list):
        raise SchemaError("registry must be an object with a 'rows' list")
    seen = set()
    for i, row in enumerate(doc["rows"]):
        where = row.get("key", f"#{i}") if isinstance(row, dict) else f"#{i}"
        if not isinstance(row, dict):
            raise SchemaError(f"row {where} is not an object")
        for k, t in _ROW_KEYS.items():
            if not isinstance(row.get(k), t):
                raise SchemaError(f"row {where}: field {k!r} missing or not {t.__name__}")
        if row["key"] in seen:
            raise SchemaError(f"duplicate row key {row['key']}")
        seen.add(row["key"])
        if row["table"] not in (1, 2, 3):
            raise SchemaError(f"row {where}: table must be 1, 2 or 3")
        E, C = row["E"], row["C"]
        for k in ("a", "gens"):
            if not isinstance(E.get(k), list):
                raise SchemaError(f"row {where}: E.{k} must be a list")
        if C.get("kind") == "elliptic":
            if not isinstance(C.get("a"), list) or not isinstance(C.get("alpha"), list):
                raise SchemaError(f"row {where}: elliptic C needs 'a' and 'alpha'")
        elif C.get("kind") == "family":
            if not isinstance(C.get("family"), str):
                raise SchemaError(f"row {where}: family C needs 'family'")
        else:
            raise SchemaError(f"row {where}: C.kind must be 'elliptic' or 'family'")
        for col in COLUMNS:
            if not isinstance(row["expected"].get(col), str):
                raise SchemaError(f"row {where}: expected.{col} must be a label")
    for t in doc.get("aut_tables", []):
        for k in ("key", "p", "k", "a", "aut", "subgroups"):
            if k not in t:
                raise SchemaError(f"aut table {t.get('key', '?')}: field {k!r} missing")


@dataclass
class CaseRow:
    key: str
    table: int
    p: int
    k: int
    G: str
    variant: str
    E: dict
    C: dict
    expected: dict
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def quasi(self) -> bool:
        return self.C["kind"] == "family"

    @property
    def field_label(self) -> str:
        return f"F{self.p ** self.k}"


def registry_load(path=None, validate: bool = True) -> list[CaseRow]:
    path = Path(path) if path else default_registry_path()
    text = path.read_text()
    if not text.strip():
        raise SchemaError(f"{path} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    _check_schema(doc)
    rows = [CaseRow(**{k: r[k] for k in _ROW_KEYS}, raw=r) for r in doc["rows"]]
    if validate:
        for row in rows:
            validate_row(row)
    return rows


def registry_aut_tables(path=None) -> list[dict]:
    path = Path(path) if path else default_registry_path()
    doc = json.loads(path.read_text())
    _check_schema(doc)
    return doc.get("aut_tables", [])


# --------------------------------------------------------------------------
# instantiation


@dataclass
class Instance:
    row: CaseRow
    f: object
    E: ellipt.WCurve
    sub: ellipt.IsoSub
    setup: mgroup.Setup
    C: ellipt.WCurve | None = None
    act: ellipt.EllipticAction | None = None
    fam: cuspaut.ActionFamily | None = None


def _point(P, src, dst):
    if P is None:
        return None
    return tuple(embed(int(v), src, dst) for v in P)


def _curve(a, base, dst):
    c = ellipt.WCurve.from_ints(base, a)
    return c.base_change(dst)


def _aut(c_base, index, c_dst):
    auts = ellipt.autO_enum(c_base)
    if not 0 <= index < len(auts):
        raise BiqError(f"automorphism index {index} out of range")
    h = auts[index]
    src, dst = c_base.f, c_dst.f
    return ellipt.AutEO(c_dst, *(embed(v, src, dst) for v in h.key()))


def instantiate(row: CaseRow, degree: int = 1) -> Instance:
    """Build curves, G and α over F_(p^(k·degree))."""
    base = make_field(row.p, row.k)
    f = make_field(row.p, row.k * degree) if degree > 1 else base
    E = _curve(row.E["a"], base, f)
    gens = tuple(_point(P, base, f) for P in row.E["gens"])
    sub = ellipt.IsoSub(E, gens, row.E.get("connected"))
    if row.quasi:
        fam = cuspaut.family(row.C["family"], row.C.get("lam"))
        return Instance(row, f, E, sub, mgroup.Setup(sub, fam=fam), fam=fam)
    C0 = ellipt.WCurve.from_ints(base, row.C["a"])
    C = C0.base_change(f)
    images = []
    for a in row.C["alpha"]:
        g = _aut(C0, a["aut"], C)
        images.append(ellipt.AffineAut(C, _point(a.get("translation"), base, f), g))
    act = ellipt.EllipticAction(C, tuple(images), row.C.get("connected"))
    return Instance(row, f, E, sub, mgroup.Setup(sub, act=act), C=C, act=act)


def _j_ok(c: ellipt.WCurve, want) -> bool:
    j = c.j
    f = c.f
    if want in ("any", None):
        return True
    if want == "nonzero":
        return j != 0
    if want == "generic":
        return j not in (0, f.from_int(1728))
    return j == f.from_int(int(want))


def _etale_label(G: str) -> str:
    parts = [x.strip() for x in G.split("×")]
    et = [x for x in parts if not x.startswith(("μ", "α", "M2"))]
    return " × ".join(et) if et else "1"


def validate_row(row: CaseRow):
    """Check the declared shape, the j-invariants, faithfulness and star/dagger conditions."""
    try:
        inst = instantiate(row)
    except BiqError as exc:
        raise InvariantViolation(row.key, f"instantiation failed: {exc}") from exc
    E, sub = inst.E, inst.sub
    if not _j_ok(E, row.E.get("j")):
        raise InvariantViolation(row.key, f"j(E) is not {row.E.get('j')}")
    want = _etale_label(row.G)
    got = recognize_elements(sub.points, E.add) if len(sub.points) > 1 else "1"
    if got != want:
        raise InvariantViolation(row.key, f"étale generators give {got}, expected {want}")
    conn = row.E.get("connected")
    if conn == "kerF" and row.G.startswith("μ") != E.ordinary:
        raise InvariantViolation(row.key, "Frobenius kernel type does not match the curve")
    if row.quasi:
        fam = inst.fam
        if fam.spec.group != row.G:
            raise InvariantViolation(row.key, f"family {fam.key} acts by {fam.spec.group}, not {row.G}")
        return
    C, act = inst.C, inst.act
    if not _j_ok(C, row.C.get("j")):
        raise InvariantViolation(row.key, f"j(C) is not {row.C.get('j')}")
    if all(x.is_translation() for x in act.gens):
        raise InvariantViolation(row.key, "α(G) consists of translations")
    mark = row.E.get("mark")
    autsE = ellipt.autO_enum(E)
    if mark == "star":
        n = 4 if "Z/2" in row.G else 3
        hs = [h for h in autsE if ellipt.aut_order(h) == n]
        if not hs or not all(any(h(P) == P for h in hs) for P in sub.gens):
            raise InvariantViolation(row.key, f"G is not the subgroup fixed by an order-{n} automorphism")
    if mark == "dagger":
        n = 4 if "Z/2" in row.G else 3
        hs = [h for h in autsE if ellipt.aut_order(h) == n]
        fixed = {P for h in hs for P in sub.points if P is not None and h(P) == P}
        if not fixed or not all(inst.setup.alpha(P).is_translation() for P in fixed):
            raise InvariantViolation(row.key, "fixed points of h_E do not map to translations")
    if row.C.get("mark") == "star":
        hs = [h for h in ellipt.autO_enum(C) if ellipt.aut_order(h) == 4]
        T = [s for s in act.translations if s is not None]
        if not T or not all(any(h(s) == s for h in hs) for s in T):
            raise InvariantViolation(row.key, "translation part of α(G) is not the special subgroup")


# --------------------------------------------------------------------------
# running


@dataclass
class RowResult:
    key: str
    computed: dict
    expected: dict
    diff: dict
    witnesses: list
    aut_x: dict
    structures: dict = field(repr=False, default_factory=dict)
    ms: int = 0
    crosscheck: bool | None = None

    @property
    def match(self) -> bool:
        return not self.diff

    def to_json(self) -> dict:
        out = {"rowKey": self.key, "computed": self.computed, "expected": self.expected,
               "match": self.match, "witnesses": self.witnesses, "autX": self.aut_x, "ms": self.ms}
        if self.diff:
            out["diff"] = {k: {"expected": e, "computed": c} for k, (e, c) in self.diff.items()}
        if self.crosscheck is not None:
            out["crosscheck"] = self.crosscheck
        return out


def compute_columns(inst: Instance) -> tuple[dict, dict, mgroup.MGroupResult]:
    sub = inst.sub
    cE = ellipt.e_centralizer_label(sub)
    structures = {}
    if inst.fam is not None:
        sC = cuspaut.centralizer_structure(inst.fam, inst.f)
    else:
        sC, _ = ellipt.ell_aut_centralizer(inst.act)
    structures["cC"] = sC
    M = mgroup.compute_M(inst.setup)
    computed = {"cE": cE, "cC": sC.label, "M": M.label}
    if inst.act is not None:
        computed["N"] = ellipt.n_group(inst.act)
    return computed, structures, M


def compare(computed: dict, expected: dict) -> dict:
    """Columns whose labels differ, as {column: (expected, computed)}."""
    return {k: (expected[k], computed.get(k)) for k in expected if computed.get(k) != expected[k]}


def run_case(row: CaseRow, degree: int = 1, crosscheck: bool = False) -> RowResult:
    t0 = time.perf_counter()
    inst = instantiate(row, degree)
    computed, structures, M = compute_columns(inst)
    diff = compare(computed, row.expected)
    aut_x = {
        "sequence": f"1 → (C_E × C_C)/G → Aut_X → {computed['M']} → 1",
        "C_E/E": computed["cE"],
        "Aut_X/E' ≅ C_Aut_C(α(G)), modulo α(G)": computed["cC"],
    }
    witnesses = [w.describe() for w in M.witnesses]
    res = RowResult(row.key, computed, dict(row.expected), diff, witnesses, aut_x, structures)
    if crosscheck:
        res.crosscheck = crosscheck_normalizer_quotient(row, inst=inst, result=res)
    res.ms = int((time.perf_counter() - t0) * 1000)
    return res


def crosscheck_normalizer_quotient(row: CaseRow, inst: Instance | None = None, result: RowResult | None = None,
                                   seed: int = 0) -> bool:
    """Pairs of normalizing k-points with equal actions on G, counted and composed.

    Their number must be |C_E(k)| · |C_C(k)| · |M|, and the set is closed
    under composition (checked on a seeded sample of products when large).
    """
    inst = inst or instantiate(row)
    setup = inst.setup
    if result is None:
        M = mgroup.compute_M(setup)
        m = M.order
    else:
        m = len(result.witnesses)
    pairs = mgroup.matched_pairs(setup)
    _, CE = mgroup.e_sides(setup)
    _, CC = mgroup.c_sides(setup)
    want = len(CE) * len(CC) * m
    if len(pairs) != want:
        raise CrosscheckFailed(f"{row.key}: {len(pairs)} matched pairs, expected {len(CE)}·{len(CC)}·{m}",
                               witness={"pairs": len(pairs)})
    if setup.quasi:
        op = lambda x, y: cuspaut.compose(x, y, validate=False)
    else:
        op = ellipt.compose_affine
    keys = {(a.key(), b.key()) for a, b in pairs}
    idx = [(i, j) for i in range(len(pairs)) for j in range(len(pairs))]
    if len(idx) > CLOSURE_SAMPLE:
        idx = random.Random(seed).sample(idx, CLOSURE_SAMPLE)
    for i, j in idx:
        (a1, b1), (a2, b2) = pairs[i], pairs[j]
        prod = (ellipt.compose_aut(a1, a2).key(), op(b1, b2).key())
        if prod not in keys:
            raise CrosscheckFailed(f"{row.key}: matched pairs are not closed", witness=(pairs[i], pairs[j]))
    return True


def stability(row: CaseRow, degrees=(2, 3)) -> dict:
    """Labels over the extensions of the registry field; {degree: computed}."""
    out = {}
    for d in degrees:
        inst = instantiate(row, d)
        computed, _, _ = compute_columns(inst)
        out[d] = computed
    return out


@dataclass
class Report:
    results: list
    total_ms: int = 0

    @property
    def mismatches(self) -> list:
        return [r for r in self.results if not r.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self, timing: bool = True) -> dict:
        rows = []
        for r in self.results:
            d = r.to_json()
            if not timing:
                d.pop("ms")
            rows.append(d)
        doc = {"rows": rows, "mismatches": len(self.mismatches)}
        if timing:
            doc["ms"] = self.total_ms
        return doc

    def markdown(self) -> str:
        lines = []
        for table in (1, 2, 3):
            rs = [r for r in self.results if r.key.startswith(f"T{table}.")]
            if not rs:
                continue
            lines.append(f"### Table {table}")
            lines.append("")
            lines.append("| row | C_E/E | C_C/α(G) | M | N | match |")
            lines.append("|---|---|---|---|---|---|")
            for r in rs:
                c = r.computed
                lines.append(f"| {r.key} | {c['cE']} | {c['cC']} | {c['M']} | {c.get('N', '')} | "
                             f"{'yes' if r.match else 'NO'} |")
            lines.append("")
        return "\n".join(lines)


def run_all(rows, table: int | None = None, crosscheck: bool = False) -> Report:
    t0 = time.perf_counter()
    results = [run_case(r, crosscheck=crosscheck) for r in rows if table is None or r.table == table]
    results.sort(key=lambda r: r.key)
    return Report(results, int((time.perf_counter() - t0) * 1000))


# --------------------------------------------------------------------------
# Aut(D, O) tables


def aut_table_check(entry: dict) -> dict:
    """Recompute |Aut(D, O)|, its label, and for each cyclic subgroup H the fixed
    locus, centralizer and normalizer; returns {field: (expected, computed)} mismatches."""
    from biq.grouprec import closure
    f = make_field(entry["p"], entry["k"])
    c = ellipt.WCurve.from_ints(f, entry["a"])
    auts, table = ellipt.aut_group(c)
    op, key = ellipt.compose_aut, (lambda h: h.key())
    diff = {}
    got = recognize_elements(auts, op, key)
    if got != entry["aut"]:
        diff["aut"] = (entry["aut"], got)
    for sg in entry["subgroups"]:
        n = {"Z/2": 2, "Z/3": 3, "Z/4": 4, "Z/6": 6}[sg["H"]]
        for h in (x for x in auts if ellipt.aut_order(x) == n):
            H = closure([h], op, key=key)
            hk = {key(x) for x in H}
            fl = ellipt.fixed_locus(h).label
            if fl != sg["fixed"]:
                diff[f"{sg['H']} fixed"] = (sg["fixed"], fl)
            if "C" in sg:
                C = [g for g in auts if key(op(g, h)) == key(op(h, g))]
                lab = recognize_elements(C, op, key)
                if lab != sg["C"]:
                    diff[f"{sg['H']} C"] = (sg["C"], lab)
            if "N" in sg:
                N = [g for g in auts if key(op(op(g, h), ellipt.invert_aut(g))) in hk]
                lab = recognize_elements(N, op, key)
                if lab != sg["N"]:
                    diff[f"{sg['H']} N"] = (sg["N"], lab)
    return diff
