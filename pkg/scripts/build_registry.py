"""Instantiate every table row on concrete curves and write the registry.

Curves were picked by scanning small fields for the torsion each row needs;
this script chooses generators and α images satisfying the row's star and
dagger conditions and records them by value (points) and by index
(automorphisms, in autO_enum order).
"""

import json
import sys
from pathlib import Path

from biq.algebra.field import make_field
from biq.ellipt import WCurve, _rational_torsion, autO_enum, aut_order, subgroup_points

OUT = Path(__file__).resolve().parents[1] / "src" / "biq" / "data" / "registry.json"

N_TABLE = {
    13: {"Z/2": "1", "Z/3": "1", "Z/4": "1", "Z/6": "1", "(Z/2)^2": "Z/2", "(Z/3)^2": "S3", "Z/4 × Z/2": "Z/2"},
    3: {"Z/2": "1", "Z/3": "Z/2", "Z/4": "1", "Z/6": "Z/2", "(Z/2)^2": "Z/2", "Z/4 × Z/2": "Z/2"},
    2: {"Z/2": "1", "Z/3": "1", "Z/4": "Z/2", "Z/6": "1", "μ2 × Z/2": "1", "(Z/3)^2": "S3"},
}


def curve(p, k, a):
    return WCurve.from_ints(make_field(p, k), a)


def auts_of_order(c, n):
    return [(i, h) for i, h in enumerate(autO_enum(c)) if aut_order(h) == n]


def pts_of_order(c, n):
    return [P for P in _rational_torsion(c, n) if P is not None and c.order(P) == n]


def fixed_by_some(c, P, n):
    return any(h(P) == P for _, h in auts_of_order(c, n))


def pt(P):
    return None if P is None else list(P)


def bielliptic(key, p, k, G, variant, Ea, Ej, Ca, Cj, expect, E_mark=None, C_mark=None, conn=None):
    """Build one bielliptic row; generator choices follow the group and marks."""
    E, C = curve(p, k, Ea), curve(p, k, Ca)
    alpha = []
    gens = []
    if G in ("Z/2", "μ2 × Z/2"):
        cands = pts_of_order(E, 2)
        if E_mark == "star":
            cands = [P for P in cands if fixed_by_some(E, P, 4)]
        elif Ej == 1728:
            cands = [P for P in cands if not fixed_by_some(E, P, 4)]
        gens = [cands[0]]
        alpha = [{"aut": auts_of_order(C, 2)[0][0], "translation": None}]
    elif G == "(Z/2)^2":
        two = pts_of_order(E, 2)
        if E_mark == "dagger":
            P2 = next(P for P in two if fixed_by_some(E, P, 4))
        else:
            P2 = next(P for P in two if not (p > 3 and fixed_by_some(E, P, 4)))
        P1 = next(P for P in two if P != P2)
        gens = [P1, P2]
        ctwo = pts_of_order(C, 2)
        if C_mark == "star":
            c = next(P for P in ctwo if fixed_by_some(C, P, 4))
        else:
            # a 2-torsion point with rational halves, not the special one
            four = pts_of_order(C, 4)
            halves = {C.add(Q, Q) for Q in four}
            c = next(P for P in ctwo if P in halves and not (p > 3 and fixed_by_some(C, P, 4)))
        alpha = [{"aut": auts_of_order(C, 2)[0][0], "translation": None},
                 {"aut": 0, "translation": pt(c)}]
    elif G == "Z/3":
        cands = pts_of_order(E, 3)
        if E_mark == "star":
            cands = [P for P in cands if fixed_by_some(E, P, 3)]
        gens = [cands[0]]
        alpha = [{"aut": auts_of_order(C, 3)[0][0], "translation": None}]
    elif G == "(Z/3)^2":
        i3, rho = auts_of_order(C, 3)[0]
        three = pts_of_order(E, 3)
        if E_mark == "dagger" or (p == 2 and Ej == 0):
            rhoE = auts_of_order(E, 3)[0][1]
            P2 = next(P for P in three if rhoE(P) == P)
            P1 = next(P for P in three if rhoE(P) != P)
        else:
            P1 = three[0]
            P2 = next(P for P in three if P not in subgroup_points(E, [P1]))
        gens = [P1, P2]
        c = next(P for P in pts_of_order(C, 3) if rho(P) == P)
        alpha = [{"aut": i3, "translation": None}, {"aut": 0, "translation": pt(c)}]
    elif G == "Z/4":
        gens = [pts_of_order(E, 4)[0]]
        alpha = [{"aut": auts_of_order(C, 4)[0][0], "translation": None}]
    elif G == "Z/4 × Z/2":
        P1 = pts_of_order(E, 4)[0]
        P2 = next(P for P in pts_of_order(E, 2) if P not in subgroup_points(E, [P1]))
        gens = [P1, P2]
        i4, h = auts_of_order(C, 4)[0]
        c = next(P for P in pts_of_order(C, 2) if h(P) == P)
        alpha = [{"aut": i4, "translation": None}, {"aut": 0, "translation": pt(c)}]
    elif G == "Z/6":
        gens = [pts_of_order(E, 6)[0]]
        alpha = [{"aut": auts_of_order(C, 6)[0][0], "translation": None}]
    else:
        raise SystemExit(f"no recipe for {G}")
    cE, cC, M = expect
    return {
        "key": key, "table": 1, "p": p, "k": k, "G": G, "variant": variant,
        "E": {"a": list(Ea), "j": Ej, "gens": [pt(P) for P in gens], "connected": conn, "mark": E_mark},
        "C": {"kind": "elliptic", "a": list(Ca), "j": Cj, "alpha": alpha, "connected": conn, "mark": C_mark},
        "expected": {"cE": cE, "cC": cC, "M": M, "N": N_TABLE[p if p < 5 else 13][G]},
    }


def quasi(key, table, p, k, G, variant, Ea, Ej, gens_rule, conn, fam, lam, expect):
    E = curve(p, k, Ea)
    gens = []
    if gens_rule:
        gens = [pts_of_order(E, gens_rule)[0]]
    cE, cC, M = expect
    return {
        "key": key, "table": table, "p": p, "k": k, "G": G, "variant": variant,
        "E": {"a": list(Ea), "j": Ej, "gens": [pt(P) for P in gens], "connected": conn, "mark": None},
        "C": {"kind": "family", "family": fam, "lam": lam},
        "expected": {"cE": cE, "cC": cC, "M": M},
    }


# curves by field
P13_GEN2 = (0, 0, 0, 2, 1)      # j = 1, Z/4 rational
P13_GEN22 = (0, 0, 0, 2, 6)     # j = 11, Z/4 × Z/2 rational
P13_GEN3 = (0, 0, 0, 2, 2)      # j = 2, a 3-torsion point
P13_GEN6 = (0, 0, 0, 2, 5)      # j = 4, a 6-torsion point
P13_1728 = (0, 0, 0, 1, 0)
P13_1728H = (0, 0, 0, 4, 0)     # j = 1728 with halves of the special point
P13_1728_E3 = (0, 0, 0, 7, 0)   # j = 1728 with E[3] rational
P13_0 = (0, 0, 0, 0, 1)         # E[2] rational, ρ-fixed points rational
P13_0_E3 = (0, 0, 0, 0, 3)      # E[3] rational
P3_ORD = (0, 1, 0, 0, 1)
P3_SS = (0, 0, 0, -1, 0)
P2_ORD = (1, 0, 0, 0, 1)
P2_SS = (0, 0, 1, 0, 0)
P2_ORD16 = (1, 0, 0, 0, 6)      # over F_16: a 6-torsion point
P2_ORD64 = (1, 0, 0, 0, 15)     # over F_64: E[3] rational

ROWS = []
B = ROWS.append
# characteristic ≠ 2, 3 instantiated at p = 13
for ev, (Ea, Ej, mark, cE) in {"a": (P13_GEN22, "any", None, "Z/2"), "b": (P13_1728, 1728, "star", "Z/4")}.items():
    for cv, (Ca, Cj, cC) in {"i": (P13_GEN22, "generic", "(Z/2)^2"), "ii": (P13_1728, 1728, "D8"),
                             "iii": (P13_0, 0, "A4")}.items():
        B(bielliptic(f"T1.p13.Z2.{ev}.{cv}", 13, 1, "Z/2", f"{ev}.{cv}", Ea, Ej, Ca, Cj, (cE, cC, "1"), E_mark=mark))
for ev, (Ea, Ej, mark, M) in {"a": (P13_GEN22, "any", None, "1"), "b": (P13_1728, 1728, "dagger", "Z/2")}.items():
    for cv, (Ca, Cj, cmark, cC) in {"i": (P13_GEN22, "any", None, "Z/2"), "ii": (P13_1728H, 1728, "star", "(Z/2)^2")}.items():
        B(bielliptic(f"T1.p13.Z2xZ2.{ev}.{cv}", 13, 1, "(Z/2)^2", f"{ev}.{cv}", Ea, Ej, Ca, Cj, ("Z/2", cC, M),
                     E_mark=mark, C_mark=cmark))
B(bielliptic("T1.p13.Z3.a", 13, 1, "Z/3", "a", P13_GEN3, "any", P13_0, 0, ("1", "S3", "1")))
B(bielliptic("T1.p13.Z3.b", 13, 1, "Z/3", "b", P13_0, 0, P13_0, 0, ("Z/3", "S3", "1"), E_mark="star"))
B(bielliptic("T1.p13.Z3xZ3.a", 13, 1, "(Z/3)^2", "a", P13_1728_E3, "any", P13_0_E3, 0, ("1", "1", "1")))
B(bielliptic("T1.p13.Z3xZ3.b", 13, 1, "(Z/3)^2", "b", P13_0_E3, 0, P13_0_E3, 0, ("1", "1", "Z/3"), E_mark="dagger"))
B(bielliptic("T1.p13.Z4", 13, 1, "Z/4", "", P13_GEN2, "any", P13_1728, 1728, ("1", "Z/2", "1")))
B(bielliptic("T1.p13.Z4xZ2", 13, 1, "Z/4 × Z/2", "", P13_GEN22, "any", P13_1728, 1728, ("1", "1", "1")))
B(bielliptic("T1.p13.Z6", 13, 1, "Z/6", "", P13_GEN6, "any", P13_0, 0, ("1", "1", "1")))
# characteristic 3
for ev, (Ea, Ej, cE) in {"a": (P3_ORD, "nonzero", "Z/2"), "b": (P3_SS, 0, "Z/4")}.items():
    for cv, (Ca, Cj, cC) in {"i": (P3_ORD, "nonzero", "(Z/2)^2"), "ii": (P3_SS, 0, "(Z/2)^2 ⋊ S3")}.items():
        B(bielliptic(f"T1.p3.Z2.{ev}.{cv}", 3, 2, "Z/2", f"{ev}.{cv}", Ea, Ej, Ca, Cj, (cE, cC, "1")))
B(bielliptic("T1.p3.Z2xZ2.a.i", 3, 3, "(Z/2)^2", "a.i", (0, 1, 0, 0, 18), "nonzero", (0, 1, 0, 0, 18), "nonzero",
             ("Z/2", "Z/2", "1")))
B(bielliptic("T1.p3.Z2xZ2.a.ii", 3, 2, "(Z/2)^2", "a.ii", P3_ORD, "nonzero", P3_SS, 0, ("Z/2", "(Z/2)^2", "1")))
B(bielliptic("T1.p3.Z2xZ2.b.i", 3, 4, "(Z/2)^2", "b.i", P3_SS, 0, P3_ORD, "nonzero", ("Z/2", "Z/2", "Z/2")))
B(bielliptic("T1.p3.Z2xZ2.b.ii", 3, 2, "(Z/2)^2", "b.ii", P3_SS, 0, P3_SS, 0, ("Z/2", "(Z/2)^2", "Z/2")))
B(bielliptic("T1.p3.Z3", 3, 2, "Z/3", "", P3_ORD, "nonzero", P3_SS, 0, ("1", "α3 ⋊ Z/2", "Z/2")))
B(bielliptic("T1.p3.Z6", 3, 2, "Z/6", "", P3_ORD, "nonzero", P3_SS, 0, ("1", "1", "Z/2")))
B(bielliptic("T1.p3.Z4", 3, 4, "Z/4", "", P3_ORD, "nonzero", P3_SS, 0, ("1", "Z/2", "1")))
B(bielliptic("T1.p3.Z4xZ2", 3, 4, "Z/4 × Z/2", "", P3_ORD, "nonzero", P3_SS, 0, ("1", "1", "1")))
# characteristic 2
B(bielliptic("T1.p2.Z2.i", 2, 2, "Z/2", "i", P2_ORD, "nonzero", P2_ORD, "nonzero", ("Z/2", "μ2 × Z/2", "1")))
B(bielliptic("T1.p2.Z2.ii", 2, 2, "Z/2", "ii", P2_ORD, "nonzero", P2_SS, 0, ("Z/2", "M2 ⋊ A4", "1")))
B(bielliptic("T1.p2.mu2xZ2", 2, 2, "μ2 × Z/2", "", P2_ORD, "nonzero", P2_ORD, "nonzero", ("Z/2", "Z/2", "1"),
             conn="kerF"))
B(bielliptic("T1.p2.Z3.a", 2, 4, "Z/3", "a", P2_ORD16, "nonzero", P2_SS, 0, ("1", "S3", "1")))
B(bielliptic("T1.p2.Z3.b", 2, 2, "Z/3", "b", P2_SS, 0, P2_SS, 0, ("Z/3", "S3", "1")))
B(bielliptic("T1.p2.Z3xZ3.a", 2, 6, "(Z/3)^2", "a", P2_ORD64, "nonzero", P2_SS, 0, ("1", "1", "1")))
B(bielliptic("T1.p2.Z3xZ3.b", 2, 2, "(Z/3)^2", "b", P2_SS, 0, P2_SS, 0, ("1", "1", "Z/3")))
B(bielliptic("T1.p2.Z4", 2, 2, "Z/4", "", P2_ORD, "nonzero", P2_SS, 0, ("1", "α2", "Z/2")))
B(bielliptic("T1.p2.Z6", 2, 4, "Z/6", "", P2_ORD16, "nonzero", P2_SS, 0, ("1", "1", "1")))
# quasi-bielliptic, characteristic 3
B(quasi("T2.mu3", 2, 3, 1, "μ3", "", (0, 1, 0, 0, 2), "nonzero", None, "kerF", "p3.a", None, ("1", "S3", "1")))
B(quasi("T2.mu3xZ2", 2, 3, 1, "μ3 × Z/2", "", P3_ORD, "nonzero", 2, "kerF", "p3.b", None, ("1", "1", "1")))
B(quasi("T2.mu3xZ3", 2, 3, 1, "μ3 × Z/3", "", P3_ORD, "nonzero", 3, "kerF", "p3.c", None, ("1", "1", "1")))
B(quasi("T2.alpha3", 2, 3, 2, "α3", "", P3_SS, 0, None, "kerF", "p3.d", None, ("Z/3", "α3 ⋊ Z/2", "Z/4")))
B(quasi("T2.alpha3xZ2", 2, 3, 2, "α3 × Z/2", "", P3_SS, 0, 2, "kerF", "p3.e", None, ("1", "1", "Z/4")))
# quasi-bielliptic, characteristic 2
B(quasi("T3.mu2.i", 3, 2, 3, "μ2", "i", P2_ORD, "nonzero", None, "kerF", "p2.a", 1, ("Z/2", "(Z/2)^2", "1")))
B(quasi("T3.mu2.ii", 3, 2, 2, "μ2", "ii", P2_ORD, "nonzero", None, "kerF", "p2.a", 0, ("Z/2", "A4", "1")))
B(quasi("T3.mu2xZ3", 3, 2, 4, "μ2 × Z/3", "", P2_ORD16, "nonzero", 3, "kerF", "p2.b", 0, ("1", "1", "1")))
B(quasi("T3.mu2xZ2.i", 3, 2, 3, "μ2 × Z/2", "i", P2_ORD, "nonzero", 2, "kerF", "p2.c", 1, ("Z/2", "Z/2", "1")))
B(quasi("T3.mu2xZ2.ii", 3, 2, 2, "μ2 × Z/2", "ii", P2_ORD, "nonzero", 2, "kerF", "p2.c", 0, ("Z/2", "Z/2", "1")))
B(quasi("T3.mu4", 3, 2, 1, "μ4", "", P2_ORD, "nonzero", None, "kerF2", "p2.d", None, ("1", "Z/2", "1")))
B(quasi("T3.mu4xZ2", 3, 2, 1, "μ4 × Z/2", "", P2_ORD, "nonzero", 2, "kerF2", "p2.e", None, ("1", "1", "1")))
B(quasi("T3.alpha2.i", 3, 2, 2, "α2", "i", P2_SS, 0, None, "kerF", "p2.f", 1, ("Q8", "α2^2 ⋊ Z/2", "1")))
B(quasi("T3.alpha2.ii", 3, 2, 6, "α2", "ii", P2_SS, 0, None, "kerF", "p2.f", 0, ("Q8", "(α4 ⋊ α4) ⋊ Z/3", "Z/3")))
B(quasi("T3.alpha2xZ3", 3, 2, 6, "α2 × Z/3", "", P2_SS, 0, 3, "kerF", "p2.g", 0, ("1", "1", "Z/3")))
B(quasi("T3.M2", 3, 2, 4, "M2", "", P2_SS, 0, None, "M2", "p2.h", 1, ("Z/2", "α2 × Z/2", "(Z/2)^2")))

AUT_TABLES = [
    {"key": "T4.generic", "p": 13, "k": 1, "a": list(P13_GEN22), "aut": "Z/2",
     "subgroups": [{"H": "Z/2", "fixed": "(Z/2)^2"}]},
    {"key": "T4.1728", "p": 13, "k": 1, "a": list(P13_1728), "aut": "Z/4",
     "subgroups": [{"H": "Z/2", "fixed": "(Z/2)^2"}, {"H": "Z/4", "fixed": "Z/2"}]},
    {"key": "T4.0", "p": 13, "k": 1, "a": list(P13_0), "aut": "Z/6",
     "subgroups": [{"H": "Z/2", "fixed": "(Z/2)^2"}, {"H": "Z/3", "fixed": "Z/3"}, {"H": "Z/6", "fixed": "1"}]},
    {"key": "T6.nonzero", "p": 3, "k": 2, "a": list(P3_ORD), "aut": "Z/2",
     "subgroups": [{"H": "Z/2", "fixed": "(Z/2)^2", "C": "Z/2", "N": "Z/2"}]},
    {"key": "T6.0", "p": 3, "k": 2, "a": list(P3_SS), "aut": "Z/3 ⋊ Z/4",
     "subgroups": [{"H": "Z/2", "fixed": "(Z/2)^2", "C": "Z/3 ⋊ Z/4", "N": "Z/3 ⋊ Z/4"},
                   {"H": "Z/3", "fixed": "α3", "C": "Z/6", "N": "Z/3 ⋊ Z/4"},
                   {"H": "Z/4", "fixed": "Z/2", "C": "Z/4", "N": "Z/4"},
                   {"H": "Z/6", "fixed": "1", "C": "Z/6", "N": "Z/3 ⋊ Z/4"}]},
    {"key": "T8.nonzero", "p": 2, "k": 2, "a": list(P2_ORD), "aut": "Z/2",
     "subgroups": [{"H": "Z/2", "fixed": "μ2 × Z/2", "C": "Z/2", "N": "Z/2"}]},
    {"key": "T8.0", "p": 2, "k": 2, "a": list(P2_SS), "aut": "Q8 ⋊ Z/3",
     "subgroups": [{"H": "Z/2", "fixed": "M2", "C": "Q8 ⋊ Z/3", "N": "Q8 ⋊ Z/3"},
                   {"H": "Z/3", "fixed": "Z/3", "C": "Z/6", "N": "Z/6"},
                   {"H": "Z/4", "fixed": "α2", "C": "Z/4", "N": "Q8"},
                   {"H": "Z/6", "fixed": "1", "C": "Z/6", "N": "Z/6"}]},
]

if __name__ == "__main__":
    doc = {"version": 1,
           "note": "characteristic ≠ 2, 3 rows are instantiated at p = 13; "
                   "field elements are integer codes in F_(p^k) with the package's fixed modulus",
           "rows": ROWS, "aut_tables": AUT_TABLES}
    text = json.dumps(doc, ensure_ascii=False, indent=1)
    (Path(sys.argv[1]) if len(sys.argv) > 1 else OUT).write_text(text + "\n")
    print(len(ROWS), "rows")
