"""Command-line entry point: ``biq <subcommand> ...``.

Exit codes: 0 success, 1 a verification or table mismatch, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from biq import cuspaut, ellipt, mgroup, tables
from biq.algebra.field import field_of_order
from biq.algebra.ring import parse_ring_spec
from biq.errors import (
    BiqError, CountMismatch, NotInCatalog, CrosscheckFailed, EnumMismatch, InvariantViolation, LiftingAssumptionViolated,
    StructureMismatch, SymbolicFailure,
)

# failures of a check, as opposed to bad input
CHECK_FAILURES = (EnumMismatch, SymbolicFailure, StructureMismatch, CrosscheckFailed, InvariantViolation,
                  LiftingAssumptionViolated, CountMismatch)

CASE_LETTERS = "abcdefgh"


def display(label: str) -> str:
    """Catalog labels in print form: Z/n becomes Z/nZ."""
    return re.sub(r"Z/(\d+)", r"Z/\1Z", label)


def parse_curve(spec: str) -> ellipt.WCurve:
    """``F<q>:a1,a2,a3,a4,a6`` with integer field-element literals."""
    m = re.fullmatch(r"F(\d+):(-?\d+(?:,-?\d+){4})", spec.replace(" ", ""))
    if not m:
        raise BiqError(f"bad curve spec {spec!r}; expected F<q>:a1,a2,a3,a4,a6")
    f = field_of_order(int(m.group(1)))
    coeffs = [int(x) for x in m.group(2).split(",")]
    if any(c >= f.q for c in coeffs):
        raise BiqError(f"coefficient out of range for F{f.q}")
    return ellipt.WCurve.from_ints(f, coeffs)


def parse_lambda(raw: str | None):
    if raw is None or raw == "symbolic":
        return raw
    try:
        return int(raw)
    except ValueError:
        raise BiqError(f"λ must be an integer field-element literal or 'symbolic', got {raw!r}") from None


def pick_aut(c: ellipt.WCurve, index: int):
    auts = ellipt.autO_enum(c)
    if not 0 <= index < len(auts):
        raise BiqError(f"aut index {index} out of range; the curve has {len(auts)} automorphisms fixing O")
    return auts[index]


def load_rows(args):
    return tables.registry_load(args.registry)


# --------------------------------------------------------------------------
# subcommands


def cmd_verify_formulas(args) -> int:
    chars = [args.char] if args.char else [3, 2]
    lam = parse_lambda(args.__dict__.get("lambda"))
    failures = 0
    verified = 0
    t0 = time.perf_counter()
    for p in chars:
        ok = cuspaut.check_inverse(p)
        print(f"char {p}: inverse formula and h∘h⁻¹ = id: {'ok' if ok else 'FAILED'}")
        failures += not ok
        keys = [k for k in sorted(cuspaut.FAMILIES) if cuspaut.FAMILIES[k].p == p]
        if args.case:
            keys = [k for k in keys if k.endswith("." + args.case)]
            if not keys:
                raise BiqError(f"no case {args.case!r} in characteristic {p}")
        groups = cuspaut.stated_groups()
        for key in keys:
            problems = []
            for name in cuspaut.CASE_FORMULAS[key]:
                if not cuspaut.check_formula(name):
                    problems.append(f"conjugation formula {name}")
            systems = 0
            for (gkey, kind, glam), pieces in sorted(groups.items(), key=lambda kv: repr(kv[0])):
                if gkey != key:
                    continue
                lams = _lams_for(glam, lam)
                if lams is False:
                    continue
                try:
                    rep = cuspaut.verify_conditions(pieces, lams=lams)
                except CHECK_FAILURES as exc:
                    problems.append(f"{kind} system (λ={glam}): {exc}")
                    continue
                if not rep["symbolic"]:
                    problems.append(f"{kind} system (λ={glam}): symbolic direction")
                systems += 1
            formulas = ", ".join(cuspaut.CASE_FORMULAS[key])
            if problems:
                failures += 1
                print(f"  {key}: FAILED")
                for pr in problems:
                    print(f"    {pr}")
            else:
                verified += 1
                print(f"  {key}: verified (conjugation {formulas}; condition systems: {systems})")
    print(f"{verified} cases verified, {failures} failed, {time.perf_counter() - t0:.1f}s")
    return 1 if failures else 0


def _lams_for(stated_lam, requested):
    """λ values to test a stated system at; False to skip it."""
    if requested is None:
        return None
    if stated_lam is None:
        return None
    if stated_lam == "symbolic":
        if requested == 0:
            return False
        return None if requested == "symbolic" else [requested]
    if requested == "symbolic":
        return False
    return None if stated_lam == requested else False


def _family_from(args):
    lam = parse_lambda(args.__dict__.get("lambda"))
    if lam == "symbolic":
        raise BiqError("enumeration needs a concrete λ")
    return cuspaut.family(args.family, lam)


def cmd_centralizer(args) -> int:
    fam = _family_from(args)
    R = parse_ring_spec(args.ring)
    res, struct = cuspaut.centralizer_scheme(fam, R)
    print(f"family {fam.key} ({fam.spec.group}) over {args.ring}")
    print(f"centralizer points: {len(res)}")
    print(f"structure: {display(struct.label)}")
    quotient = cuspaut.centralizer_structure(fam, R.base)
    print(f"modulo α(G): {display(quotient.label)}")
    return 0


def cmd_normalizer(args) -> int:
    from biq.grouprec import MAX_TABLE, recognize
    fam = _family_from(args)
    R = parse_ring_spec(args.ring)
    res = cuspaut.normalizer_enum(fam, R)
    print(f"family {fam.key} ({fam.spec.group}) over {args.ring}")
    print(f"normalizer points: {len(res)}")
    cen = cuspaut.centralizer_enum(fam, R, with_table=False)
    print(f"centralizer points: {len(cen)}")
    if res.table is not None:
        try:
            print(f"group of points: {display(recognize(res.table))}")
        except NotInCatalog:
            print(f"group of points: order {res.table.n}, not in the catalog")
    elif len(res) > MAX_TABLE:
        print(f"group of points: not recognized (more than {MAX_TABLE} points)")
    return 0


def cmd_fixed_locus(args) -> int:
    c = parse_curve(args.curve)
    h = pick_aut(c, args.aut)
    fl = ellipt.fixed_locus(h)
    print(f"curve {c}, automorphism {h}")
    print(f"fixed points: {len(fl.points)} ({', '.join('O' if P is None else str(P) for P in fl.points)})")
    print(f"contact order at O: {fl.v}")
    print(f"fixed locus: {display(fl.label)}")
    return 0


def cmd_expand(args) -> int:
    c = parse_curve(args.curve)
    h = pick_aut(c, args.aut)
    print(f"z∘h = {ellipt.formal_expand(h, args.prec)}")
    return 0


def cmd_fgl(args) -> int:
    c = parse_curve(args.curve)
    print(f"F(z1, z2) = {ellipt.curve_fgl(c, 4)} mod (z1^4, z2^4)")
    return 0


def cmd_m_group(args) -> int:
    rows = {r.key: r for r in load_rows(args)}
    if args.row not in rows:
        raise BiqError(f"unknown row {args.row!r}; see list-cases")
    row = rows[args.row]
    inst = tables.instantiate(row)
    M = mgroup.compute_M(inst.setup)
    print(f"M = {display(M.label)}")
    for w in M.witnesses:
        d = w.describe()
        print(f"  h_E = {d['h_E']}")
        print(f"  h_C = {d['h_C']}")
        print(f"  action on G: {d['action']}")
    for n in M.notes:
        print(f"  note: {n}")
    want = row.expected["M"]
    if M.label != want:
        print(f"expected M = {display(want)}")
        return 1
    return 0


def cmd_reproduce_tables(args) -> int:
    rows = load_rows(args)
    report = tables.run_all(rows, args.table, crosscheck=not args.no_crosscheck)
    md = report.markdown()
    print(md)
    for r in report.mismatches:
        print(f"MISMATCH {r.key}: " + "; ".join(f"{k}: expected {e}, computed {c}" for k, (e, c) in r.diff.items()))
    print(f"{len(report.results)} rows, {len(report.mismatches)} mismatches")
    if args.timing:
        print(f"total {report.total_ms} ms")
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(report.to_json(timing=args.timing), indent=2, ensure_ascii=False) + "\n")
        out.with_suffix(".md").write_text(md + "\n")
    return 0 if report.ok else 1


def cmd_list_cases(args) -> int:
    for r in sorted(load_rows(args), key=lambda r: r.key):
        e = r.expected
        print(f"{r.key}\t{r.G}\tF{r.p ** r.k}\t{e['cE']}\t{e['cC']}\t{e['M']}")
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biq", description="Automorphism schemes of (quasi-)bielliptic surfaces.")
    ap.add_argument("--registry", help="case registry JSON (default: the shipped one)")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-formulas", help="check closed forms and condition systems")
    s.add_argument("--char", type=int, choices=(2, 3))
    s.add_argument("--case", choices=list(CASE_LETTERS))
    s.add_argument("--lambda", help="field-element literal or 'symbolic'")
    s.set_defaults(run=cmd_verify_formulas)

    for name, fn in (("centralizer", cmd_centralizer), ("normalizer", cmd_normalizer)):
        s = sub.add_parser(name, help=f"{name} of a family over a test ring")
        s.add_argument("--family", required=True, choices=sorted(cuspaut.FAMILIES))
        s.add_argument("--ring", required=True, help="e.g. F16[e]/e2")
        s.add_argument("--lambda")
        s.set_defaults(run=fn)

    s = sub.add_parser("fixed-locus", help="fixed scheme of an automorphism fixing O")
    s.add_argument("--curve", required=True, help="F<q>:a1,a2,a3,a4,a6")
    s.add_argument("--aut", required=True, type=int)
    s.set_defaults(run=cmd_fixed_locus)

    s = sub.add_parser("expand", help="power series of an automorphism in z = x/y")
    s.add_argument("--curve", required=True)
    s.add_argument("--aut", required=True, type=int)
    s.add_argument("--prec", type=int, default=4)
    s.set_defaults(run=cmd_expand)

    s = sub.add_parser("fgl", help="formal group law mod degree 4")
    s.add_argument("--curve", required=True)
    s.set_defaults(run=cmd_fgl)

    s = sub.add_parser("m-group", help="the étale quotient M for a registry row")
    s.add_argument("--row", required=True)
    s.set_defaults(run=cmd_m_group)

    s = sub.add_parser("reproduce-tables", help="recompute every registry row")
    s.add_argument("--table", type=int, choices=(1, 2, 3))
    s.add_argument("--out", help="JSON report path; markdown goes next to it with suffix .md")
    s.add_argument("--timing", action="store_true", help="include timings (output is then not byte-stable)")
    s.add_argument("--no-crosscheck", action="store_true")
    s.set_defaults(run=cmd_reproduce_tables)

    s = sub.add_parser("list-cases", help="registry rows with their expected labels")
    s.set_defaults(run=cmd_list_cases)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except CHECK_FAILURES as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except BiqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
