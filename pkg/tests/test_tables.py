import json

import pytest

from biq import tables
from biq.errors import InvariantViolation, SchemaError

ROWS = tables.registry_load()
BY_KEY = {r.key: r for r in ROWS}


def write(tmp_path, doc, name="reg.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def raw_doc():
    return json.loads(tables.default_registry_path().read_text())


def test_registry_coverage():
    by_table = {t: [r for r in ROWS if r.table == t] for t in (1, 2, 3)}
    assert len(by_table[1]) >= 17
    assert len(by_table[2]) == 5
    assert len(by_table[3]) >= 9
    marks = {r.E.get("mark") for r in by_table[1]} | {r.C.get("mark") for r in by_table[1]}
    assert {"star", "dagger"} <= marks
    assert {r.p for r in by_table[1]} == {13, 3, 2}
    lam_rows = [r for r in by_table[3] if r.C.get("lam") is not None]
    assert {r.C["lam"] for r in lam_rows} >= {0, 1}


def test_shipped_schema_accepts_the_registry():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((tables.default_registry_path().parent / "registry.schema.json").read_text())
    jsonschema.validate(raw_doc(), schema)


def test_empty_registry(tmp_path):
    with pytest.raises(SchemaError):
        tables.registry_load(write(tmp_path, ""))


def test_malformed_registry(tmp_path):
    with pytest.raises(SchemaError):
        tables.registry_load(write(tmp_path, "{not json"))
    doc = raw_doc()
    del doc["rows"][0]["expected"]
    with pytest.raises(SchemaError):
        tables.registry_load(write(tmp_path, doc))
    doc = raw_doc()
    doc["rows"].append(doc["rows"][0])
    with pytest.raises(SchemaError):
        tables.registry_load(write(tmp_path, doc))


def test_registry_without_rows_of_a_table(tmp_path):
    doc = raw_doc()
    doc["rows"] = [r for r in doc["rows"] if r["table"] == 2]
    rows = tables.registry_load(write(tmp_path, doc))
    assert tables.run_all(rows, table=1).results == []


def test_row_invariant_violation(tmp_path):
    doc = raw_doc()
    row = next(r for r in doc["rows"] if r["key"] == "T1.p13.Z4")
    row["E"]["a"] = [0, 0, 0, 2, 6]  # not j = 1728
    with pytest.raises(InvariantViolation):
        tables.registry_load(write(tmp_path, doc))


def test_negative_control_reports_mismatch():
    row = BY_KEY["T2.alpha3"]
    raw = json.loads(json.dumps(row.raw))
    raw["expected"]["M"] = "Z/2"
    bad = tables.CaseRow(**{k: raw[k] for k in tables._ROW_KEYS}, raw=raw)
    res = tables.run_case(bad)
    assert not res.match
    assert res.diff == {"M": ("Z/2", "Z/4")}
    assert res.to_json()["diff"]["M"] == {"expected": "Z/2", "computed": "Z/4"}


@pytest.mark.parametrize("key", ["T1.p13.Z3xZ3.b", "T1.p3.Z2.a.ii", "T1.p2.Z3.a", "T2.mu3xZ3", "T3.M2"])
def test_run_case_with_crosscheck(key):
    res = tables.run_case(BY_KEY[key], crosscheck=True)
    assert res.match and res.crosscheck
    assert set(res.to_json()) >= {"rowKey", "computed", "expected", "match", "witnesses", "ms"}


def test_elliptic_rows_carry_n():
    for r in ROWS:
        assert ("N" in r.expected) == (not r.quasi)


@pytest.mark.parametrize("entry", tables.registry_aut_tables(), ids=lambda e: e["key"])
def test_aut_tables(entry):
    assert tables.aut_table_check(entry) == {}


def test_aut_table_negative_control():
    entry = json.loads(json.dumps(tables.registry_aut_tables()[0]))
    entry["aut"] = "Z/4"
    assert tables.aut_table_check(entry)["aut"] == ("Z/4", "Z/2")


def test_report_is_byte_stable():
    rows = [r for r in ROWS if r.table == 2]
    a = json.dumps(tables.run_all(rows).to_json(timing=False), sort_keys=True)
    b = json.dumps(tables.run_all(rows).to_json(timing=False), sort_keys=True)
    assert a == b
    md = tables.run_all(rows).markdown()
    assert "### Table 2" in md and "T2.alpha3" in md


def test_stability_on_a_small_row():
    row = BY_KEY["T1.p13.Z2.a.i"]
    base = tables.run_case(row).computed
    assert all(v == base for v in tables.stability(row).values())
