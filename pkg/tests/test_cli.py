import json

import pytest

from biq import tables
from biq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_formulas_char3(capsys):
    code, out, _ = run(capsys, "verify-formulas", "--char", "3")
    assert code == 0
    assert "5 cases verified, 0 failed" in out


def test_verify_formulas_single_case(capsys):
    code, out, _ = run(capsys, "verify-formulas", "--char", "2", "--case", "h")
    assert code == 0
    assert "p2.h: verified" in out and "1 cases verified" in out


def test_centralizer_m2(capsys):
    code, out, _ = run(capsys, "centralizer", "--family", "p2.h", "--ring", "F16[e]/e2", "--lambda", "1")
    assert code == 0
    assert "centralizer points: 512" in out
    assert "structure: (M2 × α2) ⋊ Z/2Z" in out


def test_normalizer_alpha3(capsys):
    code, out, _ = run(capsys, "normalizer", "--family", "p3.d", "--ring", "F9")
    assert code == 0
    assert "normalizer points: 8" in out


def test_m_group(capsys):
    code, out, _ = run(capsys, "m-group", "--row", "T2.alpha3")
    assert code == 0
    assert out.splitlines()[0] == "M = Z/4Z"
    assert "h_C = " in out


def test_fixed_locus_expand_fgl(capsys):
    code, out, _ = run(capsys, "fixed-locus", "--curve", "F13:0,0,0,1,0", "--aut", "1")
    assert code == 0 and "fixed locus: Z/2Z" in out
    code, out, _ = run(capsys, "expand", "--curve", "F13:0,0,0,1,0", "--aut", "0", "--prec", "3")
    assert code == 0 and out.strip() == "z∘h = z + O(z^3)"
    code, out, _ = run(capsys, "fgl", "--curve", "F2:0,0,1,0,0")
    assert code == 0 and "z1^2*z2^2" in out


def test_list_cases(capsys):
    code, out, _ = run(capsys, "list-cases")
    assert code == 0
    assert len(out.splitlines()) == len(tables.registry_load())


def test_reproduce_table_2_and_report_files(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "reproduce-tables", "--table", "2", "--out", str(out_path))
    assert code == 0
    assert "5 rows, 0 mismatches" in out
    first = out_path.read_text()
    assert json.loads(first)["mismatches"] == 0
    assert out_path.with_suffix(".md").exists()
    run(capsys, "reproduce-tables", "--table", "2", "--out", str(out_path))
    assert out_path.read_text() == first


def test_reproduce_tables_mismatch_exits_1(capsys, tmp_path):
    doc = json.loads(tables.default_registry_path().read_text())
    doc["rows"] = [r for r in doc["rows"] if r["key"] == "T2.mu3"]
    doc["rows"][0]["expected"]["cC"] = "Z/3"
    reg = tmp_path / "bad.json"
    reg.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--registry", str(reg), "reproduce-tables")
    assert code == 1
    assert "MISMATCH T2.mu3" in out


@pytest.mark.parametrize("argv", [
    ["centralizer", "--family", "p2.h", "--ring", "F6", "--lambda", "1"],
    ["centralizer", "--family", "p2.h", "--ring", "F4[e]", "--lambda", "1"],
    ["centralizer", "--family", "p2.h", "--ring", "F4", "--bogus"],
    ["fixed-locus", "--curve", "F13:0,0,0,1", "--aut", "0"],
    ["fixed-locus", "--curve", "F13:0,0,0,1,0", "--aut", "9"],
    ["m-group", "--row", "T9.nothing"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_enumeration_guard_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BIQ_MAX_ENUM", "10")
    code, _, err = run(capsys, "centralizer", "--family", "p2.h", "--ring", "F16[e]/e2", "--lambda", "1")
    assert code == 2 and "guard" in err


def test_output_is_byte_stable(capsys):
    outs = [run(capsys, "m-group", "--row", "T3.M2")[1] for _ in range(2)]
    assert outs[0] == outs[1]
