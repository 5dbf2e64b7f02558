import json

import pandas as pd
import pytest

from modules.reports import FAIL, PASS, SKIPPED, CheckReport, ReportsModule, status_of


def sample_reports():
    ok = CheckReport("torus4", "transverse_lefschetz", PASS,
                     [{"degree": 1, "rank": 4, "iso": True}, {"degree": 0, "rank": 1, "iso": True}], max_s=1)
    bad = CheckReport("torus4", "exact_coexact")
    bad.per_degree = [{"degree": 3, "a": True}]
    bad.fail("part b fails in degree 3")
    skipped = CheckReport("torus4", "primitive_decomposition", SKIPPED)
    return [ok, bad, skipped]


def test_fail_records_reason():
    r = CheckReport("m", "c")
    assert r.passed
    r.fail("broken")
    assert r.status == FAIL
    assert not r.passed
    assert r.details["failures"] == ["broken"]


def test_skipped_counts_as_passed():
    assert CheckReport("m", "c", SKIPPED).passed
    assert status_of(True) == PASS and status_of(False) == FAIL


def test_to_dict_sorts_degrees():
    data = sample_reports()[0].to_dict()
    assert [row["degree"] for row in data["per_degree"]] == [0, 1]
    assert "details" not in data and "seed" not in data


def test_envelope_and_json():
    module = ReportsModule(sample_reports(), "lefschetz", "zoo:torus4")
    env = module.envelope()
    assert env["schema_version"] == 1
    assert env["status"] == FAIL
    assert json.loads(module.to_json()) == env
    assert module.to_json() == module.to_json()


def test_dataframe_and_text():
    reports = sample_reports()
    df = ReportsModule.to_dataframe(reports[0])
    assert list(df["degree"]) == [0, 1]
    text = ReportsModule(reports).render_text()
    assert "[PASS] transverse_lefschetz on torus4  max_s = 1" in text
    assert "failure: part b fails in degree 3" in text


def test_filter_degrees():
    module = ReportsModule(sample_reports()).filter_degrees(0)
    assert [len(r.per_degree) for r in module.reports] == [1, 0, 0]
    assert module.reports[1].status == FAIL


def test_export_csv_and_excel(tmp_path):
    module = ReportsModule(sample_reports(), "lefschetz", "zoo:torus4")
    csv_path = module.export(str(tmp_path / "out.csv"))
    df = pd.read_csv(csv_path)
    assert set(df["checker"]) == {"transverse_lefschetz", "exact_coexact"}
    xlsx_path = module.export(str(tmp_path / "out.xlsx"))
    sheets = pd.read_excel(xlsx_path, sheet_name=None, engine="openpyxl")
    assert len(sheets) == 3


def test_export_pdf_and_json(tmp_path):
    module = ReportsModule(sample_reports())
    pdf = tmp_path / "out.pdf"
    module.export(str(pdf))
    assert pdf.read_bytes().startswith(b"%PDF")
    js = tmp_path / "out.json"
    module.export(str(js))
    assert json.loads(js.read_text(encoding="utf-8"))["schema_version"] == 1


def test_export_unknown_suffix(tmp_path):
    with pytest.raises(ValueError):
        ReportsModule(sample_reports()).export(str(tmp_path / "out.txt"))
