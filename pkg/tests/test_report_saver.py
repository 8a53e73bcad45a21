"""
Unit tests for report persistence.

Core claims:
    - JSON targets hold exactly the printed JSON report
    - workbooks get one sheet per table and an appended checks sheet
    - unsupported suffixes are rejected before anything is written
"""

import json

import openpyxl
import pytest

from cli.report import REPORT_FORMAT, ReportBundle
from data_manager.report_saver import ReportSaver, sheet_title
from utils.file_initializer import ensure_output_path


# -- Helpers -----------------------------------------------------------------

def _bundle(value=5):
    bundle = ReportBundle("betti", {"space": "mbar", "n": value})
    bundle.add_table("betti", ["k", "b_k"], [[0, 1], [1, 0], [2, value]])
    bundle.add_check("|Mbar_0,5(F_7)|", True, "85 = 85")
    return bundle


# == 1. Paths =================================================================

class TestPaths:
    def test_suffixes(self, tmp_path):
        assert ensure_output_path(str(tmp_path / "a" / "r.json")) == ".json"
        assert (tmp_path / "a").is_dir()
        assert ensure_output_path(str(tmp_path / "r.XLSX")) == ".xlsx"

    def test_unsupported(self, tmp_path):
        with pytest.raises(ValueError):
            ReportSaver(str(tmp_path / "r.txt"))
        assert not (tmp_path / "r.txt").exists()

    def test_new_workbook_header(self, tmp_path):
        path = tmp_path / "r.xlsx"
        ensure_output_path(str(path))
        ws = openpyxl.load_workbook(path)["checks"]
        assert [c.value for c in ws[1]] == ["check", "passed", "detail"]

    @pytest.mark.parametrize("name, title", [("e1", "e1"), ("a:b/c", "a_b_c"), ("x" * 40, "x" * 31)])
    def test_sheet_title(self, name, title):
        assert sheet_title(name) == title


# == 2. Saving ================================================================

class TestSaving:
    def test_json(self, tmp_path):
        path = tmp_path / "r.json"
        with ReportSaver(str(path)) as saver:
            saver.save(_bundle())
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["format"] == REPORT_FORMAT
        assert data["tables"]["betti"]["rows"][2] == [2, 5]

    def test_workbook(self, tmp_path):
        path = tmp_path / "r.xlsx"
        with ReportSaver(str(path)) as saver:
            saver.save(_bundle())
        wb = openpyxl.load_workbook(path)
        rows = list(wb["betti"].values)
        assert rows == [("k", "b_k"), (0, 1), (1, 0), (2, 5)]
        checks = list(wb["checks"].values)
        assert checks[1] == ("betti: |Mbar_0,5(F_7)|", True, "85 = 85")

    def test_tables_replaced_checks_appended(self, tmp_path):
        path = tmp_path / "r.xlsx"
        for value in (5, 6):
            with ReportSaver(str(path)) as saver:
                saver.save(_bundle(value))
        wb = openpyxl.load_workbook(path)
        assert list(wb["betti"].values)[-1] == (2, 6)
        assert wb["checks"].max_row == 3


# == 3. Bundles ===============================================================

class TestBundle:
    def test_passed_and_failures(self):
        bundle = _bundle()
        assert bundle.passed
        bundle.add_check("weight 2", False, "3 − 1 = 1")
        assert not bundle.passed
        assert [c.name for c in bundle.failures()] == ["weight 2"]

    def test_text_is_aligned(self):
        text = _bundle().render("table")
        lines = text.splitlines()
        assert lines[0] == "betti space=mbar n=5"
        assert "  k  b_k" in lines
        assert "  -  ---" in lines
        assert lines[-1] == "verdict: PASS"

    def test_row_width_checked(self):
        with pytest.raises(ValueError):
            ReportBundle("x").add_table("t", ["a", "b"], [[1]])

    def test_json_keeps_unicode(self):
        bundle = ReportBundle("purity", {"n": 4})
        bundle.add_check("weight 2", True, "3 − 1 = 2")
        assert "3 − 1 = 2" in bundle.dumps()
