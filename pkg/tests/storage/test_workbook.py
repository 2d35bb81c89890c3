"""
Тесты отчётов xlsx.
"""

import pytest
from openpyxl import load_workbook

from src.storage.report import ReportTable
from src.storage.workbook import WorkbookWriter, write_workbook
from src.universal.certificate import Certificate


@pytest.mark.unit
class TestWorkbookWriter:
    """Лист отчёта и скрытый лист метаданных."""

    def test_table_written(self, tmp_path):
        table = ReportTable("Нумерация", ["index", "multi"], [[0, "(0, 0)"], [1, "(1, 0)"]])
        path = write_workbook(table, tmp_path / "enum.xlsx", {"Схема:": "graded"})

        wb = load_workbook(path)
        ws = wb["Отчёт"]
        assert ws["A1"].value == "Нумерация"
        assert [c.value for c in ws[2]] == ["index", "multi"]
        assert ws["A4"].value == 1
        assert ws["B4"].value == "(1, 0)"
        assert ws.freeze_panes == "A3"

        meta = wb["Метаданные"]
        assert meta.sheet_state == "hidden"
        values = {meta.cell(row=r, column=1).value: meta.cell(row=r, column=2).value for r in range(3, 6)}
        assert values["Схема:"] == "graded"

    def test_extension_forced(self, tmp_path):
        path = WorkbookWriter().write(Certificate(), tmp_path / "report.csv")
        assert path.suffix == ".xlsx"
        assert path.exists()
        ws = load_workbook(path)["Отчёт"]
        assert ws["A1"].value == "Сертификат"
        assert ws.max_row == 2
