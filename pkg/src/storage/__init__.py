"""
Модуль хранения.

Файлы рядов с сертификатами, текстовые и CSV-отчёты, отчёты xlsx.
"""

from .series_file import (
    FORMAT_NAME,
    save_series,
    load_series,
    series_to_dict,
    series_from_dict,
    series_to_text,
)
from .report import (
    TABLE,
    CSV,
    FORMATS,
    ReportTable,
    EvaluationGrid,
    as_table,
    emit_report,
    format_value,
)
from .workbook import WorkbookStyles, WorkbookWriter, write_workbook

__all__ = [
    "FORMAT_NAME",
    "save_series",
    "load_series",
    "series_to_dict",
    "series_from_dict",
    "series_to_text",
    "TABLE",
    "CSV",
    "FORMATS",
    "ReportTable",
    "EvaluationGrid",
    "as_table",
    "emit_report",
    "format_value",
    "WorkbookStyles",
    "WorkbookWriter",
    "write_workbook",
]
