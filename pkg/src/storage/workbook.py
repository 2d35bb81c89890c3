"""
Отчёт в формате xlsx.

Лист с таблицей отчёта (заголовок с заливкой, рамки, закреплённая
строка заголовков) и скрытый лист «Метаданные».
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from ..config.settings import APP_NAME, APP_VERSION
from .report import ReportTable, as_table

logger = logging.getLogger(__name__)


@dataclass
class ColorScheme:
    """Цвета отчёта."""

    HEADER_FILL = "FCE4D6"
    HEADER_FONT = "000000"
    DATA_FONT = "000000"
    TITLE_FONT = "1F4E78"
    BORDER_COLOR = "000000"


class WorkbookStyles:
    """Шрифты, заливки, рамки и выравнивания листа отчёта."""

    def __init__(self):
        self.colors = ColorScheme()
        self._init_fonts()
        self._init_fills()
        self._init_borders()
        self._init_alignments()

    def _init_fonts(self) -> None:
        self.title_font = Font(name="Calibri", size=12, bold=True, color=self.colors.TITLE_FONT)
        self.header_font = Font(name="Calibri", size=11, bold=True, color=self.colors.HEADER_FONT)
        self.data_font = Font(name="Calibri", size=11, bold=False, color=self.colors.DATA_FONT)

    def _init_fills(self) -> None:
        self.header_fill = PatternFill(
            start_color=self.colors.HEADER_FILL,
            end_color=self.colors.HEADER_FILL,
            fill_type="solid",
        )

    def _init_borders(self) -> None:
        thin_side = Side(border_style="thin", color=self.colors.BORDER_COLOR)
        self.cell_border = Border(left=thin_side, right=thin_side, top=thin_side, bottom=thin_side)

    def _init_alignments(self) -> None:
        self.center_alignment = Alignment(horizontal="center", vertical="center", wrap_text=False)
        self.right_alignment = Alignment(horizontal="right", vertical="center", wrap_text=False)

    def get_header_style(self) -> Dict[str, Any]:
        return {
            "font": self.header_font,
            "fill": self.header_fill,
            "border": self.cell_border,
            "alignment": self.center_alignment,
        }

    def get_data_style(self) -> Dict[str, Any]:
        return {
            "font": self.data_font,
            "border": self.cell_border,
            "alignment": self.right_alignment,
        }

    def apply_style_to_cell(self, cell, style_dict: Dict[str, Any]) -> None:
        for name, value in style_dict.items():
            setattr(cell, name, value)


class WorkbookWriter:
    """
    Запись таблиц отчёта в xlsx.

    Числа записываются как числа Excel; точное текстовое представление
    хранится в CSV-отчёте.
    """

    # Строка 1 занимает название отчёта
    start_row = 2

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.styles = WorkbookStyles()

    def _ensure_xlsx_extension(self, output_path: Union[str, Path]) -> Path:
        path = Path(output_path)
        if path.suffix.lower() != ".xlsx":
            new_path = path.with_suffix(".xlsx")
            self.logger.info(f"📝 Изменено расширение файла: {output_path} → {new_path}")
            return new_path
        return path

    def _write_table(self, ws, table: ReportTable) -> None:
        ws["A1"] = table.title
        ws["A1"].font = self.styles.title_font

        header_style = self.styles.get_header_style()
        for col, header in enumerate(table.headers, start=1):
            cell = ws.cell(row=self.start_row, column=col, value=header)
            self.styles.apply_style_to_cell(cell, header_style)

        data_style = self.styles.get_data_style()
        for r, row in enumerate(table.rows, start=self.start_row + 1):
            for col, value in enumerate(row, start=1):
                cell = ws.cell(row=r, column=col, value=_cell_value(value))
                self.styles.apply_style_to_cell(cell, data_style)

        ws.freeze_panes = f"A{self.start_row + 1}"
        for col, header in enumerate(table.headers, start=1):
            width = max([len(header)] + [len(str(row[col - 1])) for row in table.rows])
            ws.column_dimensions[get_column_letter(col)].width = min(width + 2, 30)

    def _create_metadata_sheet(self, wb: Workbook, metadata: Dict[str, Any]) -> None:
        ws = wb.create_sheet("Метаданные")
        ws.sheet_state = "hidden"
        ws["A1"] = "МЕТАДАННЫЕ ОТЧЁТА"
        ws["A1"].font = Font(bold=True, size=14, color=self.styles.colors.TITLE_FONT)
        rows = {"Программа:": APP_NAME, "Версия:": APP_VERSION, **metadata}
        for r, (key, value) in enumerate(rows.items(), start=3):
            ws.cell(row=r, column=1, value=str(key))
            ws.cell(row=r, column=2, value=_cell_value(value)).font = Font(bold=True)

    def write(
        self,
        obj: Any,
        output_path: Union[str, Path],
        metadata: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """
        Записывает отчёт по объекту в xlsx.

        Args:
            obj: Ряд, сертификат, отчёт подгонки, перестановка или сетка
            output_path: Путь к файлу (расширение приводится к .xlsx)
            metadata: Дополнительные строки скрытого листа

        Returns:
            Path: Путь к записанному файлу
        """
        table = as_table(obj)
        path = self._ensure_xlsx_extension(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)

        wb = Workbook()
        ws = wb.active
        ws.title = "Отчёт"
        self._write_table(ws, table)
        self._create_metadata_sheet(wb, metadata or {})
        wb.save(path)
        self.logger.info(f"✅ Отчёт xlsx создан: {path} ({len(table.rows)} строк)")
        return path


def _cell_value(value: Any) -> Any:
    if value is None or isinstance(value, (str, bool, int, float)):
        return value
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def write_workbook(
    obj: Any, output_path: Union[str, Path], metadata: Optional[Dict[str, Any]] = None
) -> Path:
    """Записывает отчёт в xlsx."""
    return WorkbookWriter().write(obj, output_path, metadata)
