"""
Текстовые отчёты: таблица для консоли и CSV для построения графиков.

Все числа выводятся через repr(float), поэтому float(текст) возвращает
то же значение.
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Any, List, Sequence

import numpy as np

from ..approximation.least_squares import FitReport
from ..core.exceptions import ValidationError
from ..rearrange.steering import RearrangementResult
from ..series.polynomial import MultiPolynomial
from ..universal.builder import UniversalSeries
from ..universal.certificate import Certificate, VerificationReport

logger = logging.getLogger(__name__)

TABLE = "table"
CSV = "csv"
FORMATS = (TABLE, CSV)


@dataclass
class ReportTable:
    """Заголовки и строки отчёта в фиксированном порядке столбцов."""

    title: str
    headers: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def __post_init__(self):
        for n, row in enumerate(self.rows):
            if len(row) != len(self.headers):
                raise ValidationError(
                    f"rows.{n}", f"ожидалось {len(self.headers)} значений, получено {len(row)}"
                )


def format_value(value: Any) -> str:
    """Текст значения ячейки без потери точности."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


# ==================== ТАБЛИЦЫ ====================


def certificate_table(certificate: Certificate) -> ReportTable:
    return ReportTable(
        title="Сертификат",
        headers=["stage", "lambda", "err_K", "err_L_block", "err_L_limit", "degree"],
        rows=[
            [r.stage, r.lam, r.err_k, r.err_l_block, r.err_l_limit, r.degree]
            for r in certificate.stages
        ],
    )


def fit_table(report: FitReport) -> ReportTable:
    rows = []
    for label, error in report.group_errors.items():
        order = report.group_orders.get(label)
        rows.append([label, ",".join(str(k) for k in order) if order else "", error])
    return ReportTable(title="Подгонка", headers=["group", "order", "error"], rows=rows)


def rearrangement_table(result: RearrangementResult) -> ReportTable:
    return ReportTable(
        title="Перестановка",
        headers=["position", "term_index", "partial_sum"],
        rows=[list(row) for row in result.rows()],
    )


def verification_table(report: VerificationReport) -> ReportTable:
    return ReportTable(
        title="Проверка подвижного центра",
        headers=["stage", "center_error", "worst_K_error", "worst_L_error", "ratio"],
        rows=[
            [m.stage, m.center_error, m.worst_k_error, m.worst_l_error, m.ratio]
            for m in report.moving
        ],
    )


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """Значения многочлена в точках сетки."""

    polynomial: MultiPolynomial
    points: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex).reshape(-1, self.polynomial.dimension)
        object.__setattr__(self, "points", points)

    def table(self) -> ReportTable:
        d = self.polynomial.dimension
        headers = [name for i in range(1, d + 1) for name in (f"x_{i}", f"y_{i}")]
        headers += ["re", "im", "abs"]
        values = self.polynomial.evaluate_many(self.points)
        rows = []
        for point, value in zip(self.points, values):
            row: List[Any] = []
            for z in point:
                row += [float(z.real), float(z.imag)]
            row += [float(value.real), float(value.imag), float(abs(value))]
            rows.append(row)
        return ReportTable(title="Значения", headers=headers, rows=rows)


def as_table(obj: Any) -> ReportTable:
    """Таблица отчёта для поддерживаемого объекта."""
    if isinstance(obj, ReportTable):
        return obj
    if isinstance(obj, UniversalSeries):
        return certificate_table(obj.certificate)
    if isinstance(obj, Certificate):
        return certificate_table(obj)
    if isinstance(obj, FitReport):
        return fit_table(obj)
    if isinstance(obj, RearrangementResult):
        return rearrangement_table(obj)
    if isinstance(obj, EvaluationGrid):
        return obj.table()
    if isinstance(obj, VerificationReport):
        return verification_table(obj)
    raise ValidationError("report", f"неподдерживаемый объект отчёта: {type(obj).__name__}")


# ==================== ВЫВОД ====================


def _render_csv(table: ReportTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.headers)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def _render_text(table: ReportTable) -> str:
    cells = [[format_value(v) for v in row] for row in table.rows]
    widths = [len(h) for h in table.headers]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(values: Sequence[str]) -> str:
        return "  ".join(v.rjust(w) for v, w in zip(values, widths)).rstrip()

    out = [table.title, line(table.headers), line(["-" * w for w in widths])]
    out += [line(row) for row in cells]
    return "\n".join(out) + "\n"


def emit_report(obj: Any, fmt: str = TABLE) -> str:
    """
    Формирует отчёт по ряду, сертификату, подгонке, перестановке или сетке.

    Args:
        obj: Объект отчёта
        fmt: 'table' или 'csv'

    Returns:
        str: Текст отчёта (для пустого сертификата CSV содержит только заголовок)
    """
    if fmt not in FORMATS:
        raise ValidationError("format", f"неизвестный формат {fmt!r}, допустимы: {', '.join(FORMATS)}")
    table = as_table(obj)
    logger.debug(f"Отчёт '{table.title}': {len(table.rows)} строк, формат {fmt}")
    if fmt == CSV:
        return _render_csv(table)
    return _render_text(table)
