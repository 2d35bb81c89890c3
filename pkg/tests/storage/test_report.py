"""
Тесты текстовых и CSV-отчётов.
"""

import numpy as np
import pytest

from src.core.exceptions import ValidationError
from src.rearrange.steering import TermSequence, steer_rearrangement
from src.series.polynomial import MultiPolynomial
from src.storage.report import (
    CSV,
    TABLE,
    EvaluationGrid,
    ReportTable,
    as_table,
    emit_report,
    format_value,
)
from src.universal.certificate import Certificate, StageRecord


def _record(stage: int, lam: int) -> StageRecord:
    return StageRecord(
        stage=stage,
        task_label=str(stage),
        lam=lam,
        epsilon=0.1,
        delta=0.05,
        level=1,
        err_k=0.1 / 3,
        err_l_block=1e-5,
        err_l_limit=2e-5,
        degree=lam,
    )


@pytest.mark.unit
class TestFormatValue:
    """Текст ячеек без потери точности."""

    def test_float_repr_round_trip(self):
        value = 0.1 / 3
        assert float(format_value(value)) == value
        assert format_value(np.float64(0.5)) == "0.5"

    def test_other_values(self):
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(np.int64(7)) == "7"
        assert format_value("K") == "K"


@pytest.mark.unit
class TestCertificateReport:
    """CSV сертификата."""

    def test_empty_certificate_header_only(self):
        text = emit_report(Certificate(), CSV)
        assert text == "stage,lambda,err_K,err_L_block,err_L_limit,degree\n"

    def test_one_stage(self):
        text = emit_report(Certificate(stages=(_record(1, 12),)), CSV)
        lines = text.splitlines()
        assert len(lines) == 2
        values = lines[1].split(",")
        assert values[:2] == ["1", "12"]
        assert float(values[2]) == 0.1 / 3

    def test_table_format(self):
        text = emit_report(Certificate(stages=(_record(1, 12), _record(2, 30))), TABLE)
        lines = text.splitlines()
        assert lines[0] == "Сертификат"
        assert lines[1].split() == ["stage", "lambda", "err_K", "err_L_block", "err_L_limit", "degree"]
        assert len(lines) == 5

    def test_unknown_format(self):
        with pytest.raises(ValidationError):
            emit_report(Certificate(), "json")


@pytest.mark.unit
class TestOtherReports:
    """Сетки значений, перестановки и неподдерживаемые объекты."""

    def test_evaluation_grid_abs(self):
        grid = EvaluationGrid(MultiPolynomial(1, {(1,): 1.0}), np.array([[3 + 4j], [-2.0]]))
        lines = emit_report(grid, CSV).splitlines()
        assert lines[0] == "x_1,y_1,re,im,abs"
        assert len(lines) == 3
        assert float(lines[1].split(",")[-1]) == 5.0
        assert float(lines[2].split(",")[-1]) == 2.0

    def test_rearrangement_rows(self):
        result = steer_rearrangement(TermSequence.geometric(3))
        lines = emit_report(result, CSV).splitlines()
        assert lines == ["position,term_index,partial_sum", "0,0,1.0", "1,1,1.5", "2,2,1.75"]

    def test_row_length_checked(self):
        with pytest.raises(ValidationError):
            ReportTable("t", ["a", "b"], [[1]])

    def test_unsupported_object(self):
        with pytest.raises(ValidationError):
            as_table(object())
