"""
Тесты иерархии исключений и кодов завершения.
"""

import pytest

from src.core.exceptions import (
    ApproximationBudgetError,
    ConfigError,
    GeometryError,
    IntegrityError,
    MuExhaustedError,
    NumericFailure,
    OverconvergenceError,
    PoleCollisionError,
    SeriesFileError,
    StageFailure,
    ValidationError,
)


@pytest.mark.unit
class TestExceptionHierarchy:
    """Путь к полю в сообщении и коды завершения."""

    def test_validation_message_has_field(self):
        error = ConfigError("task.2.compact.1", "неизвестная форма")
        assert error.field == "task.2.compact.1"
        assert str(error) == "task.2.compact.1: неизвестная форма"
        assert error.exit_code() == 1
        assert not error.is_numeric_failure()

    @pytest.mark.parametrize(
        "error_class", [GeometryError, ConfigError, PoleCollisionError, SeriesFileError]
    )
    def test_validation_subclasses(self, error_class):
        error = error_class("field", "message")
        assert isinstance(error, ValidationError)
        assert isinstance(error, OverconvergenceError)
        assert error.exit_code() == 1

    def test_numeric_failures(self):
        budget = ApproximationBudgetError("предел достигнут", best_report="report")
        stage = StageFailure(3, "предел достигнут", partial_series="partial")
        for error in (budget, stage, MuExhaustedError("μ исчерпано")):
            assert isinstance(error, NumericFailure)
            assert error.exit_code() == 2
            assert error.is_numeric_failure()
        assert budget.best_report == "report"
        assert stage.stage == 3
        assert stage.partial_series == "partial"
        assert str(stage).startswith("этап 3")

    def test_integrity_error(self):
        error = IntegrityError(2, "err_K", 0.1, 0.2)
        assert error.exit_code() == 2
        assert (error.stage, error.field) == (2, "err_K")
        assert "0.1" in str(error) and "0.2" in str(error)
