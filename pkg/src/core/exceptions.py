"""Иерархия исключений пакета overconvergence."""

from typing import Any, Dict, Optional


class OverconvergenceError(Exception):
    """Базовое исключение для всех ошибок пакета"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def exit_code(self) -> int:
        """Код завершения CLI для этой ошибки"""
        return 1

    def is_numeric_failure(self) -> bool:
        """Проверяет, является ли ошибка исчерпанием численного бюджета"""
        return False


# ==================== ОШИБКИ ВАЛИДАЦИИ (код 1) ====================


class ValidationError(OverconvergenceError):
    """Некорректные входные данные; хранит путь к полю"""

    def __init__(self, field: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"{field}: {message}", details)
        self.field = field


class GeometryError(ValidationError):
    """Вырожденная геометрия компакта или области"""

    pass


class ConfigError(ValidationError):
    """Ошибка разбора конфигурации"""

    pass


class DimensionError(ValidationError):
    """Несогласованная размерность"""

    pass


class EnumerationError(ValidationError):
    """Некорректная нумерация мультииндексов"""

    pass


class DegreeLimitError(ValidationError):
    """Превышен предел степени по оси"""

    pass


class PreconditionError(ValidationError):
    """Нарушено предусловие операции"""

    pass


class PoleCollisionError(ValidationError):
    """Полюс целевой функции слишком близко к точке выборки"""

    pass


class SeriesFileError(ValidationError):
    """Файл ряда повреждён, обрезан или имеет другую версию формата"""

    pass


# ==================== ЧИСЛЕННЫЕ ОТКАЗЫ (код 2) ====================


class NumericFailure(OverconvergenceError):
    """Численный бюджет исчерпан"""

    def exit_code(self) -> int:
        return 2

    def is_numeric_failure(self) -> bool:
        return True


class ApproximationBudgetError(NumericFailure):
    """Предел степени достигнут без нужной точности; хранит лучший отчёт"""

    def __init__(self, message: str, best_report: Any = None):
        super().__init__(message)
        self.best_report = best_report


class StageFailure(NumericFailure):
    """Этап построения не удался; хранит частичный ряд"""

    def __init__(self, stage: int, message: str, partial_series: Any = None,
                 best_report: Any = None):
        super().__init__(f"этап {stage}: {message}")
        self.stage = stage
        self.partial_series = partial_series
        self.best_report = best_report


class MuExhaustedError(NumericFailure):
    """Множество допустимых индексов μ исчерпано"""

    pass


class IntegrityError(OverconvergenceError):
    """Пересчёт сертификата не совпал с записанным значением"""

    def __init__(self, stage: int, field: str, recorded: float, recomputed: float):
        super().__init__(
            f"этап {stage}: поле {field} записано {recorded!r}, пересчитано {recomputed!r}"
        )
        self.stage = stage
        self.field = field
        self.recorded = recorded
        self.recomputed = recomputed

    def exit_code(self) -> int:
        return 2
