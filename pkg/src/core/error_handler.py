"""
Модуль централизованной обработки ошибок.

Классифицирует исключения пакета по категориям и критичности,
логирует их, сохраняет JSON-отчёты и определяет код завершения CLI.
"""

import json
import logging
import traceback
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..config.settings import DEFAULT_LOG_DIR
from .exceptions import (
    ConfigError,
    GeometryError,
    IntegrityError,
    NumericFailure,
    OverconvergenceError,
    SeriesFileError,
    StageFailure,
    ValidationError,
)


class ErrorCategories:
    """Категории ошибок для классификации."""

    CONFIGURATION = "configuration"
    GEOMETRY = "geometry"
    VALIDATION = "validation"
    NUMERIC_BUDGET = "numeric_budget"
    INTEGRITY = "integrity"
    FILE_OPERATIONS = "file_operations"
    SYSTEM = "system"
    UNKNOWN = "unknown"


class ErrorSeverity:
    """Уровни критичности ошибок."""

    CRITICAL = "critical"
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"

    ORDER = (CRITICAL, HIGH, MEDIUM, LOW)


# Первый подходящий класс определяет категорию
_ERROR_MAPPING: List[Tuple[type, str, str]] = [
    (SeriesFileError, ErrorCategories.FILE_OPERATIONS, ErrorSeverity.HIGH),
    (ConfigError, ErrorCategories.CONFIGURATION, ErrorSeverity.MEDIUM),
    (GeometryError, ErrorCategories.GEOMETRY, ErrorSeverity.MEDIUM),
    (ValidationError, ErrorCategories.VALIDATION, ErrorSeverity.MEDIUM),
    (NumericFailure, ErrorCategories.NUMERIC_BUDGET, ErrorSeverity.HIGH),
    (IntegrityError, ErrorCategories.INTEGRITY, ErrorSeverity.CRITICAL),
    (FileNotFoundError, ErrorCategories.FILE_OPERATIONS, ErrorSeverity.HIGH),
    (PermissionError, ErrorCategories.FILE_OPERATIONS, ErrorSeverity.HIGH),
    (MemoryError, ErrorCategories.SYSTEM, ErrorSeverity.CRITICAL),
    (OSError, ErrorCategories.SYSTEM, ErrorSeverity.HIGH),
]

_LOG_LEVELS = {
    ErrorSeverity.CRITICAL: logging.CRITICAL,
    ErrorSeverity.HIGH: logging.ERROR,
    ErrorSeverity.MEDIUM: logging.WARNING,
    ErrorSeverity.LOW: logging.INFO,
}

_SEVERITY_MARKS = {
    ErrorSeverity.CRITICAL: "🚨",
    ErrorSeverity.HIGH: "⚠️",
    ErrorSeverity.MEDIUM: "⚡",
    ErrorSeverity.LOW: "ℹ️",
}


def classify_error(error: BaseException) -> Tuple[str, str]:
    """
    Классифицирует ошибку.

    Returns:
        tuple: (категория, уровень критичности)
    """
    for exc_type, category, severity in _ERROR_MAPPING:
        if isinstance(error, exc_type):
            return category, severity
    return ErrorCategories.UNKNOWN, ErrorSeverity.HIGH


def exit_code_for(error: BaseException) -> int:
    """Код завершения CLI: 1 для ошибок ввода, 2 для численных отказов."""
    if isinstance(error, OverconvergenceError):
        return error.exit_code()
    return 1


def _error_location(error: BaseException) -> Tuple[Optional[str], Optional[int]]:
    """Путь к полю и номер этапа, если исключение их несёт."""
    field_path = getattr(error, "field", None) if isinstance(error, (ValidationError, IntegrityError)) else None
    stage = getattr(error, "stage", None) if isinstance(error, (StageFailure, IntegrityError)) else None
    return field_path, stage


@dataclass
class ErrorContext:
    """Обработанная ошибка: что упало, где и с каким кодом завершения."""

    timestamp: datetime
    operation: str
    component: str
    error_type: str
    error_message: str
    category: str
    severity: str
    exit_code: int
    field_path: Optional[str] = None
    stage: Optional[int] = None
    stack_trace: Optional[str] = None
    additional_data: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_exception(
        cls,
        error: BaseException,
        operation: str,
        component: str,
        additional_data: Optional[Dict[str, Any]] = None,
    ) -> "ErrorContext":
        category, severity = classify_error(error)
        field_path, stage = _error_location(error)
        data = dict(additional_data or {})
        if isinstance(error, OverconvergenceError):
            data.update({k: str(v) for k, v in error.details.items()})
        return cls(
            timestamp=datetime.now(),
            operation=operation,
            component=component,
            error_type=type(error).__name__,
            error_message=str(error),
            category=category,
            severity=severity,
            exit_code=exit_code_for(error),
            field_path=field_path,
            stage=stage,
            stack_trace="".join(traceback.format_exception(type(error), error, error.__traceback__))
            if error.__traceback__
            else None,
            additional_data=data,
        )

    @property
    def location(self) -> str:
        parts = []
        if self.stage is not None:
            parts.append(f"этап {self.stage}")
        if self.field_path:
            parts.append(self.field_path)
        return ", ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["timestamp"] = self.timestamp.isoformat()
        return data


class ErrorHandler:
    """
    Централизованный обработчик ошибок.

    Хранит историю, логирует по уровню критичности и при необходимости
    сохраняет отчёт об ошибке в JSON.
    """

    def __init__(
        self,
        log_errors: bool = True,
        save_error_reports: bool = True,
        reports_dir: Union[str, Path] = DEFAULT_LOG_DIR / "error_reports",
    ):
        self.log_errors = log_errors
        self.save_error_reports = save_error_reports
        self.reports_dir = Path(reports_dir)
        self.logger = logging.getLogger(self.__class__.__name__)
        self.error_history: List[ErrorContext] = []

    def handle_error(
        self,
        error: Exception,
        operation: str,
        component: str = "unknown",
        additional_data: Optional[Dict[str, Any]] = None,
        reraise: bool = False,
    ) -> ErrorContext:
        """
        Регистрирует ошибку.

        Args:
            error: Исключение для обработки
            operation: Название операции (подкоманда CLI)
            component: Компонент, в котором произошла ошибка
            additional_data: Дополнительные данные для отчёта
            reraise: Повторно выбросить исключение после обработки

        Returns:
            ErrorContext: Контекст обработанной ошибки
        """
        context = ErrorContext.from_exception(error, operation, component, additional_data)
        self.error_history.append(context)

        if self.log_errors:
            self._log_error(context)
        if self.save_error_reports:
            self._save_error_report(context)

        if reraise:
            raise error
        return context

    def _log_error(self, context: ErrorContext) -> None:
        where = f" ({context.location})" if context.location else ""
        self.logger.log(
            _LOG_LEVELS.get(context.severity, logging.ERROR),
            f"[{context.component}] {context.operation}{where}: {context.error_type} - {context.error_message}",
        )
        if context.stack_trace:
            trace_level = logging.CRITICAL if context.severity == ErrorSeverity.CRITICAL else logging.DEBUG
            self.logger.log(trace_level, f"Stack trace:\n{context.stack_trace}")

    def _save_error_report(self, context: ErrorContext) -> Optional[Path]:
        filepath = self.reports_dir / (
            f"error_{context.timestamp.strftime('%Y%m%d_%H%M%S_%f')}_{context.component}.json"
        )
        try:
            self.reports_dir.mkdir(parents=True, exist_ok=True)
            filepath.write_text(json.dumps(context.to_dict(), indent=2, ensure_ascii=False, default=str), encoding="utf-8")
        except OSError as e:
            self.logger.warning(f"Не удалось сохранить отчёт об ошибке: {e}")
            return None
        return filepath

    def get_error_summary(self) -> Dict[str, Any]:
        """Статистика по обработанным ошибкам."""
        summary: Dict[str, Any] = {
            "total_errors": len(self.error_history),
            "categories": dict(Counter(ctx.category for ctx in self.error_history)),
            "components": dict(Counter(ctx.component for ctx in self.error_history)),
            "severity_levels": dict(Counter(ctx.severity for ctx in self.error_history)),
            "exit_codes": dict(Counter(ctx.exit_code for ctx in self.error_history)),
        }
        if self.error_history:
            summary["most_recent"] = self.error_history[-1].to_dict()
        return summary

    def clear_error_history(self) -> None:
        self.error_history.clear()

    def get_recent_errors(self, count: int = 10) -> List[ErrorContext]:
        return self.error_history[-count:]

    def has_critical_errors(self) -> bool:
        return any(ctx.severity == ErrorSeverity.CRITICAL for ctx in self.error_history)


class ErrorReporter:
    """Текстовая сводка ошибок запуска для stderr."""

    def __init__(self, error_handler: ErrorHandler):
        self.error_handler = error_handler

    def generate_summary_report(self) -> str:
        summary = self.error_handler.get_error_summary()
        if summary["total_errors"] == 0:
            return "🎉 Ошибок не обнаружено!"

        lines = ["📊 ОТЧЁТ ОБ ОШИБКАХ", "=" * 50, f"Всего ошибок: {summary['total_errors']}", ""]

        lines.append("📋 По категориям:")
        lines.extend(f"  • {name}: {count}" for name, count in sorted(summary["categories"].items()))
        lines.append("")

        levels = summary["severity_levels"]
        lines.append("⚠️  По уровням критичности:")
        lines.extend(
            f"  {_SEVERITY_MARKS[s]} {s}: {levels[s]}" for s in ErrorSeverity.ORDER if s in levels
        )
        lines.append("")

        recent = self.error_handler.error_history[-1]
        lines.append("🕒 Последняя ошибка:")
        lines.append(f"  • Операция: {recent.operation}")
        if recent.location:
            lines.append(f"  • Где: {recent.location}")
        lines.append(f"  • Тип: {recent.error_type}")
        lines.append(f"  • Сообщение: {recent.error_message}")
        lines.append(f"  • Код завершения: {recent.exit_code}")
        return "\n".join(lines)
