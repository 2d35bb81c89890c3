"""
Основной модуль приложения.

Иерархия исключений и централизованная обработка ошибок.
Приложение командной строки: src.core.app, оркестратор: src.core.workflow.
"""

from .exceptions import (
    OverconvergenceError,
    ValidationError,
    GeometryError,
    ConfigError,
    DimensionError,
    EnumerationError,
    DegreeLimitError,
    PreconditionError,
    PoleCollisionError,
    SeriesFileError,
    NumericFailure,
    ApproximationBudgetError,
    StageFailure,
    MuExhaustedError,
    IntegrityError,
)

from .error_handler import (
    ErrorHandler,
    ErrorReporter,
    ErrorContext,
    ErrorCategories,
    ErrorSeverity,
    classify_error,
    exit_code_for,
)

__all__ = [
    # Exceptions
    "OverconvergenceError",
    "ValidationError",
    "GeometryError",
    "ConfigError",
    "DimensionError",
    "EnumerationError",
    "DegreeLimitError",
    "PreconditionError",
    "PoleCollisionError",
    "SeriesFileError",
    "NumericFailure",
    "ApproximationBudgetError",
    "StageFailure",
    "MuExhaustedError",
    "IntegrityError",
    # Error Handler
    "ErrorHandler",
    "ErrorReporter",
    "ErrorContext",
    "ErrorCategories",
    "ErrorSeverity",
    "classify_error",
    "exit_code_for",
]
