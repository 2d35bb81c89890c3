"""
Модуль конфигурации.

Константы и настройки по умолчанию, переопределения из окружения,
валидация конфигурации. Чтение INI: src.config.config_reader.
"""

from .settings import (
    APP_NAME,
    APP_VERSION,
    APP_DESCRIPTION,
    SERIES_FORMAT_VERSION,
    SamplingSettings,
    ApproximationSettings,
    TaylorSettings,
    UniversalSettings,
    LoggingSettings,
    TestSettings,
    get_environment_settings,
    get_runtime_info,
)

from .validation import (
    ValidationResult,
    ConfigValidator,
    SystemValidator,
    validate_system,
)

__all__ = [
    # Settings
    "APP_NAME",
    "APP_VERSION",
    "APP_DESCRIPTION",
    "SERIES_FORMAT_VERSION",
    "SamplingSettings",
    "ApproximationSettings",
    "TaylorSettings",
    "UniversalSettings",
    "LoggingSettings",
    "TestSettings",
    "get_environment_settings",
    "get_runtime_info",
    # Validation
    "ValidationResult",
    "ConfigValidator",
    "SystemValidator",
    "validate_system",
]
