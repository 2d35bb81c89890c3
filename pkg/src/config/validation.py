"""
Модуль валидации конфигурации и системных требований.

ConfigValidator проверяет согласованность полей между секциями:
размерности области, центра, компактов и порядков производных,
номера осей режима одной внешней оси.
"""

import logging
import sys
from dataclasses import dataclass, field
from typing import List, Tuple

from ..core.exceptions import ConfigError, DimensionError, ValidationError


@dataclass
class ValidationResult:
    """Результат валидации."""

    is_valid: bool = True
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    failures: List[ValidationError] = field(default_factory=list)

    def add_error(self, error: ValidationError) -> None:
        """Добавляет ошибку с путём к полю."""
        self.failures.append(error)
        self.errors.append(error.message)
        self.is_valid = False

    def add_warning(self, warning: str) -> None:
        self.warnings.append(warning)

    def has_errors(self) -> bool:
        return len(self.errors) > 0

    def has_warnings(self) -> bool:
        return len(self.warnings) > 0

    def first_error(self) -> ValidationError:
        if not self.failures:
            raise ValueError("ошибок валидации нет")
        return self.failures[0]


class ConfigValidator:
    """Перекрёстные проверки конфигурации запуска."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def validate_domains(self, config, result: ValidationResult) -> None:
        d = config.run.dimension
        if len(config.run.center) != d:
            result.add_error(
                DimensionError("run.center", f"ожидалось {d} координат, получено {len(config.run.center)}")
            )
        indices = [dom.index for dom in config.domains]
        if indices != list(range(1, d + 1)):
            result.add_error(
                DimensionError("domain", f"ожидались секции [domain.1]..[domain.{d}], получено {indices}")
            )

    def validate_enumeration(self, config, result: ValidationResult) -> None:
        d = config.run.dimension
        for n, a in enumerate(config.run.custom_prefix, start=1):
            if len(a) != d:
                result.add_error(
                    DimensionError(f"run.custom_prefix.{n}", f"мультииндекс {a} не длины {d}")
                )
        for n, a in enumerate(config.run.seminorm_orders, start=1):
            if len(a) != d:
                result.add_error(
                    DimensionError(f"run.seminorm_orders.{n}", f"порядок {a} не длины {d}")
                )
        if config.run.seminorm_orders and config.run.seminorm_radius is None:
            result.add_error(ConfigError("run.seminorm_radius", "для seminorm_orders нужен радиус"))

    def validate_task(self, config, task, result: ValidationResult) -> None:
        d = config.run.dimension
        prefix = f"task.{task.index}"
        if len(task.compacts) != d:
            result.add_error(
                DimensionError(
                    f"{prefix}.compact", f"ожидалось {d} множителей, получено {len(task.compacts)}"
                )
            )
        for n, a in enumerate(task.orders, start=1):
            if len(a) != d:
                result.add_error(DimensionError(f"{prefix}.orders.{n}", f"порядок {a} не длины {d}"))
        if task.outside_axis is not None and not 1 <= task.outside_axis <= d:
            result.add_error(
                ConfigError(f"{prefix}.outside_axis", f"ось должна быть в 1..{d}, получено {task.outside_axis}")
            )
        if not 1 <= task.shift_axis <= d:
            result.add_error(
                ConfigError(f"{prefix}.shift_axis", f"ось должна быть в 1..{d}, получено {task.shift_axis}")
            )
        if task.is_samples and not task.assert_ad:
            result.add_error(
                ConfigError(f"{prefix}.assert_ad", "сырая выборка требует assert_ad = true")
            )
        if task.is_samples and task.orders and any(any(a) for a in task.orders):
            result.add_error(
                ConfigError(f"{prefix}.orders", "производные сырой выборки недоступны")
            )

    def validate(self, config) -> ValidationResult:
        """
        Проверяет согласованность конфигурации.

        Args:
            config: RunConfig

        Returns:
            ValidationResult: Все найденные ошибки в порядке секций
        """
        result = ValidationResult()
        self.validate_domains(config, result)
        self.validate_enumeration(config, result)
        for task in config.tasks:
            self.validate_task(config, task, result)
        if not config.tasks:
            result.add_warning("расписание задач пусто")
        if result.has_errors():
            self.logger.debug(f"Ошибки конфигурации: {result.errors}")
        return result


class SystemValidator:
    """Валидатор системных требований."""

    REQUIRED_PACKAGES = {
        "numpy": "1.26",
        "openpyxl": "3.1.2",
        "dotenv": "1.0.0",
    }

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def validate_python_version(self, min_version: Tuple[int, int] = (3, 10)) -> ValidationResult:
        result = ValidationResult()
        current = sys.version_info[:2]
        if current < min_version:
            result.add_error(
                ValidationError(
                    "python",
                    f"требуется Python {min_version[0]}.{min_version[1]}+, "
                    f"текущая версия: {current[0]}.{current[1]}",
                )
            )
        return result

    def validate_dependencies(self) -> ValidationResult:
        result = ValidationResult()
        for package, min_version in self.REQUIRED_PACKAGES.items():
            try:
                __import__(package)
            except ImportError:
                result.add_error(
                    ValidationError("dependencies", f"отсутствует пакет {package}>={min_version}")
                )
        return result


def validate_system() -> Tuple[bool, str]:
    """
    Проверяет версию Python и зависимости.

    Returns:
        Tuple[bool, str]: (успех, текстовый отчёт)
    """
    validator = SystemValidator()
    lines = []
    ok = True
    for result in (validator.validate_python_version(), validator.validate_dependencies()):
        ok = ok and result.is_valid
        lines.extend(f"❌ {e}" for e in result.errors)
        lines.extend(f"⚠️ {w}" for w in result.warnings)
    if ok:
        lines.append("✅ Системные требования выполнены")
    return ok, "\n".join(lines)
